"""Movements leading up to shots."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .extract import STANDARD_LENGTH_M, STANDARD_WIDTH_M, MovementVector
from .ingest import Event, Match

DEFAULT_WINDOW_S = 20


@dataclass(frozen=True)
class PreShotSet:
    match_id: str
    shot_t: int
    shooter: str
    team_id: str
    window_s: int
    groups: dict[str, tuple[MovementVector, ...]] = field(default_factory=dict)

    @property
    def movements(self) -> list[MovementVector]:
        return [m for pid in sorted(self.groups) for m in self.groups[pid]]


def shots(matches: Iterable[Match], player_id: str | None = None) -> list[Event]:
    return [
        ev
        for match in matches
        for ev in match.events
        if ev.kind == "shot" and ev.timestamp_s is not None and (player_id is None or ev.player_id == player_id)
    ]


def _ends_at_shot(m: MovementVector, shot: Event) -> bool:
    return (
        m.match_id == shot.match_id
        and m.player_id == shot.player_id
        and m.end_T == shot.timestamp_s
        and abs(m.x2 - shot.x_pct / 100.0 * STANDARD_LENGTH_M) < 1e-6
        and abs(m.y2 - shot.y_pct / 100.0 * STANDARD_WIDTH_M) < 1e-6
    )


def preshot_player(
    matches: Iterable[Match], movements: Sequence[MovementVector], player_id: str
) -> list[MovementVector]:
    """For each of the player's shots, the movement that ends in it.

    A shot that is the player's first event of a half yields nothing. End
    points are matched to 1e-6 m so movements read back from the 6-decimal
    movement store still match.
    """
    own = [m for m in movements if m.player_id == player_id]
    out = []
    for shot in shots(matches, player_id):
        hit = next((m for m in own if _ends_at_shot(m, shot)), None)
        if hit is not None:
            out.append(hit)
    return out


def team_of(matches: Iterable[Match]) -> dict[tuple[str, str], str]:
    """(match_id, player_id) -> team_id."""
    return {(ev.match_id, ev.player_id): ev.team_id for match in matches for ev in match.events}


def preshot_team(
    matches: Sequence[Match],
    movements: Sequence[MovementVector],
    shot: Event,
    window_s: int = DEFAULT_WINDOW_S,
) -> PreShotSet:
    """Movements of the shooter's team that overlap the window before the shot.

    A movement qualifies when ``[T, T + dt]`` intersects
    ``[shot_t - window_s, shot_t]`` and it ends no later than the shot, so a
    long approach run that started before the window still counts.
    """
    if window_s < 0:
        raise ValueError("window must be non-negative")
    teams = team_of(matches)
    t = shot.timestamp_s
    groups: dict[str, list[MovementVector]] = {}
    for m in movements:
        if m.match_id != shot.match_id:
            continue
        team = m.team_id or teams.get((m.match_id, m.player_id))
        if team != shot.team_id:
            continue
        if m.end_T >= t - window_s and m.end_T <= t:
            groups.setdefault(m.player_id, []).append(m)
    return PreShotSet(
        shot.match_id,
        t,
        shot.player_id,
        shot.team_id,
        window_s,
        {pid: tuple(sorted(ms, key=lambda m: m.T)) for pid, ms in sorted(groups.items())},
    )


def format_preshot(rows: Iterable[tuple[str, MovementVector]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["shot", "match_id", "player_id", "T", "dt", "x1", "y1", "x2", "y2", "speed_kmh", "ball"])
    for shot_ref, m in rows:
        w.writerow(
            [shot_ref, m.match_id, m.player_id, m.T, m.dt]
            + [f"{v:.6f}" for v in (m.x1, m.y1, m.x2, m.y2, m.speed)]
            + [int(m.ball)]
        )
    return buf.getvalue()
