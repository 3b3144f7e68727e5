"""Movement vectors from consecutive events of one player.

Endpoints are expressed in the standard 105x68 m frame so movements from
different venues can be clustered together; speeds use the true venue
dimensions.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .ingest import KINDS, Event, Match, Venue, lookup_venue

STANDARD_LENGTH_M = 105.0
STANDARD_WIDTH_M = 68.0

MOVEMENT_COLUMNS = ("match_id", "player_id", "T", "dt", "x1", "y1", "x2", "y2", "speed_kmh", "ball")


@dataclass(frozen=True, slots=True)
class MovementVector:
    match_id: str
    player_id: str
    T: int
    dt: int
    x1: float
    y1: float
    x2: float
    y2: float
    speed: float  # km/h, measured in venue meters
    ball: bool
    # provenance, not part of the movement store
    team_id: str = field(default="", compare=False)
    period: int = field(default=0, compare=False)
    start_kind: str = field(default="", compare=False)
    end_kind: str = field(default="", compare=False)

    @property
    def end_T(self) -> int:
        return self.T + self.dt

    @property
    def length_m(self) -> float:
        """Length in the standard frame."""
        return math.hypot(self.x2 - self.x1, self.y2 - self.y1)


@dataclass(frozen=True)
class PossessionRule:
    """Event kinds that open and close a with-ball movement."""

    starts: frozenset[str] = frozenset({"reception", "recovery", "interception", "dribble"})
    ends: frozenset[str] = frozenset({"pass", "shot", "dribble", "clearance", "foul_won", "corner_taken"})

    def __call__(self, start_kind: str, end_kind: str) -> bool:
        return start_kind in self.starts and end_kind in self.ends

    def table(self) -> dict[tuple[str, str], bool]:
        return {(a, b): self(a, b) for a in KINDS for b in KINDS}


DEFAULT_POSSESSION = PossessionRule()


def possession_flag(start: Event | str, end: Event | str, rule: PossessionRule = DEFAULT_POSSESSION) -> bool:
    start_kind = start if isinstance(start, str) else start.kind
    end_kind = end if isinstance(end, str) else end.kind
    return rule(start_kind, end_kind)


def impute_reception_timestamps(events: Sequence[Event]) -> tuple[list[Event], int]:
    """Give untimed receptions the timestamp of the pass that found them.

    The pass is the most recent successful pass in the same period by a
    teammate. Receptions with no such pass keep ``timestamp_s=None``; their
    number is returned alongside the events.
    """
    out: list[Event] = []
    last_pass: dict[tuple[int, str], Event] = {}
    unresolved = 0
    for ev in events:
        if ev.kind == "reception" and ev.timestamp_s is None:
            src = last_pass.get((ev.period, ev.team_id))
            if src is not None and src.player_id != ev.player_id:
                ev = replace(ev, timestamp_s=src.timestamp_s)
            else:
                unresolved += 1
        elif ev.kind == "pass" and ev.outcome and ev.timestamp_s is not None:
            last_pass[(ev.period, ev.team_id)] = ev
        out.append(ev)
    return out, unresolved


def to_standard_frame(x_pct: float, y_pct: float, venue: Venue) -> tuple[tuple[float, float], tuple[float, float]]:
    """Percent coordinates to ``((x, y) standard meters, (x, y) venue meters)``."""
    if not (0.0 <= x_pct <= 100.0 and 0.0 <= y_pct <= 100.0):
        raise ValueError(f"coordinate ({x_pct}, {y_pct}) out of range")
    fx = x_pct / 100.0
    fy = y_pct / 100.0
    return (
        (fx * STANDARD_LENGTH_M, fy * STANDARD_WIDTH_M),
        (fx * venue.length_m, fy * venue.width_m),
    )


def extract_movements(
    events: Sequence[Event],
    venue: Venue,
    *,
    max_gap_s: int | None = None,
    rule: PossessionRule = DEFAULT_POSSESSION,
) -> list[MovementVector]:
    """One movement per consecutive pair of a single player's time-sorted events.

    Pairs spanning half-time, pairs with zero duration, pairs with a missing
    timestamp and (optionally) pairs longer than ``max_gap_s`` are skipped.
    """
    out: list[MovementVector] = []
    prev = None
    prev_std = prev_ven = None
    for ev in events:
        if ev.timestamp_s is None:
            prev = None
            continue
        std, ven = to_standard_frame(ev.x_pct, ev.y_pct, venue)
        if prev is not None and prev.period == ev.period:
            dt = ev.timestamp_s - prev.timestamp_s
            if dt > 0 and (max_gap_s is None or dt <= max_gap_s):
                dist = math.hypot(ven[0] - prev_ven[0], ven[1] - prev_ven[1])
                out.append(
                    MovementVector(
                        match_id=ev.match_id,
                        player_id=ev.player_id,
                        T=prev.timestamp_s,
                        dt=dt,
                        x1=prev_std[0],
                        y1=prev_std[1],
                        x2=std[0],
                        y2=std[1],
                        speed=3.6 * dist / dt,
                        ball=rule(prev.kind, ev.kind),
                        team_id=ev.team_id,
                        period=ev.period,
                        start_kind=prev.kind,
                        end_kind=ev.kind,
                    )
                )
        prev, prev_std, prev_ven = ev, std, ven
    return out


def extract_match(
    match: Match,
    venue: Venue,
    *,
    max_gap_s: int | None = None,
    rule: PossessionRule = DEFAULT_POSSESSION,
) -> list[MovementVector]:
    events, _ = impute_reception_timestamps(match.events)
    per_player: dict[str, list[Event]] = {}
    for ev in events:
        per_player.setdefault(ev.player_id, []).append(ev)
    out: list[MovementVector] = []
    for player_id in sorted(per_player):
        out.extend(extract_movements(per_player[player_id], venue, max_gap_s=max_gap_s, rule=rule))
    out.sort(key=lambda m: (m.player_id, m.T))
    return out


def extract_all(
    matches: Iterable[Match],
    venues: dict[str, Venue] | None = None,
    *,
    max_gap_s: int | None = None,
    rule: PossessionRule = DEFAULT_POSSESSION,
) -> list[MovementVector]:
    """Movements of every player in every match, ordered by (match_id, player_id, T)."""
    venues = venues or {}
    out: list[MovementVector] = []
    for match in sorted(matches, key=lambda m: m.match_id):
        venue = lookup_venue(match.venue_id, venues) if venues else Venue(match.venue_id)
        out.extend(extract_match(match, venue, max_gap_s=max_gap_s, rule=rule))
    return out


def filter_speed(movements: Iterable[MovementVector], threshold_kmh: float) -> list[MovementVector]:
    if threshold_kmh < 0:
        raise ValueError("speed threshold must be non-negative")
    return [m for m in movements if m.speed >= threshold_kmh]


def filter_ball(movements: Iterable[MovementVector]) -> list[MovementVector]:
    return [m for m in movements if m.ball]


def _fmt(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def format_movements(movements: Iterable[MovementVector]) -> str:
    buf = io.StringIO()
    buf.write(",".join(MOVEMENT_COLUMNS) + "\n")
    for m in movements:
        buf.write(
            f"{m.match_id},{m.player_id},{m.T},{m.dt},{_fmt(m.x1)},{_fmt(m.y1)},{_fmt(m.x2)},{_fmt(m.y2)},"
            f"{_fmt(m.speed)},{int(m.ball)}\n"
        )
    return buf.getvalue()


def write_movements(movements: Iterable[MovementVector], path: str | Path) -> None:
    Path(path).write_text(format_movements(movements), encoding="utf-8", newline="")


def read_movements(path: str | Path) -> list[MovementVector]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(
                MovementVector(
                    match_id=row["match_id"],
                    player_id=row["player_id"],
                    T=int(row["T"]),
                    dt=int(row["dt"]),
                    x1=float(row["x1"]),
                    y1=float(row["y1"]),
                    x2=float(row["x2"]),
                    y2=float(row["y2"]),
                    speed=float(row["speed_kmh"]),
                    ball=row["ball"].strip().lower() in ("1", "true"),
                )
            )
    return out
