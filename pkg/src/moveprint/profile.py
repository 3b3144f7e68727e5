"""Characteristic vectors: how often a player used each movement feature."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .cluster import ClusterModel, assign, movement_points
from .extract import MovementVector

SEASON = "season"
GAME = "game"
DEFAULT_TOP_N = 50
DEFAULT_SPEED_KMH = 14.0


@dataclass(frozen=True)
class MovementFilter:
    kind: str = "all"  # all | ball | speed
    threshold_kmh: float = DEFAULT_SPEED_KMH

    def __post_init__(self) -> None:
        if self.kind not in ("all", "ball", "speed"):
            raise ValueError(f"unknown filter {self.kind!r}")
        if self.threshold_kmh < 0:
            raise ValueError("speed threshold must be non-negative")

    @classmethod
    def parse(cls, text: str) -> MovementFilter:
        """Parse ``all``, ``ball`` or ``speed[:<km/h>]``."""
        name, _, arg = text.strip().partition(":")
        if name == "speed":
            return cls("speed", float(arg) if arg else DEFAULT_SPEED_KMH)
        if arg:
            raise ValueError(f"filter {name!r} takes no argument")
        return cls(name)

    @property
    def label(self) -> str:
        return f"speed:{self.threshold_kmh:g}" if self.kind == "speed" else self.kind

    def keep(self, m: MovementVector) -> bool:
        if self.kind == "ball":
            return m.ball
        if self.kind == "speed":
            return m.speed >= self.threshold_kmh
        return True

    def apply(self, movements: Iterable[MovementVector]) -> list[MovementVector]:
        return [m for m in movements if self.keep(m)]


ALL = MovementFilter()


@dataclass(frozen=True, eq=False)
class CharacteristicVector:
    player_id: str
    freq: np.ndarray
    n_movements: int
    scope: str = SEASON
    match_id: str | None = None
    filter: str = "all"

    @property
    def is_empty(self) -> bool:
        return self.n_movements == 0

    @property
    def k(self) -> int:
        return len(self.freq)

    @property
    def counts(self) -> np.ndarray:
        return np.rint(self.freq * self.n_movements).astype(np.int64)


def _from_counts(counts: np.ndarray, player_id: str, scope: str, match_id: str | None, label: str) -> CharacteristicVector:
    n = int(counts.sum())
    freq = counts / n if n else np.zeros(len(counts))
    return CharacteristicVector(player_id, freq, n, scope, match_id, label)


def build_characteristic(
    movements: Sequence[MovementVector],
    model: ClusterModel,
    filter: MovementFilter = ALL,
    *,
    player_id: str | None = None,
    scope: str = SEASON,
    match_id: str | None = None,
) -> CharacteristicVector:
    """Normalised feature frequencies of one player's movements.

    When no movement survives the filter the result is an empty profile
    (``n_movements == 0``, all frequencies zero).
    """
    if player_id is None:
        ids = {m.player_id for m in movements}
        if len(ids) > 1:
            raise ValueError("movements belong to more than one player")
        player_id = ids.pop() if ids else ""
    kept = filter.apply(movements)
    counts = np.zeros(model.k, dtype=np.int64)
    if kept:
        counts = np.bincount(assign(movement_points(kept), model), minlength=model.k)
    return _from_counts(counts, player_id, scope, match_id, filter.label)


def build_profiles(
    movements: Sequence[MovementVector],
    model: ClusterModel,
    scope: str = SEASON,
    filter: MovementFilter = ALL,
    labels: np.ndarray | None = None,
) -> list[CharacteristicVector]:
    """Profiles for every player (``scope="season"``) or player-game (``"game"``).

    Players whose movements are all filtered out get an empty profile so
    they stay visible downstream. ``labels`` may carry precomputed cluster
    assignments of ``movements``. Output is ordered by (player_id, match_id).
    """
    if scope not in (SEASON, GAME):
        raise ValueError(f"unknown scope {scope!r}")
    if labels is None:
        labels = assign(movement_points(movements), model) if movements else np.empty(0, np.int64)
    groups: dict[tuple[str, str | None], list[int]] = {}
    for i, m in enumerate(movements):
        key = (m.player_id, m.match_id if scope == GAME else None)
        groups.setdefault(key, []).append(i)
    out = []
    for key in sorted(groups, key=lambda kv: (kv[0], kv[1] or "")):
        idx = [i for i in groups[key] if filter.keep(movements[i])]
        counts = np.bincount(labels[idx], minlength=model.k) if idx else np.zeros(model.k, dtype=np.int64)
        out.append(_from_counts(counts, key[0], scope, key[1], filter.label))
    return out


def season_from_games(games: Sequence[CharacteristicVector]) -> CharacteristicVector:
    """Movement-count weighted mean of one player's game profiles."""
    if not games:
        raise ValueError("no game profiles")
    n = sum(g.n_movements for g in games)
    freq = np.zeros(games[0].k)
    if n:
        for g in games:
            freq += g.freq * g.n_movements
        freq /= n
    return CharacteristicVector(games[0].player_id, freq, n, SEASON, None, games[0].filter)


def top_features(cv: CharacteristicVector, n: int = DEFAULT_TOP_N) -> list[tuple[int, float]]:
    """Up to ``n`` (cluster, frequency) pairs, most frequent first, ties by index."""
    if n <= 0:
        return []
    nz = np.flatnonzero(cv.freq > 0)
    order = nz[np.lexsort((nz, -cv.freq[nz]))]
    return [(int(j), float(cv.freq[j])) for j in order[:n]]


def format_profiles(profiles: Iterable[CharacteristicVector]) -> str:
    profiles = list(profiles)
    k = profiles[0].k if profiles else 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["player_id", "scope", "match_id", "filter", *(f"f{j}" for j in range(k)), "n"])
    for p in profiles:
        w.writerow([p.player_id, p.scope, p.match_id or "", p.filter, *(repr(float(v)) for v in p.freq), p.n_movements])
    return buf.getvalue()


def write_profiles(profiles: Iterable[CharacteristicVector], path: str | Path) -> None:
    Path(path).write_text(format_profiles(profiles), encoding="utf-8", newline="")


def read_profiles(path: str | Path) -> list[CharacteristicVector]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        fcols = [i for i, h in enumerate(header) if h.startswith("f") and h[1:].isdigit()]
        col = {h: i for i, h in enumerate(header)}
        for row in reader:
            out.append(
                CharacteristicVector(
                    player_id=row[col["player_id"]],
                    freq=np.array([float(row[i]) for i in fcols]),
                    n_movements=int(row[col["n"]]),
                    scope=row[col["scope"]],
                    match_id=row[col["match_id"]] or None,
                    filter=row[col["filter"]],
                )
            )
    return out
