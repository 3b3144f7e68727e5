"""Player similarity, uniqueness and consistency from characteristic vectors.

All distances are cosine distances between frequency vectors. Because the
frequencies are non-negative every distance lies in [0, 1]. Identical
vectors are pinned to a distance of exactly 0.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .profile import CharacteristicVector

DEFAULT_M = 5
DEFAULT_MIN_MOVEMENTS = 500


class EmptyProfileError(ValueError):
    """Distance requested for a profile without movements."""


@dataclass(frozen=True)
class SimilarityList:
    player_id: str
    entries: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class UniquenessScore:
    player_id: str
    U: float
    M: int
    n_movements: int


@dataclass(frozen=True)
class ConsistencySeries:
    player_id: str
    match_ids: tuple[str, ...]
    values: tuple[float, ...]

    @property
    def n_games(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return math.fsum(self.values) / len(self.values) if self.values else float("nan")


def _vector(p) -> np.ndarray:
    if isinstance(p, CharacteristicVector):
        if p.is_empty:
            raise EmptyProfileError(f"undefined distance for empty profile of {p.player_id!r}")
        return p.freq
    v = np.asarray(p, dtype=np.float64)
    if not v.any():
        raise EmptyProfileError("undefined distance for empty profile")
    return v


def cosine_distance(a, b) -> float:
    """``1 - a.b / (|a| |b|)``, clamped to [0, 1]."""
    u, v = _vector(a), _vector(b)
    if np.array_equal(u, v):
        return 0.0
    d = 1.0 - float(np.dot(u, v)) / (math.sqrt(float(np.dot(u, u))) * math.sqrt(float(np.dot(v, v))))
    return min(1.0, max(0.0, d))


def distance_matrix(profiles: Sequence[CharacteristicVector]) -> np.ndarray:
    """All-pairs cosine distances; symmetric with an exact zero diagonal."""
    if not profiles:
        return np.zeros((0, 0))
    F = np.vstack([_vector(p) for p in profiles])
    norms = np.sqrt(np.einsum("ij,ij->i", F, F))
    D = 1.0 - (F @ F.T) / np.outer(norms, norms)
    D = (D + D.T) / 2.0
    np.clip(D, 0.0, 1.0, out=D)
    _, group = np.unique(F, axis=0, return_inverse=True)
    group = group.reshape(-1)
    D[group[:, None] == group[None, :]] = 0.0
    return D


def _pool(profiles: Sequence[CharacteristicVector], min_movements: int) -> list[CharacteristicVector]:
    return [p for p in profiles if not p.is_empty and p.n_movements >= min_movements]


def _ranked(ids: Sequence[str], dist: np.ndarray, m: int) -> list[tuple[str, float]]:
    order = np.lexsort((np.asarray(ids, dtype=object).astype(str), dist))
    return [(ids[i], float(dist[i])) for i in order[:m]]


def most_similar(
    player_id: str,
    profiles: Sequence[CharacteristicVector],
    m: int = DEFAULT_M,
    min_movements: int = DEFAULT_MIN_MOVEMENTS,
) -> SimilarityList:
    """The ``m`` closest other players, ties broken by player id.

    Candidates must clear ``min_movements``; the query itself only needs a
    non-empty profile.
    """
    query = next((p for p in profiles if p.player_id == player_id), None)
    if query is None:
        raise KeyError(player_id)
    others = [p for p in _pool(profiles, min_movements) if p.player_id != player_id]
    if len(others) < m:
        raise ValueError(f"only {len(others)} candidate players for m={m}")
    q = _vector(query)
    dist = np.array([cosine_distance(q, p.freq) for p in others])
    return SimilarityList(player_id, tuple(_ranked([p.player_id for p in others], dist, m)))


def uniqueness(
    player_id: str,
    profiles: Sequence[CharacteristicVector],
    m: int = DEFAULT_M,
    min_movements: int = DEFAULT_MIN_MOVEMENTS,
) -> UniquenessScore:
    """Sum of distances to the ``m`` closest eligible players."""
    pool = _pool(profiles, min_movements)
    me = next((p for p in pool if p.player_id == player_id), None)
    if me is None:
        raise ValueError(f"player {player_id!r} is not in the eligible pool")
    others = [p for p in pool if p.player_id != player_id]
    if len(others) < m:
        raise ValueError(f"only {len(others)} eligible players for m={m}")
    dist = np.sort(np.array([cosine_distance(me, p) for p in others]))
    return UniquenessScore(player_id, math.fsum(dist[:m]), m, me.n_movements)


def uniqueness_table(
    profiles: Sequence[CharacteristicVector],
    m: int = DEFAULT_M,
    min_movements: int = DEFAULT_MIN_MOVEMENTS,
) -> list[UniquenessScore]:
    """Uniqueness of every eligible player, most unique first."""
    pool = _pool(profiles, min_movements)
    if len(pool) < m + 1:
        raise ValueError(f"need at least {m + 1} eligible players, have {len(pool)}")
    D = distance_matrix(pool)
    np.fill_diagonal(D, np.inf)
    D.sort(axis=1)
    scores = [
        UniquenessScore(p.player_id, math.fsum(D[i, :m]), m, p.n_movements) for i, p in enumerate(pool)
    ]
    scores.sort(key=lambda s: (-s.U, s.player_id))
    return scores


def consistency(k: int | str, games: Sequence[CharacteristicVector]) -> float:
    """Mean distance of game ``k`` to all of the player's games, itself included.

    ``k`` is either a position in ``games`` or a match id.
    """
    games = [g for g in games if not g.is_empty]
    if not games:
        raise ValueError("no non-empty game profiles")
    if isinstance(k, str):
        idx = next((i for i, g in enumerate(games) if g.match_id == k), None)
        if idx is None:
            raise EmptyProfileError(f"game {k!r} has no movements")
        k = idx
    ref = games[k]
    return math.fsum(cosine_distance(ref, g) for g in games) / len(games)


def consistency_series(games: Sequence[CharacteristicVector]) -> ConsistencySeries:
    """Per-game consistency of one player, in match-id order; empty games skipped."""
    games = sorted((g for g in games if not g.is_empty), key=lambda g: g.match_id or "")
    if not games:
        raise ValueError("no non-empty game profiles")
    ids = {g.player_id for g in games}
    if len(ids) != 1:
        raise ValueError("game profiles of more than one player")
    D = distance_matrix(games)
    values = tuple(math.fsum(row) / len(games) for row in D)
    return ConsistencySeries(games[0].player_id, tuple(g.match_id or "" for g in games), values)


def consistency_by_player(game_profiles: Sequence[CharacteristicVector]) -> dict[str, ConsistencySeries]:
    per: dict[str, list[CharacteristicVector]] = {}
    for g in game_profiles:
        if not g.is_empty:
            per.setdefault(g.player_id, []).append(g)
    return {pid: consistency_series(per[pid]) for pid in sorted(per)}


def format_similarity(sim: SimilarityList) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank", "player_id", "distance"])
    for rank, (pid, d) in enumerate(sim.entries, 1):
        w.writerow([rank, pid, f"{d:.3f}"])
    return buf.getvalue()


def format_uniqueness(scores: Sequence[UniquenessScore]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["player_id", "uniqueness", "n_movements"])
    for s in scores:
        w.writerow([s.player_id, f"{s.U:.3f}", s.n_movements])
    return buf.getvalue()


def format_consistency(series: ConsistencySeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["game_index", "match_id", "consistency"])
    for k, (mid, c) in enumerate(zip(series.match_ids, series.values), 1):
        w.writerow([k, mid, f"{c:.6f}"])
    return buf.getvalue()
