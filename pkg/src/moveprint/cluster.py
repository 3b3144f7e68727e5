"""Mini-batch K-means over 4-D movement endpoints (x1, y1, x2, y2).

Training follows Sculley's web-scale mini-batch K-means: each iteration
draws a batch, caches the nearest centre of every batch point, then moves
each centre toward its points with a per-centre learning rate of
``1 / (points seen so far)``. Seeding is greedy k-means++.

All randomness flows from one integer seed, and the data are sorted into a
canonical order first, so a model does not depend on input order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np
from numba import njit

DEFAULT_K = 200
DEFAULT_BATCH = 1024
DEFAULT_ITERATIONS = 10_000
DEFAULT_SEED = 42

_CHUNK = 256  # iterations whose batch indices are drawn at once


@njit(cache=True)
def _nearest_one(p, ct, scratch):
    # ct holds centroids column-wise (d, k) so the inner loop runs over centres
    d = ct.shape[0]
    k = ct.shape[1]
    v = p[0]
    for j in range(k):
        t = v - ct[0, j]
        scratch[j] = t * t
    for a in range(1, d):
        v = p[a]
        for j in range(k):
            t = v - ct[a, j]
            scratch[j] += t * t
    best = np.inf
    arg = 0
    for j in range(k):
        if scratch[j] < best:  # strict: ties keep the lowest index
            best = scratch[j]
            arg = j
    return arg, best


@njit(cache=True)
def _nearest(points, ct, labels, sqdist):
    scratch = np.empty(ct.shape[1])
    for i in range(points.shape[0]):
        arg, best = _nearest_one(points[i], ct, scratch)
        labels[i] = arg
        sqdist[i] = best


@njit(cache=True)
def _sqdist_to(pt, c, out):
    # pt holds points column-wise (d, n)
    d = pt.shape[0]
    n = pt.shape[1]
    v = c[0]
    for i in range(n):
        t = pt[0, i] - v
        out[i] = t * t
    for a in range(1, d):
        v = c[a]
        for i in range(n):
            t = pt[a, i] - v
            out[i] += t * t


@njit(cache=True)
def _sculley_steps(points, ct, counts, batches):
    d = ct.shape[0]
    b = batches.shape[1]
    labels = np.empty(b, dtype=np.int64)
    scratch = np.empty(ct.shape[1])
    for it in range(batches.shape[0]):
        idx = batches[it]
        for i in range(b):
            labels[i], _ = _nearest_one(points[idx[i]], ct, scratch)
        for i in range(b):
            p = idx[i]
            j = labels[i]
            counts[j] += 1.0
            if counts[j] == 1.0:
                for a in range(d):
                    ct[a, j] = points[p, a]
            else:
                eta = 1.0 / counts[j]
                for a in range(d):
                    # incremental form: a centre sitting on its points stays put exactly
                    ct[a, j] += eta * (points[p, a] - ct[a, j])


def _as_points(vectors) -> np.ndarray:
    pts = np.asarray(vectors, dtype=np.float64)
    if pts.size == 0:
        return np.empty((0, 4))
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    if pts.ndim != 2:
        raise ValueError("expected an (n, d) array of points")
    return np.ascontiguousarray(pts)


def canonical_order(points: np.ndarray) -> np.ndarray:
    """Lexicographic row order (first column most significant)."""
    if len(points) == 0:
        return np.arange(0)
    return np.lexsort(points.T[::-1])


def movement_points(movements: Iterable) -> np.ndarray:
    """Stack movements into an (n, 4) array of (x1, y1, x2, y2)."""
    rows = [(m.x1, m.y1, m.x2, m.y2) for m in movements]
    if not rows:
        return np.empty((0, 4))
    return np.array(rows, dtype=np.float64)


def nearest_centroids(points, centroids) -> tuple[np.ndarray, np.ndarray]:
    """Nearest centre index and squared distance for every point."""
    pts = _as_points(points)
    cen = _as_points(centroids)
    labels = np.empty(len(pts), dtype=np.int64)
    sqdist = np.empty(len(pts), dtype=np.float64)
    _nearest(pts, np.ascontiguousarray(cen.T), labels, sqdist)
    return labels, sqdist


def init_centroids(vectors, k: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Greedy k-means++ seeding, deterministic for a given seed.

    Every pick samples ``2 + ln k`` candidates proportionally to the squared
    distance to the nearest chosen centre and keeps the candidate that
    lowers the total potential most.
    """
    pts = _as_points(vectors)
    n = len(pts)
    if k < 1:
        raise ValueError("k must be positive")
    if n < k:
        raise ValueError(f"fewer points than clusters ({n} < {k})")
    pts = pts[canonical_order(pts)]
    rng = np.random.default_rng(seed)
    trials = 2 + int(math.log(k))

    pt = np.ascontiguousarray(pts.T)
    centers = np.empty((k, pts.shape[1]))
    centers[0] = pts[int(rng.integers(n))]
    closest = np.empty(n)
    _sqdist_to(pt, centers[0], closest)
    dist = np.empty(n)
    for c in range(1, k):
        cum = np.cumsum(closest)
        total = cum[-1]
        if total <= 0.0:
            # every point already coincides with a centre
            centers[c] = pts[int(rng.integers(n))]
            continue
        draws = rng.random(trials) * total
        cand = np.minimum(np.searchsorted(cum, draws, side="right"), n - 1)
        best_pot = np.inf
        best_closest = None
        for idx in cand:
            _sqdist_to(pt, pts[idx], dist)
            np.minimum(closest, dist, out=dist)
            pot = dist.sum()
            if pot < best_pot:
                best_pot = pot
                centers[c] = pts[idx]
                best_closest, dist = dist, (best_closest if best_closest is not None else np.empty(n))
        closest, best_closest = best_closest, closest
    return centers


@dataclass
class ClusterModel:
    centroids: np.ndarray
    seed: int = DEFAULT_SEED
    batch_size: int = DEFAULT_BATCH
    iterations: int = DEFAULT_ITERATIONS
    inertia: float = 0.0
    empty_clusters: tuple[int, ...] = field(default=(), compare=False)

    @property
    def k(self) -> int:
        return len(self.centroids)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClusterModel):
            return NotImplemented
        return (
            np.array_equal(self.centroids, other.centroids)
            and (self.seed, self.batch_size, self.iterations, self.inertia)
            == (other.seed, other.batch_size, other.iterations, other.inertia)
        )

    def to_json(self) -> str:
        doc = {
            "k": self.k,
            "seed": self.seed,
            "batch_size": self.batch_size,
            "iterations": self.iterations,
            "inertia": float(self.inertia),
            "centroids": [[float(v) for v in row] for row in self.centroids],
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ClusterModel:
        doc = json.loads(text)
        centroids = np.array(doc["centroids"], dtype=np.float64).reshape(-1, 4)
        if len(centroids) != doc["k"]:
            raise ValueError(f"model declares k={doc['k']} but has {len(centroids)} centroids")
        return cls(
            centroids=centroids,
            seed=doc["seed"],
            batch_size=doc["batch_size"],
            iterations=doc["iterations"],
            inertia=doc["inertia"],
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> ClusterModel:
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def minibatch_kmeans(
    vectors,
    k: int = DEFAULT_K,
    batch_size: int = DEFAULT_BATCH,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = DEFAULT_SEED,
    init: np.ndarray | None = None,
) -> ClusterModel:
    """Train a :class:`ClusterModel` on an (n, 4) array of movement endpoints.

    Batches are drawn with replacement; a batch size of at least ``n`` uses
    the whole data set each iteration, which makes one iteration equal to a
    Lloyd step. A centre no batch ever reaches keeps its seed position.
    """
    pts = _as_points(vectors)
    if batch_size < 1 or iterations < 1:
        raise ValueError("batch_size and iterations must be positive")
    centroids = init_centroids(pts, k, seed) if init is None else np.array(init, dtype=np.float64)
    if centroids.shape != (k, pts.shape[1]):
        raise ValueError("init has the wrong shape")
    pts = np.ascontiguousarray(pts[canonical_order(pts)])
    n = len(pts)
    counts = np.zeros(k)
    ct = np.ascontiguousarray(centroids.T)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    done = 0
    while done < iterations:
        step = min(_CHUNK, iterations - done)
        if batch_size >= n:
            batches = np.broadcast_to(np.arange(n, dtype=np.int64), (step, n))
        else:
            batches = rng.integers(0, n, size=(step, batch_size), dtype=np.int64)
        _sculley_steps(pts, ct, counts, np.ascontiguousarray(batches))
        done += step
    centroids = np.ascontiguousarray(ct.T)

    labels, sqdist = nearest_centroids(pts, centroids)
    members = np.bincount(labels, minlength=k)
    return ClusterModel(
        centroids=centroids,
        seed=seed,
        batch_size=batch_size,
        iterations=iterations,
        inertia=math.fsum(sqdist),
        empty_clusters=tuple(int(j) for j in np.flatnonzero(members == 0)),
    )


def lloyd(vectors, init: np.ndarray, max_iter: int = 300) -> tuple[np.ndarray, list[float]]:
    """Full-batch K-means from ``init``; returns centres and per-step inertia.

    Stops once assignments no longer change. Empty clusters keep their
    position.
    """
    pts = _as_points(vectors)
    centroids = np.array(init, dtype=np.float64)
    k = len(centroids)
    history = []
    prev = None
    for _ in range(max_iter):
        labels, sqdist = nearest_centroids(pts, centroids)
        history.append(math.fsum(sqdist))
        if prev is not None and np.array_equal(prev, labels):
            break
        members = np.bincount(labels, minlength=k)
        for a in range(pts.shape[1]):
            sums = np.bincount(labels, weights=pts[:, a], minlength=k)
            hit = members > 0
            centroids[hit, a] = sums[hit] / members[hit]
        prev = labels
    return centroids, history


def assign(movement, model: ClusterModel):
    """Index of the nearest centroid; ties go to the lowest index.

    Accepts a movement object, a single 4-vector, or an (n, 4) array (then an
    array of indices is returned).
    """
    if hasattr(movement, "x1"):
        movement = (movement.x1, movement.y1, movement.x2, movement.y2)
    arr = np.asarray(movement, dtype=np.float64)
    labels, _ = nearest_centroids(arr, model.centroids)
    return int(labels[0]) if arr.ndim == 1 else labels


def inertia(vectors, model: ClusterModel) -> float:
    """Sum of squared distances to the nearest centroid (m^2)."""
    pts = _as_points(vectors)
    if len(pts) == 0:
        return 0.0
    _, sqdist = nearest_centroids(pts, model.centroids)
    return math.fsum(sqdist)
