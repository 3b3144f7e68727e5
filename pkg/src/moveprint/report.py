"""SVG pitch diagrams and CSV plot data.

Documents are assembled with ElementTree so they are always well-formed,
self-contained SVG 1.1 and byte-identical for identical inputs.
"""

from __future__ import annotations

import csv
import io
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .cluster import ClusterModel, assign, movement_points
from .extract import STANDARD_LENGTH_M, STANDARD_WIDTH_M, MovementVector
from .metrics import ConsistencySeries, UniquenessScore
from .profile import DEFAULT_TOP_N, CharacteristicVector, top_features

SVG_NS = "http://www.w3.org/2000/svg"

SPEED_MAX_KMH = 25.0
# green -> yellow -> red
SPEED_STOPS = ((0.0, (26, 150, 65)), (0.5, (253, 174, 97)), (1.0, (215, 25, 28)))
PLAYER_COLORS = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
MIN_WIDTH_PX = 0.5
MAX_WIDTH_PX = 6.0
MOVEMENT_WIDTH_PX = 1.5
HEAD_PX = 6.0


@dataclass(frozen=True)
class PitchCanvas:
    scale: float = 8.0  # px per meter
    margin: float = 20.0
    length_m: float = STANDARD_LENGTH_M
    width_m: float = STANDARD_WIDTH_M

    @property
    def width(self) -> float:
        return self.length_m * self.scale + 2 * self.margin

    @property
    def height(self) -> float:
        return self.width_m * self.scale + 2 * self.margin

    def px(self, x: float, y: float) -> tuple[float, float]:
        """Meter -> pixel; y grows upward on the pitch and downward in SVG."""
        return self.margin + x * self.scale, self.margin + (self.width_m - y) * self.scale


def _n(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def speed_color(speed_kmh: float) -> str:
    f = min(max(speed_kmh / SPEED_MAX_KMH, 0.0), 1.0)
    for (f0, c0), (f1, c1) in zip(SPEED_STOPS, SPEED_STOPS[1:]):
        if f <= f1:
            w = (f - f0) / (f1 - f0)
            rgb = [round(a + (b - a) * w) for a, b in zip(c0, c1)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*SPEED_STOPS[-1][1])


def _document(canvas: PitchCanvas, title: str) -> ET.Element:
    svg = ET.Element(
        "svg",
        {
            "xmlns": SVG_NS,
            "version": "1.1",
            "width": _n(canvas.width),
            "height": _n(canvas.height),
            "viewBox": f"0 0 {_n(canvas.width)} {_n(canvas.height)}",
        },
    )
    ET.SubElement(svg, "title").text = title
    _draw_pitch(svg, canvas)
    return svg


def _draw_pitch(svg: ET.Element, c: PitchCanvas) -> None:
    ET.SubElement(svg, "rect", {"x": "0", "y": "0", "width": _n(c.width), "height": _n(c.height), "fill": "#ffffff"})
    g = ET.SubElement(svg, "g", {"class": "pitch", "fill": "none", "stroke": "#9e9e9e", "stroke-width": "1.5"})
    L, W, s = c.length_m, c.width_m, c.scale

    def rect(x0, y0, x1, y1):
        (ax, ay), (bx, by) = c.px(x0, y1), c.px(x1, y0)
        ET.SubElement(g, "rect", {"x": _n(ax), "y": _n(ay), "width": _n(bx - ax), "height": _n(by - ay)})

    def line(x0, y0, x1, y1):
        (ax, ay), (bx, by) = c.px(x0, y0), c.px(x1, y1)
        ET.SubElement(g, "line", {"x1": _n(ax), "y1": _n(ay), "x2": _n(bx), "y2": _n(by)})

    def circle(x, y, r, fill="none"):
        cx, cy = c.px(x, y)
        ET.SubElement(g, "circle", {"cx": _n(cx), "cy": _n(cy), "r": _n(r * s), "fill": fill})

    rect(0, 0, L, W)
    line(L / 2, 0, L / 2, W)
    circle(L / 2, W / 2, 9.15)
    circle(L / 2, W / 2, 0.3, "#9e9e9e")
    for x0, sign in ((0.0, 1), (L, -1)):
        box_w, six_w = 40.32, 18.32
        rect(min(x0, x0 + sign * 16.5), (W - box_w) / 2, max(x0, x0 + sign * 16.5), (W + box_w) / 2)
        rect(min(x0, x0 + sign * 5.5), (W - six_w) / 2, max(x0, x0 + sign * 5.5), (W + six_w) / 2)
        circle(x0 + sign * 11.0, W / 2, 0.3, "#9e9e9e")
        # penalty arc: the part of the 9.15 m circle outside the box
        half = math.degrees(math.acos(5.5 / 9.15))
        spot = c.px(x0 + sign * 11.0, W / 2)
        a0, a1 = (-half, half) if sign == 1 else (180 - half, 180 + half)
        p0 = (spot[0] + 9.15 * s * math.cos(math.radians(a0)), spot[1] - 9.15 * s * math.sin(math.radians(a0)))
        p1 = (spot[0] + 9.15 * s * math.cos(math.radians(a1)), spot[1] - 9.15 * s * math.sin(math.radians(a1)))
        ET.SubElement(
            g,
            "path",
            {"d": f"M {_n(p0[0])} {_n(p0[1])} A {_n(9.15 * s)} {_n(9.15 * s)} 0 0 0 {_n(p1[0])} {_n(p1[1])}"},
        )


def _arrow(parent: ET.Element, canvas: PitchCanvas, x1, y1, x2, y2, color: str, width: float, cls: str, opacity=None):
    ax, ay = canvas.px(x1, y1)
    bx, by = canvas.px(x2, y2)
    d = f"M {_n(ax)} {_n(ay)} L {_n(bx)} {_n(by)}"
    length = math.hypot(bx - ax, by - ay)
    if length > 0:
        ux, uy = (bx - ax) / length, (by - ay) / length
        head = min(HEAD_PX + width, length)
        for sgn in (1, -1):
            hx = bx - head * ux + sgn * head * 0.5 * uy
            hy = by - head * uy - sgn * head * 0.5 * ux
            d += f" M {_n(hx)} {_n(hy)} L {_n(bx)} {_n(by)}"
    attrs = {
        "class": cls,
        "d": d,
        "fill": "none",
        "stroke": color,
        "stroke-width": _n(width),
        "stroke-linecap": "round",
    }
    if opacity is not None:
        attrs["stroke-opacity"] = _n(opacity)
    ET.SubElement(parent, "path", attrs)


def _tostring(svg: ET.Element) -> str:
    ET.indent(svg, space=" ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"


def render_movements(
    movements: Sequence[MovementVector],
    color_by: str = "speed",
    canvas: PitchCanvas = PitchCanvas(),
    title: str = "movements",
) -> str:
    """One arrow per movement, coloured by speed or by player."""
    if color_by not in ("speed", "player"):
        raise ValueError("color_by must be 'speed' or 'player'")
    svg = _document(canvas, title)
    layer = ET.SubElement(svg, "g", {"class": "movements"})
    players: dict[str, str] = {}
    for m in movements:
        if color_by == "speed":
            color = speed_color(m.speed)
        else:
            color = players.setdefault(m.player_id, PLAYER_COLORS[len(players) % len(PLAYER_COLORS)])
        _arrow(layer, canvas, m.x1, m.y1, m.x2, m.y2, color, MOVEMENT_WIDTH_PX, "arrow")
    return _tostring(svg)


def feature_widths(freqs: Sequence[float]) -> list[float]:
    """Stroke widths affine in frequency: the top feature gets the max width."""
    if not freqs:
        return []
    hi, lo = max(freqs), min(freqs)
    if hi == lo:
        return [MAX_WIDTH_PX] * len(freqs)
    return [MIN_WIDTH_PX + (f - lo) / (hi - lo) * (MAX_WIDTH_PX - MIN_WIDTH_PX) for f in freqs]


def render_characteristic(
    cv: CharacteristicVector,
    model: ClusterModel,
    n: int = DEFAULT_TOP_N,
    canvas: PitchCanvas = PitchCanvas(),
    color: str = "#08519c",
) -> str:
    """Top-``n`` features of a profile as centroid arrows, width by frequency."""
    if cv.is_empty:
        raise ValueError(f"empty profile for {cv.player_id!r}")
    if cv.k != model.k:
        raise ValueError("profile and model disagree on K")
    top = top_features(cv, n)
    svg = _document(canvas, f"profile {cv.player_id}")
    layer = ET.SubElement(svg, "g", {"class": "features"})
    # thin arrows first so the dominant ones stay on top
    for (j, f), w in reversed(list(zip(top, feature_widths([f for _, f in top])))):
        x1, y1, x2, y2 = model.centroids[j]
        _arrow(layer, canvas, x1, y1, x2, y2, color, w, "arrow feature")
    return _tostring(svg)


def render_cluster_coverage(
    model: ClusterModel,
    movements: Sequence[MovementVector] | np.ndarray,
    indices: Iterable[int],
    canvas: PitchCanvas = PitchCanvas(),
) -> str:
    """Member movements of the requested clusters, one colour per cluster."""
    indices = list(indices)
    for j in indices:
        if not 0 <= j < model.k:
            raise IndexError(f"cluster {j} outside [0, {model.k})")
    pts = movements if isinstance(movements, np.ndarray) else movement_points(movements)
    labels = assign(pts, model) if len(pts) else np.empty(0, dtype=np.int64)
    svg = _document(canvas, "cluster coverage")
    for n, j in enumerate(indices):
        color = PLAYER_COLORS[n % len(PLAYER_COLORS)]
        g = ET.SubElement(svg, "g", {"class": "cluster", "data-cluster": str(j)})
        for p in pts[labels == j]:
            _arrow(g, canvas, *p, color, 1.0, "arrow member", opacity=0.35)
        _arrow(g, canvas, *model.centroids[j], color, MAX_WIDTH_PX, "arrow centroid")
    return _tostring(svg)


def emit_metric_plots(
    scores: Sequence[UniquenessScore],
    series: Mapping[str, ConsistencySeries] | Sequence[ConsistencySeries],
    out_dir: str | Path,
) -> tuple[Path, Path]:
    """Write ``consistency.csv`` and ``scatter.csv`` into ``out_dir``.

    The scatter pairs each player's uniqueness with the mean of their
    per-game consistency (blank when the player has no game profiles).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not isinstance(series, Mapping):
        series = {s.player_id: s for s in series}

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["player_id", "game_index", "match_id", "consistency"])
    for pid in sorted(series):
        s = series[pid]
        for k, (mid, c) in enumerate(zip(s.match_ids, s.values), 1):
            w.writerow([pid, k, mid, f"{c:.6f}"])
    cons_path = out_dir / "consistency.csv"
    cons_path.write_text(buf.getvalue(), encoding="utf-8", newline="")

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["player_id", "uniqueness", "mean_consistency", "n_movements"])
    for sc in sorted(scores, key=lambda s: s.player_id):
        s = series.get(sc.player_id)
        w.writerow([sc.player_id, f"{sc.U:.6f}", f"{s.mean:.6f}" if s else "", sc.n_movements])
    scatter_path = out_dir / "scatter.csv"
    scatter_path.write_text(buf.getvalue(), encoding="utf-8", newline="")
    return cons_path, scatter_path
