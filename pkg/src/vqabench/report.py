"""SVG report graphics: sub-score radar plot and overall-score bar chart.

The SVG is written by hand so output is byte-for-byte deterministic for a
given score file.  Radar axes run runtime (up), accuracy (right),
scalability (down) and capacity (left), so each device polygon's area is
proportional to its overall score when the axes share a scale.  Each axis is
scaled to the largest value across the compared devices; the axis maxima are
written into the SVG title.
"""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

AXES = ("runtime", "accuracy", "scalability", "capacity")
# unit vectors in SVG coordinates (y grows downwards)
_DIRS = {"runtime": (0.0, -1.0), "accuracy": (1.0, 0.0), "scalability": (0.0, 1.0), "capacity": (-1.0, 0.0)}
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")

RADAR_SIZE = 480
RADAR_RADIUS = 170
BAR_WIDTH = 480
BAR_HEIGHT = 320


def _f(x: float) -> str:
    return f"{x:.3f}"


def axis_maxima(scores: dict[str, dict]) -> dict[str, float]:
    return {a: max((max(s[a], 0.0) for s in scores.values()), default=0.0) for a in AXES}


def radar_points(sub: dict, maxima: dict[str, float], radius: float = RADAR_RADIUS,
                 center: tuple[float, float] = (0.0, 0.0)) -> list[tuple[float, float]]:
    """Polygon vertices for one device, one per axis, in axis order."""
    cx, cy = center
    pts = []
    for a in AXES:
        m = maxima[a]
        frac = max(sub[a], 0.0) / m if m > 0 else 0.0
        dx, dy = _DIRS[a]
        pts.append((cx + dx * frac * radius, cy + dy * frac * radius))
    return pts


def radar_svg(scores: dict[str, dict]) -> str:
    size, r = RADAR_SIZE, RADAR_RADIUS
    c = size / 2
    maxima = axis_maxima(scores)
    title = "Sub-scores; axis maxima: " + ", ".join(f"{a}={maxima[a]:.4g}" for a in AXES)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size + 24 * len(scores)}" '
        f'viewBox="0 0 {size} {size + 24 * len(scores)}">',
        f"<title>{escape(title)}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for k in (0.25, 0.5, 0.75, 1.0):
        ring = [(c + dx * k * r, c + dy * k * r) for dx, dy in (_DIRS[a] for a in AXES)]
        out.append(f'<polygon points="{_pts(ring)}" fill="none" stroke="#cccccc" stroke-width="1"/>')
    for a in AXES:
        dx, dy = _DIRS[a]
        x2, y2 = c + dx * r, c + dy * r
        out.append(f'<line x1="{_f(c)}" y1="{_f(c)}" x2="{_f(x2)}" y2="{_f(y2)}" stroke="#888888" stroke-width="1"/>')
        lx, ly = c + dx * (r + 22), c + dy * (r + 22) + 4
        out.append(f'<text x="{_f(lx)}" y="{_f(ly)}" font-family="sans-serif" font-size="13" '
                   f'text-anchor="middle">{a} (max {maxima[a]:.3g})</text>')
    for i, (dev, sub) in enumerate(scores.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = radar_points(sub, maxima, r, (c, c))
        out.append(f'<polygon class="device" data-device="{escape(dev)}" points="{_pts(pts)}" '
                   f'fill="{color}" fill-opacity="0.25" stroke="{color}" stroke-width="2"/>')
    for i, dev in enumerate(scores):
        color = PALETTE[i % len(PALETTE)]
        y = size + 24 * i + 4
        out.append(f'<rect x="20" y="{y}" width="14" height="14" fill="{color}"/>')
        out.append(f'<text x="40" y="{y + 12}" font-family="sans-serif" font-size="13">{escape(dev)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bar_svg(scores: dict[str, dict]) -> str:
    w, h = BAR_WIDTH, BAR_HEIGHT
    left, bottom, top = 60, 50, 30
    n = max(len(scores), 1)
    peak = max((s["overall"] for s in scores.values()), default=0.0)
    peak = peak if peak > 0 else 1.0
    slot = (w - left - 20) / n
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        "<title>Overall scores</title>",
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{left}" y1="{h - bottom}" x2="{w - 20}" y2="{h - bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{h - bottom}" stroke="black"/>',
    ]
    span = h - bottom - top
    for i, (dev, s) in enumerate(scores.items()):
        color = PALETTE[i % len(PALETTE)]
        val = max(s["overall"], 0.0)
        bh = span * val / peak
        x = left + i * slot + slot * 0.15
        bw = slot * 0.7
        y = h - bottom - bh
        out.append(f'<rect class="bar" data-device="{escape(dev)}" x="{_f(x)}" y="{_f(y)}" '
                   f'width="{_f(bw)}" height="{_f(bh)}" fill="{color}"/>')
        out.append(f'<text x="{_f(x + bw / 2)}" y="{_f(y - 4)}" font-family="sans-serif" font-size="12" '
                   f'text-anchor="middle">{s["overall"]:.1f}</text>')
        out.append(f'<text x="{_f(x + bw / 2)}" y="{h - bottom + 18}" font-family="sans-serif" '
                   f'font-size="12" text-anchor="middle">{escape(dev)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _pts(points) -> str:
    return " ".join(f"{_f(x)},{_f(y)}" for x, y in points)


def render_report(scores: dict[str, dict], out_dir) -> list[Path]:
    """Write ``radar.svg`` and ``overall.svg`` into ``out_dir``; returns the paths."""
    out_dir = Path(out_dir)
    radar = out_dir / "radar.svg"
    bars = out_dir / "overall.svg"
    radar.write_text(radar_svg(scores), encoding="utf-8")
    bars.write_text(bar_svg(scores), encoding="utf-8")
    return [radar, bars]
