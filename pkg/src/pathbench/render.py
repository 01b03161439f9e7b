"""Deterministic SVG rendering of environments, queries, and paths.

Output is a pure function of the inputs (fixed element order, fixed
number formatting), so repeated renders are byte-identical. The drawing
scale is 8 px per workspace unit with the y axis flipped to screen
coordinates.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .environment import Environment, Query
from .geometry import Circle

SCALE = 8.0

_BG = "#f4f6f8"
_OBSTACLE_FILL = "#7f8c99"
_OBSTACLE_EDGE = "#55606b"
_PATH_COLORS = ("#d1495b", "#1c7c54", "#2a6f97", "#b08900")
_START = "#1c7c54"
_TARGET = "#d1495b"


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def environment_svg(env: Environment, query: Optional[Query] = None,
                    paths: Sequence[Sequence[Sequence[float]]] = ()) -> str:
    """Render bounds, obstacles, optional paths, and query markers."""
    b = env.bounds
    width = b.width * SCALE
    height = b.height * SCALE

    def sx(x: float) -> str:
        return _fmt((x - b.x_min) * SCALE)

    def sy(y: float) -> str:
        return _fmt((b.y_max - y) * SCALE)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'  <rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'fill="{_BG}" stroke="{_OBSTACLE_EDGE}" stroke-width="1"/>',
    ]
    for obs in env.obstacles:
        if isinstance(obs, Circle):
            lines.append(
                f'  <circle cx="{sx(obs.center.x)}" cy="{sy(obs.center.y)}" '
                f'r="{_fmt(obs.radius * SCALE)}" fill="{_OBSTACLE_FILL}" '
                f'stroke="{_OBSTACLE_EDGE}" stroke-width="1"/>')
        else:
            pts = " ".join(f"{sx(v.x)},{sy(v.y)}" for v in obs.vertices)
            lines.append(
                f'  <polygon points="{pts}" fill="{_OBSTACLE_FILL}" '
                f'stroke="{_OBSTACLE_EDGE}" stroke-width="1"/>')
    for i, path in enumerate(paths):
        color = _PATH_COLORS[i % len(_PATH_COLORS)]
        pts = " ".join(f"{sx(p[0])},{sy(p[1])}" for p in path)
        lines.append(
            f'  <polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="2"/>')
    if query is not None:
        # Start is a square, target an X; neither is a circle or polyline
        # so marker elements never collide with obstacle/path counts.
        half = 0.6 * SCALE
        cx = (query.start.x - b.x_min) * SCALE
        cy = (b.y_max - query.start.y) * SCALE
        lines.append(
            f'  <rect x="{_fmt(cx - half)}" y="{_fmt(cy - half)}" '
            f'width="{_fmt(2 * half)}" height="{_fmt(2 * half)}" '
            f'fill="{_START}"/>')
        tx = (query.target.x - b.x_min) * SCALE
        ty = (b.y_max - query.target.y) * SCALE
        lines.append(
            f'  <path d="M {_fmt(tx - half)} {_fmt(ty - half)} L {_fmt(tx + half)} '
            f'{_fmt(ty + half)} M {_fmt(tx - half)} {_fmt(ty + half)} '
            f'L {_fmt(tx + half)} {_fmt(ty - half)}" stroke="{_TARGET}" '
            f'stroke-width="3" fill="none"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
