"""Planar primitives and collision predicates.

Conventions used throughout the package:

* obstacle interiors are blocked, obstacle boundaries are free (strict
  inequalities everywhere, so a segment tangent to a circle is free);
* workspace bounds are inclusive on both sides;
* all inputs are plain floats, points are (x, y) pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, TYPE_CHECKING, Union

import numpy as np

from .errors import InvalidObstacleError, InvalidPathError

if TYPE_CHECKING:
    from .environment import Environment


class Point2(NamedTuple):
    x: float
    y: float


#: A segment is just an endpoint pair.
Segment = tuple[Point2, Point2]


class Bounds(NamedTuple):
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def contains(self, p: Sequence[float]) -> bool:
        return (self.x_min <= p[0] <= self.x_max
                and self.y_min <= p[1] <= self.y_max)

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min


def _require_finite(values: Sequence[float], what: str) -> None:
    for v in values:
        if not math.isfinite(v):
            raise InvalidObstacleError(f"{what} must be finite, got {v!r}")


@dataclass(frozen=True)
class Circle:
    """Disk obstacle; the open disk is blocked, the rim is free."""

    center: Point2
    radius: float

    def __post_init__(self):
        _require_finite(self.center, "circle center")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise InvalidObstacleError(f"circle radius must be > 0, got {self.radius!r}")
        object.__setattr__(self, "center", Point2(*self.center))


@dataclass(frozen=True)
class Polygon:
    """Simple polygon obstacle; the interior (even-odd rule) is blocked."""

    vertices: tuple[Point2, ...]

    def __post_init__(self):
        verts = tuple(Point2(*v) for v in self.vertices)
        if len(verts) < 3:
            raise InvalidObstacleError("polygon needs at least 3 vertices")
        for v in verts:
            _require_finite(v, "polygon vertex")
        n = len(verts)
        for i in range(n):
            if verts[i] == verts[(i + 1) % n]:
                raise InvalidObstacleError(f"repeated consecutive vertex {verts[i]}")
        # Simplicity: no two non-adjacent edges may intersect.
        for i in range(n):
            a1, a2 = verts[i], verts[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                b1, b2 = verts[j], verts[(j + 1) % n]
                if segments_intersect(a1, a2, b1, b2):
                    raise InvalidObstacleError("polygon is self-intersecting")
        object.__setattr__(self, "vertices", verts)


Obstacle = Union[Circle, Polygon]


def dist(a: Sequence[float], b: Sequence[float]) -> float:
    """Euclidean distance between two points."""
    return math.hypot(a[0] - b[0], a[1] - b[1])


def path_length(waypoints: Sequence[Sequence[float]]) -> float:
    """Sum of consecutive-waypoint distances.

    Raises InvalidPathError for fewer than two waypoints.
    """
    if len(waypoints) < 2:
        raise InvalidPathError(f"path needs at least 2 waypoints, got {len(waypoints)}")
    total = 0.0
    for a, b in zip(waypoints, waypoints[1:]):
        total += math.hypot(a[0] - b[0], a[1] - b[1])
    return total


def point_segment_distance(p: Sequence[float], a: Sequence[float],
                           b: Sequence[float]) -> float:
    """Distance from point p to the closed segment (a, b).

    Zero-length segments are treated as points.
    """
    ax, ay = a[0], a[1]
    vx, vy = b[0] - ax, b[1] - ay
    wx, wy = p[0] - ax, p[1] - ay
    vv = vx * vx + vy * vy
    if vv == 0.0:
        return math.hypot(wx, wy)
    t = (wx * vx + wy * vy) / vv
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return math.hypot(wx - t * vx, wy - t * vy)


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a, b, p) -> bool:
    # Assumes p collinear with (a, b).
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(p1, p2, q1, q2) -> bool:
    """True if closed segments (p1,p2) and (q1,q2) share any point."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
       ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    if d1 == 0 and _on_segment(q1, q2, p1):
        return True
    if d2 == 0 and _on_segment(q1, q2, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, q1):
        return True
    if d4 == 0 and _on_segment(p1, p2, q2):
        return True
    return False


def segment_segment_distance(p1, p2, q1, q2) -> float:
    """Minimum distance between two closed segments (0 if they intersect)."""
    if segments_intersect(p1, p2, q1, q2):
        return 0.0
    return min(point_segment_distance(p1, q1, q2),
               point_segment_distance(p2, q1, q2),
               point_segment_distance(q1, p1, p2),
               point_segment_distance(q2, p1, p2))


def point_in_polygon(p: Sequence[float], vertices: Sequence[Sequence[float]]) -> bool:
    """Even-odd (ray casting) containment test.

    Points exactly on the boundary may land on either side; callers that
    care keep a tolerance band around edges.
    """
    px, py = p[0], p[1]
    inside = False
    n = len(vertices)
    j = n - 1
    for i in range(n):
        xi, yi = vertices[i][0], vertices[i][1]
        xj, yj = vertices[j][0], vertices[j][1]
        if (yi > py) != (yj > py):
            x_cross = (xj - xi) * (py - yi) / (yj - yi) + xi
            if px < x_cross:
                inside = not inside
        j = i
    return inside


def _validate_polygon_arg(vertices) -> None:
    if len(vertices) < 3:
        raise InvalidObstacleError("polygon needs at least 3 vertices")
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if a[0] == b[0] and a[1] == b[1]:
            raise InvalidObstacleError("degenerate polygon: repeated consecutive vertex")


def segment_circle_collides(segment: Segment, center: Sequence[float],
                            radius: float) -> bool:
    """True iff the segment enters the open disk (tangency is free)."""
    if not (math.isfinite(radius) and radius > 0):
        raise InvalidObstacleError(f"circle radius must be > 0, got {radius!r}")
    a, b = segment
    return point_segment_distance(center, a, b) < radius


def segment_polygon_collides(segment: Segment,
                             vertices: Sequence[Sequence[float]]) -> bool:
    """True iff the segment crosses an edge or an endpoint is strictly inside."""
    _validate_polygon_arg(vertices)
    a, b = segment
    n = len(vertices)
    for i in range(n):
        v1, v2 = vertices[i], vertices[(i + 1) % n]
        if segments_intersect(a, b, v1, v2):
            return True
    return point_in_polygon(a, vertices) or point_in_polygon(b, vertices)


def _point_blocked_by(obs: Obstacle, p, inflate: float) -> bool:
    if isinstance(obs, Circle):
        dx = p[0] - obs.center.x
        dy = p[1] - obs.center.y
        r = obs.radius + inflate
        return dx * dx + dy * dy < r * r
    if point_in_polygon(p, obs.vertices):
        return True
    if inflate > 0.0:
        n = len(obs.vertices)
        for i in range(n):
            if point_segment_distance(p, obs.vertices[i], obs.vertices[(i + 1) % n]) < inflate:
                return True
    return False


def _segment_blocked_by(obs: Obstacle, a, b, inflate: float) -> bool:
    if isinstance(obs, Circle):
        return point_segment_distance(obs.center, a, b) < obs.radius + inflate
    if segment_polygon_collides((a, b), obs.vertices):
        return True
    if inflate > 0.0:
        n = len(obs.vertices)
        for i in range(n):
            v1, v2 = obs.vertices[i], obs.vertices[(i + 1) % n]
            if segment_segment_distance(a, b, v1, v2) < inflate:
                return True
    return False


def point_free(p: Sequence[float], env: "Environment", inflate: float = 0.0) -> bool:
    """True iff p lies inside the workspace bounds and outside every obstacle.

    `inflate` grows each obstacle by a margin, for callers that want the
    moving body treated as a disk rather than a point.
    """
    if not env.bounds.contains(p):
        return False
    for obs in env.obstacles:
        if _point_blocked_by(obs, p, inflate):
            return False
    return True


def edge_free(a: Sequence[float], b: Sequence[float], env: "Environment",
              inflate: float = 0.0) -> bool:
    """True iff segment (a, b) stays in bounds and clears every obstacle.

    Also requires the far endpoint b itself to be free, mirroring how the
    tree planner uses it (b is the candidate new node).
    """
    if not (env.bounds.contains(a) and env.bounds.contains(b)):
        return False
    if not point_free(b, env, inflate):
        return False
    for obs in env.obstacles:
        if _segment_blocked_by(obs, a, b, inflate):
            return False
    return True


class CollisionField:
    """Vectorized free-space test over many points at once.

    Semantics match point_free exactly: strict interior tests, inclusive
    bounds. Built once per environment and reused across evaluations.
    """

    def __init__(self, env: "Environment", inflate: float = 0.0):
        self.bounds = env.bounds
        self.inflate = float(inflate)
        circles = [o for o in env.obstacles if isinstance(o, Circle)]
        self._circle_xy = np.array([[c.center.x, c.center.y] for c in circles],
                                   dtype=np.float64).reshape(len(circles), 2)
        self._circle_r = np.array([c.radius + self.inflate for c in circles],
                                  dtype=np.float64)
        self._polygons = [np.asarray(o.vertices, dtype=np.float64)
                          for o in env.obstacles if isinstance(o, Polygon)]
        if self.inflate > 0.0 and self._polygons:
            raise NotImplementedError(
                "inflated polygon obstacles are not supported in batch mode")

    def free(self, points: np.ndarray) -> np.ndarray:
        """points: (N, 2) array -> boolean (N,) mask of free points."""
        pts = np.asarray(points, dtype=np.float64)
        px = pts[:, 0]
        py = pts[:, 1]
        b = self.bounds
        ok = ((px >= b.x_min) & (px <= b.x_max)
              & (py >= b.y_min) & (py <= b.y_max))
        if self._circle_r.size:
            dx = px[:, None] - self._circle_xy[None, :, 0]
            dy = py[:, None] - self._circle_xy[None, :, 1]
            inside = (dx * dx + dy * dy) < (self._circle_r * self._circle_r)[None, :]
            ok &= ~inside.any(axis=1)
        for verts in self._polygons:
            xi = verts[:, 0]
            yi = verts[:, 1]
            xj = np.roll(xi, 1)
            yj = np.roll(yi, 1)
            crosses = (yi[None, :] > py[:, None]) != (yj[None, :] > py[:, None])
            with np.errstate(divide="ignore", invalid="ignore"):
                x_cross = ((xj - xi)[None, :] * (py[:, None] - yi[None, :])
                           / (yj - yi)[None, :] + xi[None, :])
                hit = crosses & (px[:, None] < x_cross)
            inside = (hit.sum(axis=1) % 2) == 1
            ok &= ~inside
        return ok


def free_mask(points: np.ndarray, env: "Environment", inflate: float = 0.0) -> np.ndarray:
    """One-shot vectorized point_free over an (N, 2) array of points."""
    return CollisionField(env, inflate).free(points)
