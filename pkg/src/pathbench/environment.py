"""Workspace construction: bounds, obstacles, queries, presets, and files.

An environment document (used for files on disk and the built-in presets)
is JSON with exactly these fields::

    {
      "bounds": [x_min, x_max, y_min, y_max],
      "obstacles": [
        {"kind": "circle", "center": [x, y], "radius": r},
        {"kind": "polygon", "vertices": [[x, y], ...]}
      ],
      "query": {"start": [x, y], "target": [x, y]}   // optional
    }

Unknown fields are rejected rather than ignored.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (EnvironmentGenerationError, FormatError,
                     InvalidObstacleError, InvalidQueryError, PresetLookupError)
from .geometry import (Bounds, Circle, Obstacle, Point2, Polygon, dist,
                       point_free, point_in_polygon, segments_intersect)

#: Workspace used by the default generator and the shipped presets.
DEFAULT_BOUNDS = Bounds(-40.0, 40.0, -40.0, 20.0)

#: Rejection-sampling budget per obstacle before generation gives up.
MAX_PLACEMENT_ATTEMPTS = 10_000


def _check_bounds(bounds: Bounds) -> Bounds:
    b = Bounds(*(float(v) for v in bounds))
    for v in b:
        if not math.isfinite(v):
            raise FormatError(f"bounds must be finite, got {bounds!r}")
    if not (b.x_min < b.x_max and b.y_min < b.y_max):
        raise FormatError(f"bounds must satisfy min < max, got {bounds!r}")
    return b


def _obstacle_touches_rect(obs: Obstacle, b: Bounds) -> bool:
    if isinstance(obs, Circle):
        cx = min(max(obs.center.x, b.x_min), b.x_max)
        cy = min(max(obs.center.y, b.y_min), b.y_max)
        return dist((cx, cy), obs.center) <= obs.radius
    corners = [(b.x_min, b.y_min), (b.x_max, b.y_min),
               (b.x_max, b.y_max), (b.x_min, b.y_max)]
    for v in obs.vertices:
        if b.contains(v):
            return True
    if point_in_polygon(corners[0], obs.vertices):
        return True
    edges = list(zip(corners, corners[1:] + corners[:1]))
    n = len(obs.vertices)
    for i in range(n):
        p1, p2 = obs.vertices[i], obs.vertices[(i + 1) % n]
        for q1, q2 in edges:
            if segments_intersect(p1, p2, q1, q2):
                return True
    return False


@dataclass(frozen=True)
class Environment:
    """Static 2D workspace: rectangular bounds plus a tuple of obstacles."""

    bounds: Bounds
    obstacles: tuple[Obstacle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bounds", _check_bounds(self.bounds))
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        for obs in self.obstacles:
            if not _obstacle_touches_rect(obs, self.bounds):
                raise InvalidObstacleError(
                    f"obstacle {obs!r} lies entirely outside bounds {self.bounds}")


@dataclass(frozen=True)
class Query:
    """A planning request: free start point to free target point."""

    start: Point2
    target: Point2

    def __post_init__(self):
        for name, p in (("start", self.start), ("target", self.target)):
            if not all(math.isfinite(v) for v in p):
                raise InvalidQueryError(f"query {name} must be finite, got {p!r}")
        object.__setattr__(self, "start", Point2(*self.start))
        object.__setattr__(self, "target", Point2(*self.target))


@dataclass(frozen=True)
class QueryViolation:
    endpoint: str  # "start" or "target"
    reason: str


def validate_query(env: Environment, query: Query) -> tuple[QueryViolation, ...]:
    """Check both query endpoints are in free space.

    Returns an empty tuple when the query is usable, otherwise one
    violation per offending endpoint.
    """
    out = []
    for name, p in (("start", query.start), ("target", query.target)):
        if not env.bounds.contains(p):
            out.append(QueryViolation(name, f"{name} {tuple(p)} outside bounds"))
        elif not point_free(p, env):
            out.append(QueryViolation(name, f"{name} {tuple(p)} inside an obstacle"))
    return tuple(out)


def generate_random_env(seed: int,
                        n_obstacles: int = 12,
                        bounds: Bounds = DEFAULT_BOUNDS,
                        radius_range: tuple[float, float] = (2.0, 6.0),
                        query: Optional[Query] = None,
                        clearance: float = 1.0) -> Environment:
    """Rejection-sample circular obstacles that keep the query endpoints clear.

    Identical arguments always produce the identical environment (the
    generator is a seeded PCG64 stream, consumed in a fixed order: center
    x, center y, radius per attempt). Obstacles are accepted when neither
    query endpoint lies within `clearance` of the inflated disk. Raises
    EnvironmentGenerationError when an obstacle cannot be placed within
    MAX_PLACEMENT_ATTEMPTS attempts.
    """
    b = _check_bounds(bounds)
    r_lo, r_hi = float(radius_range[0]), float(radius_range[1])
    if not (0 < r_lo <= r_hi):
        raise FormatError(f"radius_range must satisfy 0 < lo <= hi, got {radius_range!r}")
    if n_obstacles < 0:
        raise FormatError(f"n_obstacles must be >= 0, got {n_obstacles}")
    if clearance < 0:
        raise FormatError(f"clearance must be >= 0, got {clearance}")
    if query is not None:
        for name, p in (("start", query.start), ("target", query.target)):
            if not b.contains(p):
                raise InvalidQueryError(f"query {name} {tuple(p)} outside bounds {b}")

    rng = np.random.default_rng(seed)
    obstacles: list[Obstacle] = []
    for _ in range(n_obstacles):
        for attempt in range(MAX_PLACEMENT_ATTEMPTS):
            cx = float(rng.uniform(b.x_min, b.x_max))
            cy = float(rng.uniform(b.y_min, b.y_max))
            r = float(rng.uniform(r_lo, r_hi))
            if query is not None:
                keep_out = r + clearance
                if dist((cx, cy), query.start) < keep_out:
                    continue
                if dist((cx, cy), query.target) < keep_out:
                    continue
            obstacles.append(Circle(Point2(cx, cy), r))
            break
        else:
            raise EnvironmentGenerationError(
                f"could not place obstacle {len(obstacles) + 1} of {n_obstacles} "
                f"after {MAX_PLACEMENT_ATTEMPTS} attempts")
    return Environment(b, tuple(obstacles))


def environment_to_dict(env: Environment, query: Optional[Query] = None) -> dict:
    """Serialize to the documented environment-document shape."""
    obstacles = []
    for obs in env.obstacles:
        if isinstance(obs, Circle):
            obstacles.append({"kind": "circle",
                              "center": [obs.center.x, obs.center.y],
                              "radius": obs.radius})
        else:
            obstacles.append({"kind": "polygon",
                              "vertices": [[v.x, v.y] for v in obs.vertices]})
    doc = {"bounds": list(env.bounds), "obstacles": obstacles}
    if query is not None:
        doc["query"] = {"start": [query.start.x, query.start.y],
                        "target": [query.target.x, query.target.y]}
    return doc


def _point_from(doc, what: str) -> Point2:
    if (not isinstance(doc, (list, tuple)) or len(doc) != 2
            or not all(isinstance(v, (int, float)) for v in doc)):
        raise FormatError(f"{what} must be a [x, y] pair, got {doc!r}")
    return Point2(float(doc[0]), float(doc[1]))


def _reject_unknown(doc: dict, allowed: set[str], where: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise FormatError(f"unknown field(s) {sorted(unknown)} in {where}")


def environment_from_dict(doc: dict) -> tuple[Environment, Optional[Query]]:
    """Parse an environment document; unknown fields are an error."""
    if not isinstance(doc, dict):
        raise FormatError(f"environment document must be an object, got {type(doc).__name__}")
    _reject_unknown(doc, {"bounds", "obstacles", "query"}, "environment document")
    if "bounds" not in doc:
        raise FormatError("environment document is missing 'bounds'")
    bounds_doc = doc["bounds"]
    if not isinstance(bounds_doc, (list, tuple)) or len(bounds_doc) != 4:
        raise FormatError(f"bounds must be [x_min, x_max, y_min, y_max], got {bounds_doc!r}")
    bounds = _check_bounds(Bounds(*(float(v) for v in bounds_doc)))

    obstacles: list[Obstacle] = []
    for i, entry in enumerate(doc.get("obstacles", [])):
        if not isinstance(entry, dict) or "kind" not in entry:
            raise FormatError(f"obstacle {i} must be an object with a 'kind'")
        kind = entry["kind"]
        if kind == "circle":
            _reject_unknown(entry, {"kind", "center", "radius"}, f"obstacle {i}")
            try:
                center = _point_from(entry["center"], f"obstacle {i} center")
                radius = float(entry["radius"])
            except KeyError as exc:
                raise FormatError(f"obstacle {i} is missing {exc}") from None
            obstacles.append(Circle(center, radius))
        elif kind == "polygon":
            _reject_unknown(entry, {"kind", "vertices"}, f"obstacle {i}")
            verts = entry.get("vertices")
            if not isinstance(verts, list):
                raise FormatError(f"obstacle {i} needs a 'vertices' list")
            obstacles.append(Polygon(tuple(_point_from(v, f"obstacle {i} vertex") for v in verts)))
        else:
            raise FormatError(f"obstacle {i} has unknown kind {kind!r}")

    query = None
    if "query" in doc:
        qdoc = doc["query"]
        if not isinstance(qdoc, dict):
            raise FormatError("query must be an object")
        _reject_unknown(qdoc, {"start", "target"}, "query")
        if "start" not in qdoc or "target" not in qdoc:
            raise FormatError("query needs both 'start' and 'target'")
        query = Query(_point_from(qdoc["start"], "query start"),
                      _point_from(qdoc["target"], "query target"))
    return Environment(bounds, tuple(obstacles)), query


def save_environment(path, env: Environment, query: Optional[Query] = None) -> None:
    text = json.dumps(environment_to_dict(env, query), indent=2)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def load_environment(path) -> tuple[Environment, Optional[Query]]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: not valid JSON ({exc})") from None
    return environment_from_dict(doc)


def _load_preset_file(name: str) -> tuple[Environment, Query]:
    text = resources.files("pathbench").joinpath(f"presets/{name}.json").read_text("utf-8")
    env, query = environment_from_dict(json.loads(text))
    assert query is not None, f"preset {name} ships without a query"
    return env, query


def _empty_preset() -> tuple[Environment, Query]:
    env = Environment(DEFAULT_BOUNDS, ())
    return env, Query(Point2(12.0, -35.0), Point2(-15.0, 10.0))


_PRESETS: dict[str, Callable[[], tuple[Environment, Query]]] = {
    "empty": _empty_preset,
    "irregular-a": lambda: _load_preset_file("irregular-a"),
}


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(_PRESETS))


def irregular_preset(name: str) -> tuple[Environment, Query]:
    """Look up a named built-in scenario.

    "empty" is an obstacle-free workspace; "irregular-a" is a fixed wall
    maze whose two offset gaps force an S-shaped route between the default
    start and target. Raises PresetLookupError for unknown names.
    """
    try:
        factory = _PRESETS[name]
    except KeyError:
        raise PresetLookupError(
            f"unknown preset {name!r}; available: {', '.join(preset_names())}") from None
    return factory()
