"""Common record type returned by every planner."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .geometry import Point2


@dataclass(frozen=True)
class PlanResult:
    """Outcome of one planning run.

    `path` is present iff the run was feasible, in which case `length`
    equals the geometric length of `path`. Infeasible runs carry
    length=nan and report how close the planner got via
    `closest_approach` (distance from the best point reached to the
    target). `params` is a plain-dict snapshot of the planner settings.
    """

    planner_id: str
    seed: int
    feasible: bool
    length: float
    elapsed: float
    iterations_used: int
    closest_approach: float
    path: Optional[tuple[Point2, ...]]
    params: dict
