"""Particle-swarm path planner over a fixed-length waypoint encoding.

Each particle is a flat vector [x1, y1, ..., xn, yn] of intermediate
waypoints; decoding prepends the query start and appends the target.
Fitness is geometric path length plus a penalty proportional to the
length of path lying inside obstacles (or out of bounds), measured by
sub-sampling every segment at a fixed resolution. The swarm stops early
once the global best has been flat for a full stagnation window.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .environment import Environment, Query, validate_query
from .errors import InvalidQueryError
from .geometry import CollisionField, Point2, path_length
from .result import PlanResult

__all__ = [
    "PsoParams", "Particle", "PsoRun", "plan_pso", "decode", "encode",
    "fitness", "path_violation", "update_velocity", "update_position",
    "update_inertia", "VIOLATION_RESOLUTION",
]

#: Segment sub-sampling resolution (workspace units) for the penalty term.
VIOLATION_RESOLUTION = 0.1


@dataclass(frozen=True)
class PsoParams:
    max_iterations: int = 2000
    population: int = 50
    n_waypoints: int = 5
    c1: float = 2.0
    c2: float = 2.0
    omega_start: float = 0.9
    omega_end: float = 0.4
    v_max: float = 4.0
    penalty_lambda: float = 1000.0
    stop_epsilon: float = 1e-4
    stagnation_window: int = 30
    rng_seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.population < 1:
            raise ValueError(f"population must be >= 1, got {self.population}")
        if self.n_waypoints < 1:
            raise ValueError(f"n_waypoints must be >= 1, got {self.n_waypoints}")
        if self.omega_start < self.omega_end:
            raise ValueError("omega_start must be >= omega_end")
        if not (self.v_max > 0):
            raise ValueError(f"v_max must be > 0, got {self.v_max}")
        if self.penalty_lambda < 0:
            raise ValueError(f"penalty_lambda must be >= 0, got {self.penalty_lambda}")
        if self.stop_epsilon < 0:
            raise ValueError(f"stop_epsilon must be >= 0, got {self.stop_epsilon}")
        if self.stagnation_window < 1:
            raise ValueError(f"stagnation_window must be >= 1, got {self.stagnation_window}")


@dataclass(frozen=True)
class Particle:
    """Read-only snapshot of one swarm member."""

    position: np.ndarray
    velocity: np.ndarray
    fitness: float
    pbest_position: np.ndarray
    pbest_fitness: float


def decode(position: Sequence[float], query: Query) -> tuple[Point2, ...]:
    """Turn a flat waypoint vector into start -> w1 ... wn -> target."""
    vec = np.asarray(position, dtype=np.float64).ravel()
    if vec.size == 0 or vec.size % 2 != 0:
        raise ValueError(f"waypoint vector length must be a positive even number, got {vec.size}")
    mid = [Point2(float(vec[2 * i]), float(vec[2 * i + 1])) for i in range(vec.size // 2)]
    return (query.start, *mid, query.target)


def encode(path: Sequence[Sequence[float]]) -> np.ndarray:
    """Inverse of decode: flatten the intermediate waypoints of a path."""
    if len(path) < 3:
        raise ValueError("path must have at least one intermediate waypoint")
    out = np.empty(2 * (len(path) - 2), dtype=np.float64)
    for i, p in enumerate(path[1:-1]):
        out[2 * i] = p[0]
        out[2 * i + 1] = p[1]
    return out


def _waypoint_tensor(positions: np.ndarray, query: Query) -> np.ndarray:
    m, d = positions.shape
    n = d // 2
    wp = np.empty((m, n + 2, 2), dtype=np.float64)
    wp[:, 0, 0] = query.start.x
    wp[:, 0, 1] = query.start.y
    wp[:, -1, 0] = query.target.x
    wp[:, -1, 1] = query.target.y
    wp[:, 1:-1, :] = positions.reshape(m, n, 2)
    return wp


def _lengths_and_violations(wp: np.ndarray,
                            field: CollisionField) -> tuple[np.ndarray, np.ndarray]:
    """Per-particle geometric length and blocked-length measure.

    Every segment is sampled at VIOLATION_RESOLUTION spacing (midpoints of
    equal sub-intervals); each blocked sample contributes its spacing.
    """
    m, k, _ = wp.shape
    segs = k - 1
    vec = wp[:, 1:, :] - wp[:, :-1, :]
    seg_len = np.hypot(vec[:, :, 0], vec[:, :, 1])
    lengths = seg_len.sum(axis=1)

    flat_len = seg_len.ravel()
    flat_a = wp[:, :-1, :].reshape(-1, 2)
    flat_v = vec.reshape(-1, 2)
    n_sub = np.maximum(1, np.ceil(flat_len / VIOLATION_RESOLUTION).astype(np.int64))
    total = int(n_sub.sum())
    seg_of = np.repeat(np.arange(flat_len.size), n_sub)
    first = np.concatenate(([0], np.cumsum(n_sub)[:-1]))
    within = np.arange(total) - np.repeat(first, n_sub)
    t = (within + 0.5) / n_sub[seg_of]
    pts = flat_a[seg_of] + t[:, None] * flat_v[seg_of]
    blocked = ~field.free(pts)
    spacing = flat_len[seg_of] / n_sub[seg_of]
    contrib = np.where(blocked, spacing, 0.0)
    violations = np.bincount(seg_of // segs, weights=contrib, minlength=m)
    return lengths, violations


def path_violation(path: Sequence[Sequence[float]], env: Environment) -> float:
    """Blocked length of an explicit waypoint path, by sub-sampling.

    Zero iff the path is collision-free at VIOLATION_RESOLUTION.
    """
    wp = np.asarray(path, dtype=np.float64)[None, :, :]
    _, viol = _lengths_and_violations(wp, CollisionField(env))
    return float(viol[0])


def fitness(position: Sequence[float], query: Query, env: Environment,
            penalty_lambda: float) -> float:
    """Path length plus penalty_lambda times the blocked-length measure."""
    vec = np.asarray(position, dtype=np.float64).ravel()
    if vec.size == 0 or vec.size % 2 != 0:
        raise ValueError(f"waypoint vector length must be a positive even number, got {vec.size}")
    wp = _waypoint_tensor(vec[None, :], query)
    lengths, violations = _lengths_and_violations(wp, CollisionField(env))
    return float(lengths[0] + penalty_lambda * violations[0])


def update_velocity(velocity: np.ndarray, position: np.ndarray,
                    pbest: np.ndarray, gbest: np.ndarray, omega: float,
                    c1: float, c2: float, rng: np.random.Generator,
                    v_max: float) -> np.ndarray:
    """One particle's velocity update; r1 and r2 are fresh scalar draws."""
    r1 = rng.random()
    r2 = rng.random()
    v = omega * velocity + c1 * r1 * (pbest - position) + c2 * r2 * (gbest - position)
    return np.clip(v, -v_max, v_max)


def update_position(position: np.ndarray, velocity: np.ndarray,
                    lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Apply the velocity, clamping every coordinate to the bounds."""
    return np.clip(position + velocity, lo, hi)


def update_inertia(iteration: int, max_iterations: int, omega_start: float,
                   omega_end: float, stagnant: bool,
                   rng: np.random.Generator) -> float:
    """Linearly decaying inertia weight with a jolt when the swarm stalls.

    The schedule runs omega_start at iteration 0 down to omega_end at
    max_iterations. When `stagnant` (no personal best improved for a full
    stagnation window) the value gains a uniform perturbation in
    [-0.1, 0.1], clamped back into [omega_end, omega_start].
    """
    frac = min(max(iteration / max_iterations, 0.0), 1.0)
    omega = omega_start - (omega_start - omega_end) * frac
    if stagnant:
        omega += float(rng.uniform(-0.1, 0.1))
        omega = min(max(omega, omega_end), omega_start)
    return omega


class PsoRun:
    """One in-progress swarm optimization; step() advances one iteration."""

    def __init__(self, env: Environment, query: Query, params: PsoParams):
        violations = validate_query(env, query)
        if violations:
            raise InvalidQueryError("; ".join(v.reason for v in violations))
        self.env = env
        self.query = query
        self.params = params
        self.rng = np.random.default_rng(params.rng_seed)
        self._field = CollisionField(env)
        b = env.bounds
        n = params.n_waypoints
        self._lo = np.tile((b.x_min, b.y_min), n)
        self._hi = np.tile((b.x_max, b.y_max), n)

        m = params.population
        self.positions = self.rng.uniform(self._lo, self._hi, size=(m, 2 * n))
        # Particle 0 starts on the straight line so a trivially clear
        # query is solved from the first evaluation.
        ts = np.arange(1, n + 1) / (n + 1)
        sx, sy = query.start
        tx, ty = query.target
        anchor = np.empty(2 * n)
        anchor[0::2] = sx + (tx - sx) * ts
        anchor[1::2] = sy + (ty - sy) * ts
        self.positions[0] = anchor
        self.velocities = np.zeros_like(self.positions)

        self.fitnesses = self._evaluate(self.positions)
        self.pbest_positions = self.positions.copy()
        self.pbest_fitnesses = self.fitnesses.copy()
        g = int(np.argmin(self.pbest_fitnesses))
        self.gbest_position = self.pbest_positions[g].copy()
        self.gbest_fitness = float(self.pbest_fitnesses[g])

        self.iteration = 0
        self.omega = params.omega_start
        self.stopped = False
        self._last_improvement = 0
        self._flat_streak = 0

    def _evaluate(self, positions: np.ndarray) -> np.ndarray:
        wp = _waypoint_tensor(positions, self.query)
        lengths, violations = _lengths_and_violations(wp, self._field)
        return lengths + self.params.penalty_lambda * violations

    def particle(self, i: int) -> Particle:
        return Particle(position=self.positions[i].copy(),
                        velocity=self.velocities[i].copy(),
                        fitness=float(self.fitnesses[i]),
                        pbest_position=self.pbest_positions[i].copy(),
                        pbest_fitness=float(self.pbest_fitnesses[i]))

    @property
    def stagnant(self) -> bool:
        return (self.iteration - self._last_improvement) >= self.params.stagnation_window

    @property
    def should_stop(self) -> bool:
        return self.stopped or self.iteration >= self.params.max_iterations

    def step(self) -> None:
        """Inertia, velocity, position, fitness, and best-tracking update."""
        p = self.params
        self.omega = update_inertia(self.iteration, p.max_iterations,
                                    p.omega_start, p.omega_end,
                                    self.stagnant, self.rng)
        # One r1, r2 pair per particle, drawn in index order.
        r = self.rng.random((p.population, 2))
        v = (self.omega * self.velocities
             + p.c1 * r[:, 0:1] * (self.pbest_positions - self.positions)
             + p.c2 * r[:, 1:2] * (self.gbest_position[None, :] - self.positions))
        self.velocities = np.clip(v, -p.v_max, p.v_max)
        self.positions = np.clip(self.positions + self.velocities,
                                 self._lo, self._hi)
        self.fitnesses = self._evaluate(self.positions)

        improved = self.fitnesses < self.pbest_fitnesses
        if improved.any():
            self.pbest_positions[improved] = self.positions[improved]
            self.pbest_fitnesses[improved] = self.fitnesses[improved]
            self._last_improvement = self.iteration + 1

        previous = self.gbest_fitness
        g = int(np.argmin(self.pbest_fitnesses))
        if self.pbest_fitnesses[g] < self.gbest_fitness:
            self.gbest_fitness = float(self.pbest_fitnesses[g])
            self.gbest_position = self.pbest_positions[g].copy()

        self.iteration += 1
        if previous - self.gbest_fitness < p.stop_epsilon:
            self._flat_streak += 1
        else:
            self._flat_streak = 0
        if self._flat_streak >= p.stagnation_window:
            self.stopped = True

    def result(self, elapsed: float) -> PlanResult:
        snapshot = asdict(self.params)
        path = decode(self.gbest_position, self.query)
        violation = path_violation(path, self.env)
        feasible = violation == 0.0
        return PlanResult(
            planner_id="pso", seed=self.params.rng_seed, feasible=feasible,
            length=path_length(path) if feasible else math.nan,
            elapsed=elapsed, iterations_used=self.iteration,
            closest_approach=0.0, path=path if feasible else None,
            params=snapshot)


def plan_pso(env: Environment, query: Query,
             params: PsoParams = PsoParams()) -> PlanResult:
    """Optimize a waypoint path; feasible iff the best path samples clean."""
    t0 = time.perf_counter()
    run = PsoRun(env, query, params)
    while not run.should_stop:
        run.step()
    return run.result(time.perf_counter() - t0)
