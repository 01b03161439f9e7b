"""Sampling-based tree planner (RRT*) over a 2D environment.

The growth loop follows the classic shape: draw a uniform sample, steer
from the nearest tree node toward it by at most one step, collision-check
the motion, then choose the cheapest collision-free parent among nearby
nodes and rewire those neighbors through the new node when that lowers
their cost-to-come. The run keeps planning for the full iteration budget
and extracts the best goal-region node at the end.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .environment import Environment, Query, validate_query
from .errors import InvalidQueryError, InvalidStateError
from .geometry import Point2, dist, edge_free, path_length
from .result import PlanResult

__all__ = [
    "RrtParams", "RrtTree", "RrtStarRun", "plan_rrt_star", "random_sample",
    "find_nearest", "steering", "get_neighbors", "choose_parent", "rewire",
    "get_optimized_path", "edge_free",
]


@dataclass(frozen=True)
class RrtParams:
    iterations_num: int = 2000
    step_size: float = 2.0
    min_threshold: float = 3.0
    neighbor_radius: float = 4.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.iterations_num < 1:
            raise ValueError(f"iterations_num must be >= 1, got {self.iterations_num}")
        if not (self.step_size > 0 and math.isfinite(self.step_size)):
            raise ValueError(f"step_size must be > 0, got {self.step_size}")
        if not (self.min_threshold > 0 and math.isfinite(self.min_threshold)):
            raise ValueError(f"min_threshold must be > 0, got {self.min_threshold}")
        if self.neighbor_radius < self.step_size:
            raise ValueError(
                f"neighbor_radius ({self.neighbor_radius}) must be >= "
                f"step_size ({self.step_size})")


class RrtTree:
    """Rooted tree of 2D nodes with parent links and cost-to-come."""

    def __init__(self, root: Sequence[float]):
        self._xs: list[float] = [float(root[0])]
        self._ys: list[float] = [float(root[1])]
        self._parent: list[int] = [-1]
        self._cost: list[float] = [0.0]
        self._children: list[list[int]] = [[]]

    def __len__(self) -> int:
        return len(self._xs)

    def position(self, i: int) -> Point2:
        return Point2(self._xs[i], self._ys[i])

    def parent(self, i: int) -> Optional[int]:
        p = self._parent[i]
        return None if p < 0 else p

    def cost_to_come(self, i: int) -> float:
        return self._cost[i]

    def children(self, i: int) -> tuple[int, ...]:
        return tuple(self._children[i])

    def add(self, position: Sequence[float], parent_index: int) -> int:
        """Insert a node; its cost is the parent's plus the edge length."""
        x, y = float(position[0]), float(position[1])
        idx = len(self._xs)
        self._xs.append(x)
        self._ys.append(y)
        self._parent.append(parent_index)
        self._cost.append(self._cost[parent_index]
                          + math.hypot(x - self._xs[parent_index],
                                       y - self._ys[parent_index]))
        self._children.append([])
        self._children[parent_index].append(idx)
        return idx

    def all_costs(self) -> list[float]:
        return list(self._cost)


def random_sample(env: Environment, rng: np.random.Generator) -> Point2:
    """Uniform point over the bounds rectangle; one draw per coordinate.

    Samples are not filtered against obstacles.
    """
    b = env.bounds
    return Point2(float(rng.uniform(b.x_min, b.x_max)),
                  float(rng.uniform(b.y_min, b.y_max)))


def find_nearest(tree: RrtTree, p: Sequence[float]) -> int:
    """Index of the node closest to p; ties go to the lowest index."""
    if len(tree) == 0:
        raise InvalidStateError("find_nearest on an empty tree")
    px, py = p[0], p[1]
    best = 0
    best_d = math.inf
    for i, (x, y) in enumerate(zip(tree._xs, tree._ys)):
        d = (x - px) ** 2 + (y - py) ** 2
        if d < best_d:
            best_d = d
            best = i
    return best


def steering(p_rand: Sequence[float], p_near: Sequence[float],
             step_size: float) -> Point2:
    """Move from p_near toward p_rand by at most step_size."""
    dx = p_rand[0] - p_near[0]
    dy = p_rand[1] - p_near[1]
    d = math.hypot(dx, dy)
    if d <= step_size:
        return Point2(float(p_rand[0]), float(p_rand[1]))
    scale = step_size / d
    return Point2(p_near[0] + dx * scale, p_near[1] + dy * scale)


def get_neighbors(tree: RrtTree, p: Sequence[float], radius: float) -> list[int]:
    """Indices of all nodes within radius of p, in ascending index order."""
    px, py = p[0], p[1]
    rr = radius * radius
    out = []
    for i, (x, y) in enumerate(zip(tree._xs, tree._ys)):
        if (x - px) ** 2 + (y - py) ** 2 <= rr:
            out.append(i)
    return out


def choose_parent(tree: RrtTree, neighbors: Sequence[int], p_near_idx: int,
                  p_new: Sequence[float], env: Environment) -> int:
    """Cheapest collision-free parent for p_new among the neighbors.

    Candidates are ranked by cost_to_come + edge length (ties by lower
    index); the first whose edge to p_new is free wins. Falls back to
    p_near_idx when no neighbor qualifies.
    """
    ranked = sorted(neighbors,
                    key=lambda i: (tree._cost[i] + dist(tree.position(i), p_new), i))
    for i in ranked:
        if edge_free(tree.position(i), p_new, env):
            return i
    return p_near_idx


def _propagate_cost(tree: RrtTree, start: int) -> None:
    # Recompute cost-to-come below a reparented node.
    stack = [start]
    while stack:
        i = stack.pop()
        for c in tree._children[i]:
            tree._cost[c] = tree._cost[i] + math.hypot(
                tree._xs[c] - tree._xs[i], tree._ys[c] - tree._ys[i])
            stack.append(c)


def rewire(tree: RrtTree, neighbors: Sequence[int], new_index: int,
           env: Environment) -> None:
    """Reroute neighbors through the new node where that lowers their cost.

    Neighbors are visited in ascending index order against live costs, so
    a cost drop propagated to a later neighbor's subtree is taken into
    account. Costs never increase.
    """
    p_new = tree.position(new_index)
    for i in sorted(neighbors):
        if i == new_index:
            continue
        cand = tree._cost[new_index] + dist(p_new, tree.position(i))
        if cand < tree._cost[i] and edge_free(p_new, tree.position(i), env):
            old_parent = tree._parent[i]
            tree._children[old_parent].remove(i)
            tree._parent[i] = new_index
            tree._children[new_index].append(i)
            tree._cost[i] = cand
            _propagate_cost(tree, i)


def get_optimized_path(tree: RrtTree, goal_index: int) -> tuple[Point2, ...]:
    """Waypoints from the root to goal_index by following parent links."""
    if not (0 <= goal_index < len(tree)):
        raise InvalidStateError(f"node index {goal_index} out of range")
    out = [tree.position(goal_index)]
    i = goal_index
    steps = 0
    while tree._parent[i] >= 0:
        i = tree._parent[i]
        out.append(tree.position(i))
        steps += 1
        if steps > len(tree):
            raise InvalidStateError("parent chain does not terminate at the root")
    out.reverse()
    return tuple(out)


class RrtStarRun:
    """One in-progress tree search; step() advances a single iteration."""

    def __init__(self, env: Environment, query: Query, params: RrtParams):
        violations = validate_query(env, query)
        if violations:
            raise InvalidQueryError("; ".join(v.reason for v in violations))
        self.env = env
        self.query = query
        self.params = params
        self.rng = np.random.default_rng(params.rng_seed)
        self.tree = RrtTree(query.start)
        self.goal_nodes: list[int] = []
        self.closest_approach = dist(query.start, query.target)
        self.iterations_done = 0
        if self.closest_approach <= params.min_threshold:
            self.goal_nodes.append(0)

    def step(self) -> Optional[int]:
        """Run one iteration; returns the inserted node index, or None."""
        self.iterations_done += 1
        p_rand = random_sample(self.env, self.rng)
        near_idx = find_nearest(self.tree, p_rand)
        p_near = self.tree.position(near_idx)
        p_new = steering(p_rand, p_near, self.params.step_size)
        if p_new == p_near:
            return None
        if not edge_free(p_near, p_new, self.env):
            return None
        neighbors = get_neighbors(self.tree, p_new, self.params.neighbor_radius)
        if neighbors:
            parent = choose_parent(self.tree, neighbors, near_idx, p_new, self.env)
        else:
            parent = near_idx
        idx = self.tree.add(p_new, parent)
        if neighbors:
            rewire(self.tree, neighbors, idx, self.env)
        d_goal = dist(p_new, self.query.target)
        if d_goal < self.closest_approach:
            self.closest_approach = d_goal
        if d_goal <= self.params.min_threshold:
            self.goal_nodes.append(idx)
        return idx

    def best_goal(self) -> Optional[tuple[int, float]]:
        """Best goal-region node and its cost through to the exact target.

        The metric is cost_to_come + remaining straight-line distance;
        ties go to the lower index. None when the goal region was never
        reached.
        """
        best = None
        best_cost = math.inf
        for i in self.goal_nodes:
            c = self.tree.cost_to_come(i) + dist(self.tree.position(i),
                                                 self.query.target)
            if c < best_cost:
                best_cost = c
                best = i
        if best is None:
            return None
        return best, best_cost

    def result(self, elapsed: float) -> PlanResult:
        snapshot = asdict(self.params)
        bg = self.best_goal()
        if bg is None:
            return PlanResult(
                planner_id="rrtstar", seed=self.params.rng_seed, feasible=False,
                length=math.nan, elapsed=elapsed,
                iterations_used=self.iterations_done,
                closest_approach=self.closest_approach, path=None, params=snapshot)
        goal_idx, _ = bg
        waypoints = list(get_optimized_path(self.tree, goal_idx))
        target = self.query.target
        if waypoints[-1] != target and edge_free(waypoints[-1], target, self.env):
            waypoints.append(target)
        path = tuple(waypoints)
        length = path_length(path) if len(path) >= 2 else 0.0
        return PlanResult(
            planner_id="rrtstar", seed=self.params.rng_seed, feasible=True,
            length=length, elapsed=elapsed, iterations_used=self.iterations_done,
            closest_approach=dist(path[-1], target), path=path, params=snapshot)


def plan_rrt_star(env: Environment, query: Query,
                  params: RrtParams = RrtParams()) -> PlanResult:
    """Grow a tree for the full iteration budget and report the best path.

    Feasible means some node ended up within min_threshold of the target;
    the returned path gains a final collision-checked segment to the exact
    target when that segment is free, and otherwise stops at the node.
    """
    t0 = time.perf_counter()
    run = RrtStarRun(env, query, params)
    for _ in range(params.iterations_num):
        run.step()
    return run.result(time.perf_counter() - t0)
