"""Watching the swarm converge.

The particle planner optimizes five free waypoints between the fixed
endpoints. This demo prints the best fitness as it falls, shows what the
early-stop rule does on a trivial query, and renders the best path found
in the preset maze.
"""

import os
import time

from pathbench import (PsoParams, PsoRun, environment_svg, irregular_preset,
                       plan_pso)
from pathbench.environment import Environment, Query
from pathbench.geometry import Bounds, Point2

OUT = "demo-output"


def main():
    os.makedirs(OUT, exist_ok=True)
    env, query = irregular_preset("irregular-a")

    run = PsoRun(env, query, PsoParams(rng_seed=3))
    print("seed 3, gbest fitness by iteration:")
    t0 = time.perf_counter()
    while not run.should_stop:
        run.step()
        if run.iteration % 100 == 0 or run.should_stop:
            print(f"  iter {run.iteration:4d}: gbest {run.gbest_fitness:10.3f} "
                  f"(omega {run.omega:.3f})")
    result = run.result(time.perf_counter() - t0)
    tag = f"length {result.length:.3f}" if result.feasible else "infeasible"
    print(f"  -> {tag} after {result.iterations_used} iterations "
          f"({result.elapsed:.2f}s)")
    with open(os.path.join(OUT, "pso-maze.svg"), "w", encoding="utf-8") as fh:
        fh.write(environment_svg(env, query=query,
                                 paths=[result.path] if result.path else []))

    # With nothing in the way, particle 0 already sits on the optimum, so
    # the run ends as soon as one full stagnation window has passed.
    open_water = Environment(Bounds(-40.0, 40.0, -40.0, 20.0), ())
    easy = Query(Point2(0.0, 0.0), Point2(10.0, 0.0))
    res = plan_pso(open_water, easy, PsoParams(rng_seed=0))
    print(f"open field: length {res.length:.3f} after "
          f"{res.iterations_used} iterations (early stop)")

    print(f"wrote {OUT}/pso-maze.svg")


if __name__ == "__main__":
    main()
