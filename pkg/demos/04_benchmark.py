"""A small head-to-head comparison.

Ten seeded trials per planner over random obstacle fields at the
default budgets, which takes around twenty seconds. The full-size
version of this experiment is what `pathbench bench` runs.
"""

import os

from pathbench import (PsoParams, RandomEnvFactory, RrtParams, grid_oracle,
                       plan_once, run_trials, summarize, write_results_csv)
from pathbench.benchmark import result_record
from pathbench.environment import Query
from pathbench.geometry import Point2

OUT = "demo-output"
QUERY = Query(Point2(20.0, -15.0), Point2(-25.0, 15.0))


def main():
    os.makedirs(OUT, exist_ok=True)
    factory = RandomEnvFactory(query=QUERY)
    specs = [("rrtstar", RrtParams()), ("pso", PsoParams())]

    records = []
    print("10 trials per planner (a small sample; the acceptance suite "
          "runs 50):")
    print(f"{'planner':8s} {'feasible':>8s} {'mean len':>9s} "
          f"{'std len':>8s} {'med time':>9s}")
    for planner_id, params in specs:
        stats = run_trials(factory, QUERY, planner_id, params,
                           n_trials=10, base_seed=1000)
        records.extend(result_record(r) for r in stats.results)
        print(f"{planner_id:8s} {stats.n_feasible:5d}/10 "
              f"{stats.mean_length:9.3f} {stats.std_length:8.3f} "
              f"{stats.median_time:8.2f}s")
        report = summarize(stats)
        edges = report["time"]["histogram"]["edges"]
        counts = report["time"]["histogram"]["counts"]
        bars = " ".join(f"{e:.1f}s:{c}" for e, c in zip(edges, counts) if c)
        print(f"         time histogram: {bars}")

    csv_path = os.path.join(OUT, "head-to-head.csv")
    write_results_csv(csv_path, records)
    print(f"wrote {csv_path}")

    # Sanity anchor: an exhaustive grid search on one of the same fields.
    env = factory(1000)
    oracle = grid_oracle(env, QUERY, resolution=0.5)
    res = plan_once(env, QUERY, "rrtstar", RrtParams(), 1000)
    if res.feasible:
        print(f"seed 1000: grid oracle {oracle:.3f}, "
              f"planner {res.length:.3f} (ratio {res.length / oracle:.3f})")


if __name__ == "__main__":
    main()
