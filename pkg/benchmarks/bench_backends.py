"""Time the compiled and numpy backends on the main pipeline stages.

    python3 benchmarks/bench_backends.py [--n 100] [--repeat 3]

Each stage is run once untimed per backend so JIT compilation is excluded.
"""

import argparse
import time

from topocoarse import kernels
from topocoarse.bottleneck import bottleneck_distance
from topocoarse.filtration import build_filtration, default_r_max
from topocoarse.generators import gen_annulus
from topocoarse.metric import shortest_path_metric
from topocoarse.persistence import compute_persistence
from topocoarse.selector import select


def stages(g):
    state = {}

    def metric():
        state["m"] = shortest_path_metric(g)

    def filtration():
        state["fc"] = build_filtration(state["m"], default_r_max(state["m"]))

    def persistence():
        state["pd"] = compute_persistence(state["fc"])

    def bottleneck():
        bottleneck_distance(state["pd"], state["pd"].scaled(1.1))

    def full_select():
        select(g, workers=1)

    return [("metric", metric), ("filtration", filtration), ("persistence", persistence),
            ("bottleneck", bottleneck), ("select", full_select)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    g = gen_annulus(args.n, seed=args.seed)
    results = {}
    for name in ("numba", "numpy"):
        kernels.set_backend(name)
        plan = stages(g)
        for _, fn in plan:
            fn()
        results[name] = [(label, best_of(fn, args.repeat)) for label, fn in plan]
    print(f"annulus n={args.n}, {g.n_edges} edges, best of {args.repeat}")
    print(f"{'stage':<12}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for (label, a), (_, b) in zip(results["numba"], results["numpy"]):
        print(f"{label:<12}{a:>12.4f}{b:>12.4f}{b / a:>10.1f}")


if __name__ == "__main__":
    main()
