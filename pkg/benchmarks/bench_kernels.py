"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs on the same seeded inputs in both backends; outputs are
checked for agreement before timings are printed.
"""
import argparse
import timeit

import numpy as np

from somfrechet.core import GridSpec
from somfrechet.kernels import available_backends


def make_inputs(seed=0, V=100, T=50, n=40, grid="3x3"):
    rng = np.random.default_rng(seed)
    g = GridSpec.parse(grid)
    X = rng.normal(size=(V, T))
    W = rng.normal(size=(g.K, T))
    bmu = rng.integers(0, g.K, size=V)
    Ws = rng.normal(size=(n, g.K, T))
    As = rng.integers(0, g.K, size=(n, V))
    D = np.abs(rng.normal(size=(n, n)))
    D = D + D.T
    np.fill_diagonal(D, 0.0)
    return dict(X=X, W=W, bmu=bmu, sq=g.sq_grid_distances(), Ws=Ws, As=As, D=D)


def cases(mod, x):
    return {
        "bmu_assign": lambda: mod.bmu_assign(x["X"], x["W"]),
        "batch_update": lambda: mod.batch_update(x["X"], x["bmu"], x["sq"], 1.5),
        "smd_matrix[T]": lambda: mod.smd_matrix(x["Ws"], x["As"], mod.KIND_T),
        "smd_matrix[S]": lambda: mod.smd_matrix(x["Ws"], x["As"], mod.KIND_S),
        "smd_matrix[ST]": lambda: mod.smd_matrix(x["Ws"], x["As"], mod.KIND_ST),
        "floyd_warshall": lambda: mod.floyd_warshall(x["D"]),
    }


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    x = make_inputs()
    backends = available_backends()
    table = {name: cases(mod, x) for name, mod in backends.items()}
    names = list(backends)
    ref = table["python"]
    for kernel, fn in ref.items():
        want = fn()
        for b in names:
            if not np.allclose(table[b][kernel](), want, rtol=1e-12, atol=1e-12):
                raise SystemExit(f"{kernel}: {b} disagrees with python backend")
    print(f"{'kernel':<16}" + "".join(f"{b + ' (ms)':>16}" for b in names) + f"{'speedup':>10}")
    for kernel in ref:
        best = {b: min(timeit.repeat(table[b][kernel], number=1, repeat=args.repeat)) * 1e3
                for b in names}
        speed = best["python"] / best["cython"] if "cython" in best else float("nan")
        print(f"{kernel:<16}" + "".join(f"{best[b]:>16.3f}" for b in names) + f"{speed:>10.1f}")


if __name__ == "__main__":
    main()
