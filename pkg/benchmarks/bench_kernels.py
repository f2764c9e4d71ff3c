"""Compare the numba and pure-numpy MaxCut kernels.

    python benchmarks/bench_kernels.py [--repeat 3] [--brute-n 22] [--dp-n 40] [--json]

Both kernels are called directly, so the result does not depend on
UBUBBLE_DISABLE_NUMBA.  Each row also checks that the two values agree.
"""

from __future__ import annotations

import argparse
import json
import time

from ububble.core import graph_of_model
from ububble.gen import GenParams, random_model
from ububble.maxcut import BorderCut, ColumnRef, HeavyPart, PartSolver, maxcut_bruteforce
from ububble.maxcut import _kernels
from ububble.maxcut.dp import VIRTUAL

KERNELS = {
    "dp_step": (_kernels._dp_step_numba, _kernels._dp_step_numpy),
    "brute": (_kernels._brute_numba, _kernels._brute_numpy),
}


def best_of(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_dp(n: int, repeat: int) -> dict:
    m = random_model(GenParams(n=n, seed=3, grid=2, window=3))
    part = HeavyPart(VIRTUAL, VIRTUAL, tuple(ColumnRef(j, m.columns[j - 1]) for j in range(1, m.k + 1)))
    solver = PartSolver(part)
    row = {"kernel": "dp_step", "instance": f"n={m.n} k={m.k}"}
    for name, kernel in zip(("numba", "numpy"), KERNELS["dp_step"]):
        solver.solve(BorderCut(), BorderCut(), kernel=kernel)  # warm-up (JIT compile)
        t, value = best_of(lambda: solver.solve(BorderCut(), BorderCut(), kernel=kernel), repeat)
        row[name] = t
        row[f"{name}_value"] = value
    return row


def bench_brute(n: int, repeat: int) -> dict:
    g = graph_of_model(random_model(GenParams(n=n, seed=5, grid=2, window=4)))
    row = {"kernel": "brute", "instance": f"n={g.n} m={g.m}"}
    for name, kernel in zip(("numba", "numpy"), KERNELS["brute"]):
        maxcut_bruteforce(g, kernel=kernel)
        t, value = best_of(lambda: maxcut_bruteforce(g, kernel=kernel), repeat)
        row[name] = t
        row[f"{name}_value"] = value
    return row


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--brute-n", type=int, default=22)
    ap.add_argument("--dp-n", type=int, default=40)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rows = [bench_dp(args.dp_n, args.repeat), bench_brute(args.brute_n, args.repeat)]
    for r in rows:
        r["agree"] = r["numba_value"] == r["numpy_value"]
        r["speedup"] = r["numpy"] / r["numba"] if r["numba"] > 0 else float("inf")
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'kernel':<8} {'instance':<14} {'numba s':>9} {'numpy s':>9} {'speedup':>8} agree")
        for r in rows:
            print(
                f"{r['kernel']:<8} {r['instance']:<14} {r['numba']:>9.4f} {r['numpy']:>9.4f} "
                f"{r['speedup']:>7.1f}x {r['agree']}"
            )
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
