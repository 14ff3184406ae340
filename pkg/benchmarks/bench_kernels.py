#!/usr/bin/env python3
"""Benchmark the integer normal-form kernels on both execution paths.

The package selects between a numba-compiled int64 path and a plain
object-dtype path at import time (TWISTKIT_PURE_NUMPY=1 forces the
latter), so each path is timed in its own subprocess.  Workloads are the
shapes the kernels actually see: bar-complex boundary matrices and their
kernel lattices, plus the full second-homology pipeline.  Random dense
matrices are deliberately not used; naive elimination swells their
entries past any fixed-width budget and both paths degenerate to
arbitrary precision.

Usage:
    python3 benchmarks/bench_kernels.py [--orders 8,10,12] [--repeats 3]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def measure(orders, repeats):
    """Time hnf / snf / h2 on this process's backend; return a doc."""
    from twistkit import intlin
    from twistkit.groups import cyclic
    from twistkit.homology import build_chain, h2

    import numpy as np

    # throwaway calls so jit compilation is not billed to the first case
    intlin.smith_diagonal(np.array([[2, 0], [0, 3]]))
    intlin.column_hnf(np.array([[2, 1], [0, 3]]))

    doc = {"backend": intlin.backend_name(), "cases": []}
    for n in orders:
        G = cyclic(n)
        chain = build_chain(G)
        K = intlin.kernel_basis(chain.d2)
        half = K[: (n * n) // 2, : (n * n) // 2]
        best_hnf = min(_timed(lambda: intlin.column_hnf(chain.d2)) for _ in range(repeats))
        best_snf = min(_timed(lambda: intlin.smith_normal_form(half)) for _ in range(repeats))
        best_h2 = min(_timed(lambda: h2(G)) for _ in range(repeats))
        doc["cases"].append(
            {
                "n": n,
                "hnf_s": best_hnf,
                "snf_s": best_snf,
                "h2_s": best_h2,
                "snf_diag_head": intlin.smith_diagonal(half)[:6],
                "h2_torsion": list(h2(G).torsion),
            }
        )
    return doc


def run_worker(pure, args):
    env = dict(os.environ)
    env["TWISTKIT_PURE_NUMPY"] = "1" if pure else "0"
    cmd = [
        sys.executable,
        os.path.abspath(__file__),
        "--worker",
        "--orders",
        ",".join(str(n) for n in args.orders),
        "--repeats",
        str(args.repeats),
    ]
    out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--orders", default="8,10,12", type=lambda s: [int(x) for x in s.split(",")]
    )
    parser.add_argument("--repeats", default=3, type=int)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        json.dump(measure(args.orders, args.repeats), sys.stdout)
        return

    fast = run_worker(pure=False, args=args)
    pure = run_worker(pure=True, args=args)

    for a, b in zip(fast["cases"], pure["cases"]):
        if a["snf_diag_head"] != b["snf_diag_head"] or a["h2_torsion"] != b["h2_torsion"]:
            raise SystemExit(f"backends disagree at order {a['n']}: {a} vs {b}")

    print(f"fast path: {fast['backend']}    fallback: {pure['backend']}")
    print(f"{'order':>5} {'stage':>9} {'fast':>11} {'fallback':>11} {'speedup':>8}")
    for a, b in zip(fast["cases"], pure["cases"]):
        for key, label in [("hnf_s", "hnf(d2)"), ("snf_s", "snf(ker)"), ("h2_s", "h2 full")]:
            ratio = b[key] / a[key] if a[key] > 0 else float("inf")
            print(f"{a['n']:>5} {label:>9} {a[key]:>10.4f}s {b[key]:>10.4f}s {ratio:>7.1f}x")
    print("outputs identical on both paths")


if __name__ == "__main__":
    main()
