"""Compare the compiled enumeration kernel, its pure-Python fallback and the transfer recursion.

    python benchmarks/bench_kernels.py [--repeat 3] [--skip-python] [--json]

Each workload is one weighted partition sum; all methods must return the same
polynomial, and the script exits 1 if they do not.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from qschmidt import kernels
from qschmidt.genfun import PRESETS, _plan, formal_ring, weighted_sum
from qschmidt.registry import q_ring, qz_ring
from qschmidt.transfer import class_size

WORKLOADS = [
    # name, min_gap, N, substitution, ring
    ("distinct, q-weight, N=30", 1, 30, "q,q,1,1", q_ring(40)),
    ("distinct, z-graded, N=10", 1, 10, "zq,zq,q/z,q/z", qz_ring(40, 30)),
    ("all, q-weight, N=10", 0, 10, "q,q,1,1", q_ring(40)),
    ("all, signed, N=8", 0, 8, "q,q,-1,-q", q_ring(40)),
    ("all, formal, N=6", 0, 6, "formal", formal_ring(16)),
    ("distinct, formal, unbounded", 1, None, "formal", formal_ring(16)),
]


def best_of(repeat: int, fn) -> tuple[float, object]:
    best, result = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--skip-python", action="store_true", help="skip the slow fallback kernel")
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args(argv)

    methods = [("transfer", dict(method="transfer"))]
    if "compiled" in kernels.BACKENDS:
        methods.insert(0, ("compiled", dict(method="enumerate", backend="compiled")))
    if not args.skip_python:
        methods.append(("python", dict(method="enumerate", backend="python")))

    rows, agree = [], True
    for name, gap, N, sub_name, ring in WORKLOADS:
        sub = PRESETS[sub_name]
        plan = _plan(gap, N, sub, ring)
        visited = class_size(plan.max_part, gap, tuple(int(x) for x in plan.F[0]), int(plan.hi[0]))
        row = {"workload": name, "partitions": visited}
        results = []
        for label, kw in methods:
            secs, poly = best_of(args.repeat, lambda: weighted_sum(gap, N, sub, ring, **kw))
            row[label] = secs
            results.append(poly)
        row["agree"] = all(r == results[0] for r in results)
        agree &= row["agree"]
        rows.append(row)

    if args.json:
        json.dump(rows, sys.stdout, indent=2)
        print()
    else:
        labels = [m[0] for m in methods]
        print(f"{'workload':<30}{'partitions':>12}" + "".join(f"{l + ' ms':>14}" for l in labels)
              + "  agree")
        for row in rows:
            print(f"{row['workload']:<30}{row['partitions']:>12}"
                  + "".join(f"{row[l] * 1000:>14.1f}" for l in labels) + f"  {row['agree']}")
        if "compiled" in labels and "python" in labels:
            ratio = sum(r["python"] for r in rows) / sum(r["compiled"] for r in rows)
            print(f"\nfallback / compiled total time: {ratio:.0f}x")
    return 0 if agree else 1


if __name__ == "__main__":
    sys.exit(main())
