"""Partial Euler products at doubling cutoffs, with the factor store cached on disk.

    python scripts/euler_convergence.py --rank 1 --s 3 --xs 200,400,800,1600
"""
import argparse
import os
from pathlib import Path

from nazeta.euler import IntegerCurve, LocalFactorStore, fill_store, fingerprint, truncated_product


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--f", default="1,0,0,0,0,1")
    ap.add_argument("--rank", type=int, default=1)
    ap.add_argument("--s", type=complex, default=3)
    ap.add_argument("--xs", default="200,400,800,1600")
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    a = ap.parse_args()

    c = IntegerCurve(tuple(int(x) for x in a.f.split(",")))
    xs = [int(x) for x in a.xs.split(",")]
    cache = Path(os.environ.get("NAZETA_CACHE", ".nazeta-cache"))
    store = LocalFactorStore(c, a.rank, cache / f"{fingerprint(c, a.rank)[:16]}-r{a.rank}.jsonl")
    fill_store(store, max(xs), workers=a.workers)

    prev = None
    print(f"{'X':>6} {'value':>22} {'|delta|':>10}")
    for X in xs:
        v = truncated_product(store, a.s, X, force=True).value
        d = "" if prev is None else f"{abs(v - prev):.3e}"
        print(f"{X:>6} {v.real:22.15f} {d:>10}")
        prev = v


if __name__ == "__main__":
    main()
