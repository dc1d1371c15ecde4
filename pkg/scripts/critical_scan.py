"""Sign changes of xi(1/2 + it) for the rank-2 lattice zeta, checked against the closed form."""
import argparse

import mpmath

from nazeta.lattice import QuadSpec, critical_scan


def closed_form(t: float) -> float:
    s = mpmath.mpc(0.5, t)

    def xh(w):
        if mpmath.re(w) < 0.5:
            w = 1 - w
        return mpmath.pi ** (-w / 2) * mpmath.gamma(w / 2) * mpmath.zeta(w)

    return float(mpmath.re(2 * xh(2 * s) / (s - 1) - 2 * xh(2 * s - 1) / s))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t0", type=float, default=0.0)
    ap.add_argument("--t1", type=float, default=20.0)
    ap.add_argument("--step", type=float, default=0.5)
    ap.add_argument("--refine", type=int, default=10)
    a = ap.parse_args()

    res = critical_scan((a.t0, a.t1), a.step, QuadSpec(), refine=a.refine)
    print(f"max |Im xi| on the line: {res.max_imag:.2e}")
    for lo, hi in res.brackets:
        print(f"zero in [{lo:.6f}, {hi:.6f}]  closed form signs {closed_form(lo):+.2e} {closed_form(hi):+.2e}")


if __name__ == "__main__":
    main()
