"""Command line front end.

Exit codes: 0 ok, 1 bad input, 2 a mathematical check failed, 3 no convergence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .artin import ArtinZeta, class_number, zeta_value
from .core import InvariantTable, build_zeta
from .curves import HyperellipticCurve, count_points, weierstrass_count
from .errors import ConsistencyError, InputError, NazetaError
from .euler import IntegerCurve, LocalFactorStore, abscissa, fill_store, fingerprint, truncated_product
from .exact import Poly, find_roots
from .lattice import (
    AREA,
    EpsteinParams,
    QuadSpec,
    UpperHalfPoint,
    area_by_quadrature,
    critical_scan,
    epstein_hat,
    epstein_hat_theta,
    h0_lattice,
    residue,
    xi_q2,
)
from .rank2 import Rank2Genus2Input, assemble_rank2_genus2, rank2_checks
from .report import Report, atomic_write, dump_json


@dataclass
class RunConfig:
    subcommand: str
    args: argparse.Namespace
    tol: float = 1e-8
    budget: int = 2**26
    threads: int = 1
    out: Path | None = None
    report: Path | None = None
    force: bool = False
    cache: Path = field(default_factory=lambda: Path(os.environ.get("NAZETA_CACHE", ".nazeta-cache")))

    def __post_init__(self):
        if not self.tol > 0:
            raise InputError("--tol must be positive")
        if self.budget < 1 or self.threads < 1:
            raise InputError("--budget and --threads must be positive")


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise InputError(f"cannot parse complex number {text!r}") from None


def parse_range(text: str, sep: str) -> tuple[str, str]:
    if sep not in text:
        raise InputError(f"expected a range like a{sep}b, got {text!r}")
    a, b = text.split(sep, 1)
    return a, b


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _emit(cfg: RunConfig, payload: dict):
    text = dump_json(payload)
    if cfg.out:
        atomic_write(cfg.out, text)
    else:
        sys.stdout.write(text)


def _curve(cfg: RunConfig) -> HyperellipticCurve:
    return HyperellipticCurve.from_json(_read_json(cfg.args.curve))


def cmd_count(cfg: RunConfig) -> int:
    curve = _curve(cfg)
    lo, hi = parse_range(cfg.args.degrees, "..")
    ms = range(int(lo), int(hi) + 1)
    counts = {str(m): count_points(curve, m, budget=cfg.budget, workers=cfg.threads) for m in ms}
    _emit(cfg, {"curve": curve.to_json(), "q": curve.q, "genus": curve.genus, "counts": counts})
    return 0


def cmd_artin(cfg: RunConfig) -> int:
    curve = _curve(cfg)
    z = ArtinZeta.from_curve(curve, budget=cfg.budget, workers=cfg.threads)
    _emit(
        cfg,
        {
            **z.to_json(),
            "class_number": class_number(z),
            "zeta_2": zeta_value(z, 2),
            "reciprocal_roots": [[w.real, w.imag] for w in z.roots],
        },
    )
    return 0


def cmd_invariants(cfg: RunConfig) -> int:
    curve = _curve(cfg)
    r = cfg.args.rank
    if r == 1:
        tbl = InvariantTable.rank_one(ArtinZeta.from_curve(curve, budget=cfg.budget))
    elif r == 2:
        tbl = _rank2(cfg, curve).table
    else:
        raise InputError("explicit invariants exist for r = 1, and r = 2 in genus 2")
    nz = build_zeta(tbl)
    _emit(cfg, {"table": tbl.to_json(), "zeta": nz.to_json()})
    return 0


def _rank2(cfg: RunConfig, curve: HyperellipticCurve):
    if curve.genus != 2:
        raise InputError("zeta2g2 needs a genus-2 curve")
    inp = Rank2Genus2Input.from_zeta(ArtinZeta.from_curve(curve, budget=cfg.budget), weierstrass_count(curve))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return assemble_rank2_genus2(inp, gamma2_source=cfg.args.gamma2 if "gamma2" in cfg.args else "prop33")


def cmd_zeta2g2(cfg: RunConfig) -> int:
    curve = _curve(cfg)
    res = _rank2(cfg, curve)
    rep = Report(rank2_checks(res, tol=max(cfg.tol, 1e-6)))
    payload = {
        "curve": curve.to_json(),
        "zeta": res.zeta.to_json(),
        "table": res.table.to_json(),
        "gamma": list(res.gammas),
        "beta": list(res.betas),
        "flags": list(res.flags),
        "checks_failed": [c.name for c in rep.failures()],
    }
    _emit(cfg, payload)
    if cfg.report:
        rep.write(cfg.report)
    if not rep.ok:
        raise ConsistencyError(f"{len(rep.failures())} checks failed: {[c.name for c in rep.failures()]}")
    return 0


def cmd_euler(cfg: RunConfig) -> int:
    a = cfg.args
    c = IntegerCurve.from_json(_read_json(a.curve))
    store = LocalFactorStore(c, a.rank, cfg.cache / f"{_store_name(c, a.rank)}.jsonl")
    fill_store(store, a.xmax, workers=cfg.threads, budget=cfg.budget)
    payload = {"curve": list(c.f_coeffs), "rank": a.rank, "xmax": a.xmax, "abscissa": abscissa(a.rank, c.genus)}
    if a.scan:
        rows = []
        for text in a.scan.split(","):
            s = parse_complex(text)
            r = truncated_product(store, s, a.xmax, force=True)
            rows.append({"s": s, "value": r.value})
        payload["scan"] = rows
    else:
        s = parse_complex(a.s)
        r = truncated_product(store, s, a.xmax, force=cfg.force)
        payload.update(
            {
                "s": s,
                "value": r.value,
                "checkpoints": [{"X": x, "value": v} for x, v in r.checkpoints],
                "deltas": list(r.deltas),
                "primes": r.n_primes,
                "flags": list(r.flags),
            }
        )
    _emit(cfg, payload)
    return 0


def _store_name(c: IntegerCurve, r: int) -> str:
    return f"{fingerprint(c, r)[:16]}-r{r}"


def cmd_lattice(cfg: RunConfig) -> int:
    a = cfg.args
    quad = QuadSpec(tol=cfg.tol)
    op = a.op
    if op == "xi":
        s = parse_complex(a.s)
        v = xi_q2(s, quad, method=a.method)
        payload = {"op": op, "s": s, "value": v.value, "error": v.error, "cells": v.cells}
    elif op == "epstein":
        p = UpperHalfPoint.of(parse_complex(a.tau))
        s = parse_complex(a.s)
        direct = s.real > 1 and a.method == "direct"
        val = epstein_hat(p, s, EpsteinParams(tail_tol=cfg.tol)) if direct else epstein_hat_theta(p, s, quad)
        payload = {"op": op, "tau": p.tau, "s": s, "value": val, "method": "direct" if direct else "theta"}
    elif op == "h0":
        p = UpperHalfPoint.of(parse_complex(a.tau))
        payload = {"op": op, "tau": p.tau, "value": h0_lattice(p)}
    elif op == "area":
        payload = {"op": op, "value": area_by_quadrature(quad), "closed_form": AREA}
    elif op == "residue":
        payload = {"op": op, "residue_1": residue(1, quad), "residue_0": residue(0, quad), "area": AREA}
    elif op == "scan":
        lo, hi = parse_range(a.trange, ":")
        res = critical_scan((float(lo), float(hi)), a.step, quad, refine=a.refine)
        payload = {
            "op": op,
            "t": list(res.ts),
            "re_xi": [v.real for v in res.values],
            "max_imag": res.max_imag,
            "brackets": [list(b) for b in res.brackets],
        }
    else:  # argparse restricts choices
        raise InputError(f"unknown op {op}")
    _emit(cfg, payload)
    return 0


def cmd_roots(cfg: RunConfig) -> int:
    a = cfg.args
    if a.poly:
        P = Poly.from_json(json.loads(a.poly))
    else:
        d = _read_json(a.numerator)
        d = d.get("zeta", d)
        P = Poly.from_json(d["numerator"])
    roots = find_roots(P.reversed(), tol=cfg.tol) if a.reciprocal else find_roots(P, tol=cfg.tol)
    _emit(cfg, {"poly": P.to_json(), "reciprocal": a.reciprocal, "roots": [[z.real, z.imag] for z in roots], "moduli": [abs(z) for z in roots]})
    return 0


COMMANDS = {
    "count": cmd_count,
    "artin": cmd_artin,
    "invariants": cmd_invariants,
    "zeta2g2": cmd_zeta2g2,
    "euler": cmd_euler,
    "lattice": cmd_lattice,
    "roots": cmd_roots,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--budget", type=int, default=2**26, help="enumeration cap on q^m")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", type=Path)
    common.add_argument("--report", type=Path)
    common.add_argument("--force", action="store_true")

    parser = argparse.ArgumentParser(prog="nazeta", description="Non-abelian zeta functions of curves and lattices.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("count", parents=[common], help="point counts over F_{q^m}")
    p.add_argument("--curve", required=True)
    p.add_argument("--degrees", default="1..2")

    p = sub.add_parser("artin", parents=[common], help="rank-1 zeta numerator")
    p.add_argument("--curve", required=True)

    p = sub.add_parser("invariants", parents=[common], help="alpha/beta table and numerator")
    p.add_argument("--curve", required=True)
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--gamma2", choices=("prop33", "mass_count"), default="prop33")

    p = sub.add_parser("zeta2g2", parents=[common], help="rank-2 genus-2 zeta with checks")
    p.add_argument("--curve", required=True)
    p.add_argument("--gamma2", choices=("prop33", "mass_count"), default="prop33")

    p = sub.add_parser("euler", parents=[common], help="truncated Euler product over good primes")
    p.add_argument("--curve", required=True)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--xmax", type=int, default=500)
    p.add_argument("--s", default="5.5+0i")
    p.add_argument("--scan", help="comma separated s values; ignores the abscissa")

    p = sub.add_parser("lattice", parents=[common], help="rank-2 lattice zeta")
    p.add_argument("--op", choices=("xi", "epstein", "h0", "area", "residue", "scan"), default="xi")
    p.add_argument("--s", default="2+0i")
    p.add_argument("--tau", default="0+1i")
    p.add_argument("--method", choices=("theta", "direct"), default="theta")
    p.add_argument("--trange", default="0:20")
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--refine", type=int, default=0)

    p = sub.add_parser("roots", parents=[common], help="complex roots of a polynomial")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly", help='JSON list of coefficients, e.g. \'["1","0","9"]\'')
    g.add_argument("--numerator", help="JSON file with a numerator field")
    p.add_argument("--reciprocal", action="store_true")
    return parser


def dispatch(cfg: RunConfig) -> int:
    return COMMANDS[cfg.subcommand](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            args.subcommand, args, args.tol, args.budget, args.threads, args.out, args.report, args.force
        )
        return dispatch(cfg)
    except NazetaError as exc:
        print(f"nazeta: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
