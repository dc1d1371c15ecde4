"""Truncated Euler products of rank-r zetas of a curve over Q.

Local factors are normalized numerators P(t)/P(0) at good primes. They are
expensive for r = 2 (counts over F_{p^2}), so they live in a JSON-lines
store keyed by a fingerprint of the curve.
"""
from __future__ import annotations

import cmath
import hashlib
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from sympy import primerange

from .artin import ArtinZeta
from .curves import HyperellipticCurve
from .errors import ConsistencyError, ConvergenceError, InputError
from .exact import Poly, discriminant
from .field import make_field
from .rank2 import Rank2Genus2Input, assemble_rank2_genus2
from .report import Check, atomic_write, compare


@dataclass(frozen=True)
class IntegerCurve:
    f_coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = list(int(c) for c in self.f_coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) - 1 < 5 or (len(cs) - 1) % 2 == 0:
            raise InputError("f must have odd degree >= 5")
        object.__setattr__(self, "f_coeffs", tuple(cs))
        if self.disc == 0:
            raise InputError("f is not squarefree (zero discriminant)")

    @property
    def genus(self) -> int:
        return (len(self.f_coeffs) - 2) // 2

    @property
    def disc(self) -> int:
        return int(discriminant(Poly(self.f_coeffs)))

    @property
    def leading(self) -> int:
        return self.f_coeffs[-1]

    def reduce(self, p: int) -> HyperellipticCurve:
        return HyperellipticCurve(make_field(p), tuple(c % p for c in self.f_coeffs))

    @classmethod
    def from_json(cls, d: dict) -> "IntegerCurve":
        return cls(tuple(int(c) for c in d["f"]))


def good_primes(c: IntegerCurve, X: int) -> list[int]:
    if X < 3:
        raise InputError("X must be >= 3")
    bad = c.disc * c.leading
    return [p for p in primerange(3, X + 1) if bad % p]


def abscissa(r: int, g: int) -> int:
    return 1 + g + (r * r - r) * (g - 1)


@dataclass(frozen=True)
class LocalFactor:
    p: int
    poly: Poly
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.poly[0] != 1:
            raise ConsistencyError("local factor must have constant term 1")

    def __call__(self, s: complex) -> complex:
        t = cmath.exp(-s * cmath.log(self.p))
        return self.poly(complex(t))

    def to_json(self) -> dict:
        d = {"p": self.p, "coeffs": self.poly.to_json()}
        if self.flags:
            d["flags"] = list(self.flags)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "LocalFactor":
        return cls(int(d["p"]), Poly.from_json(d["coeffs"]), tuple(d.get("flags", ())))


def local_factor(c: IntegerCurve, p: int, r: int, **count_kw) -> LocalFactor:
    if (c.disc * c.leading) % p == 0 or p == 2:
        raise InputError("bad reduction")
    curve = c.reduce(p)
    z = ArtinZeta.from_curve(curve, **count_kw)
    if r == 1:
        return LocalFactor(p, z.numerator)
    if r == 2 and c.genus == 2:
        from .curves import weierstrass_count

        res = assemble_rank2_genus2(Rank2Genus2Input.from_zeta(z))
        flags = ("formula assumes 6 rational Weierstrass points",) if weierstrass_count(curve) != 6 else ()
        P = res.zeta.numerator
        return LocalFactor(p, Poly([a / P[0] for a in P]), flags)
    raise InputError("local factors are available for r = 1, or r = 2 with genus 2")


def fingerprint(c: IntegerCurve, r: int) -> str:
    blob = json.dumps({"f": list(c.f_coeffs), "r": r}, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class LocalFactorStore:
    """p -> LocalFactor; optionally persisted as JSON lines (header first)."""

    def __init__(self, curve: IntegerCurve, r: int, path: str | Path | None = None):
        self.curve = curve
        self.r = r
        self.path = Path(path) if path else None
        self.fingerprint = fingerprint(curve, r)
        self._factors: dict[int, LocalFactor] = {}
        self._lock = threading.Lock()
        if self.path and self.path.exists():
            self._load()

    def _load(self):
        lines = self.path.read_text().splitlines()
        if not lines:
            return
        head = json.loads(lines[0])
        if head.get("fingerprint") != self.fingerprint:
            raise InputError("store fingerprint does not match this curve and rank")
        for line in lines[1:]:
            if line.strip():
                lf = LocalFactor.from_json(json.loads(line))
                self._factors[lf.p] = lf

    def __contains__(self, p: int) -> bool:
        return p in self._factors

    def __len__(self):
        return len(self._factors)

    def get(self, p: int) -> LocalFactor:
        try:
            return self._factors[p]
        except KeyError:
            raise InputError(f"incomplete store: no factor for p={p}") from None

    def put(self, lf: LocalFactor):
        with self._lock:
            old = self._factors.get(lf.p)
            if old is not None and old.poly != lf.poly:
                raise ConsistencyError(f"store already holds a different factor for p={lf.p}")
            self._factors[lf.p] = lf

    def text(self) -> str:
        head = {"fingerprint": self.fingerprint, "f": list(self.curve.f_coeffs), "r": self.r, "genus": self.curve.genus}
        rows = [json.dumps(head, sort_keys=True)]
        rows += [json.dumps(self._factors[p].to_json(), sort_keys=True) for p in sorted(self._factors)]
        return "\n".join(rows) + "\n"

    def flush(self):
        if self.path:
            with self._lock:
                atomic_write(self.path, self.text())


def fill_store(store: LocalFactorStore, X: int, workers: int = 1, **count_kw) -> int:
    """Compute missing factors for good primes <= X; returns how many were added."""
    todo = [p for p in good_primes(store.curve, X) if p not in store]

    def work(p):
        store.put(local_factor(store.curve, p, store.r, **count_kw))

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            list(ex.map(work, todo))
    else:
        for p in todo:
            work(p)
    store.flush()
    return len(todo)


@dataclass(frozen=True)
class EulerResult:
    value: complex
    checkpoints: tuple[tuple[int, complex], ...]
    deltas: tuple[float, ...]
    n_primes: int
    flags: tuple[str, ...] = field(default=())


def truncated_product(store: LocalFactorStore, s: complex, X: int, force: bool = False) -> EulerResult:
    """prod_{p <= X good} 1 / P~_p(p^-s), with partial values at X/4, X/2, X."""
    s = complex(s)
    a = abscissa(store.r, store.curve.genus)
    if s.real < a and not force:
        raise InputError(f"Re(s) = {s.real} is below the convergence abscissa {a}; use force")
    marks = sorted({max(X // 4, 2), max(X // 2, 2), X})
    primes = good_primes(store.curve, X) if X >= 3 else []
    value = 1 + 0j
    checkpoints = []
    flags = set()
    mi = 0
    for p in primes:
        while mi < len(marks) and p > marks[mi]:
            checkpoints.append((marks[mi], value))
            mi += 1
        lf = store.get(p)
        v = lf(s)
        if abs(v) < 1e-15:
            raise ConvergenceError(f"local zero hit at p={p}")
        value /= v
        flags.update(lf.flags)
    while mi < len(marks):
        checkpoints.append((marks[mi], value))
        mi += 1
    deltas = tuple(abs(checkpoints[i + 1][1] - checkpoints[i][1]) for i in range(len(checkpoints) - 1))
    return EulerResult(value, tuple(checkpoints), deltas, len(primes), tuple(sorted(flags)))


def scan(store: LocalFactorStore, s_values, X: int) -> list[tuple[complex, complex]]:
    """Exploratory table of truncated products, ignoring the abscissa."""
    return [(complex(s), truncated_product(store, s, X, force=True).value) for s in s_values]


# elliptic rank-2 product


def elliptic_rank2_factor(p: int) -> Poly:
    return Poly([1, p - 1, 2 * p - 4, p * p - p, p * p])


def elliptic_a(p: int) -> Poly:
    return Poly([1, p - 2]) * Poly([1, 1])


def elliptic_b(p: int) -> Poly:
    return Poly([p - 2, p]) * Poly([1, p])


def elliptic_identities_check(p: int) -> list[Check]:
    a_p, b_p = elliptic_a(p), elliptic_b(p)
    a_expanded = Poly([1, p - 1, p - 2])
    b_expanded = Poly([p - 2, p * p - p, p * p])
    dual = a_p.reversed(2).scale_var(p)  # p^2 t^2 a_p(1/(p t))
    t2 = Poly.monomial(2)
    return [
        compare(f"a_factorization_p{p}", a_p, a_expanded),
        compare(f"b_factorization_p{p}", b_p, b_expanded),
        compare(f"a_b_duality_p{p}", dual, b_p),
        compare(f"factor_split_p{p}", elliptic_rank2_factor(p), a_p + t2 * b_p),
    ]

