"""Odd-degree hyperelliptic curves y^2 = f(x) and brute-force point counts."""
from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConsistencyError, InputError
from .exact import Poly
from .field import FieldSpec, element, embed, embedding, make_field

COUNT_BUDGET = 2**26
CHUNK = 1 << 16


def _trim(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    while rows and not any(rows[-1]):
        rows = rows[:-1]
    return rows


def _poly_gcd_is_one(f: list[tuple[int, ...]], g: list[tuple[int, ...]], F: FieldSpec) -> bool:
    """Euclid over F_q on coefficient rows; True iff gcd is a nonzero constant."""

    def mul(a, b):
        return tuple(int(c) for c in F.vmul(np.array([a]), np.array([b]))[0])

    def sub(a, b):
        return tuple((x - y) % F.p for x, y in zip(a, b))

    def inv(a):
        return tuple(int(c) for c in F.vpow(np.array([a]), F.q - 2)[0])

    a, b = _trim(list(f)), _trim(list(g))
    while b:
        lead = inv(b[-1])
        a = list(a)
        while len(a) >= len(b):
            c = mul(a[-1], lead)
            shift = len(a) - len(b)
            for j, bc in enumerate(b):
                a[shift + j] = sub(a[shift + j], mul(c, bc))
            a = _trim(a)
        a, b = b, a
    return len(a) == 1


@dataclass(frozen=True)
class HyperellipticCurve:
    base: FieldSpec
    f_coeffs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = _trim([element(self.base, c).coeffs for c in self.f_coeffs])
        object.__setattr__(self, "f_coeffs", tuple(rows))
        deg = len(rows) - 1
        if deg < 5 or deg % 2 == 0:
            raise InputError("f must have odd degree >= 5")
        p = self.base.p
        df = [tuple((i * c) % p for c in row) for i, row in enumerate(rows)][1:]
        if not _poly_gcd_is_one(list(rows), df, self.base):
            raise InputError("f is not squarefree (gcd(f, f') != 1)")

    @property
    def degree(self) -> int:
        return len(self.f_coeffs) - 1

    @property
    def genus(self) -> int:
        return (self.degree - 1) // 2

    @property
    def q(self) -> int:
        return self.base.q

    @classmethod
    def from_json(cls, d: dict) -> "HyperellipticCurve":
        try:
            p, k = int(d["p"]), int(d.get("k", 1))
            f = d["f"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad curve description: {exc}") from exc
        base = FieldSpec(p, k, tuple(d["modulus"])) if "modulus" in d else make_field(p, k)
        return cls(base, tuple(c if isinstance(c, int) else tuple(c) for c in f))

    def to_json(self) -> dict:
        f = [r[0] if self.base.k == 1 else list(r) for r in self.f_coeffs]
        return {"p": self.base.p, "k": self.base.k, "f": f}


@dataclass(frozen=True)
class CountVector:
    q: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if any(n < 1 for n in self.counts):
            raise InputError("point counts must be >= 1")


@functools.lru_cache(maxsize=8)
def _square_table(big: FieldSpec) -> np.ndarray:
    """sq[i] = number of y with y^2 equal to the element labelled i."""
    sq = np.zeros(big.q, dtype=np.int64)
    for start in range(0, big.q, CHUNK):
        ys = big.elements(start, min(start + CHUNK, big.q))
        sq += np.bincount(big.vindex(big.vmul(ys, ys)), minlength=big.q)
    return sq


@functools.lru_cache(maxsize=32)
def _extension(curve: HyperellipticCurve, m: int):
    base = curve.base
    big = make_field(base.p, base.k * m, budget=2**62)
    emb = embedding(base, big)
    f_big = embed(np.array(curve.f_coeffs), emb, base.p)
    return big, f_big


def _eval_f(big: FieldSpec, f_big: np.ndarray, xs: np.ndarray) -> np.ndarray:
    val = np.repeat(f_big[-1:], len(xs), axis=0)
    for c in f_big[-2::-1]:
        val = big.vadd(big.vmul(val, xs), np.broadcast_to(c, val.shape))
    return val


def count_affine(curve: HyperellipticCurve, m: int, start: int, stop: int) -> int:
    """Affine points with x-label in [start, stop) over F_{q^m}; partial sums add."""
    big, f_big = _extension(curve, m)
    sq = _square_table(big)
    total = 0
    for lo in range(start, stop, CHUNK):
        xs = big.elements(lo, min(lo + CHUNK, stop))
        total += int(sq[big.vindex(_eval_f(big, f_big, xs))].sum())
    return total


def count_points(curve: HyperellipticCurve, m: int, budget: int = COUNT_BUDGET, workers: int = 1) -> int:
    """#C(F_{q^m}) including the single point at infinity."""
    if m < 1:
        raise InputError("extension degree must be >= 1")
    Q = curve.q**m
    if Q > budget:
        raise InputError(f"field too large: q^m = {Q} exceeds budget {budget}")
    if workers <= 1 or Q <= CHUNK:
        return 1 + count_affine(curve, m, 0, Q)
    _square_table(_extension(curve, m)[0])  # build once before fanning out
    step = -(-Q // workers)
    with ThreadPoolExecutor(workers) as ex:
        parts = ex.map(lambda a: count_affine(curve, m, a, min(a + step, Q)), range(0, Q, step))
        return 1 + sum(parts)


def count_vector(curve: HyperellipticCurve, n: int | None = None, **kw) -> CountVector:
    n = curve.genus if n is None else n
    return CountVector(curve.q, tuple(count_points(curve, m, **kw) for m in range(1, n + 1)))


def weierstrass_count(curve: HyperellipticCurve) -> int:
    """Rational Weierstrass points: roots of f in F_q plus the point at infinity."""
    if curve.genus != 2:
        raise InputError("weierstrass_count is defined for genus 2")
    big, f_big = _extension(curve, 1)
    xs = big.elements()
    vals = _eval_f(big, f_big, xs)
    return 1 + int((~vals.any(axis=1)).sum())


def zeta_from_counts(cv: CountVector, g: int) -> Poly:
    """Numerator of Z_C(t) from N_1..N_g via Newton's identities and the symmetry."""
    if len(cv.counts) < g:
        raise InputError("need at least g point counts")
    q = cv.q
    S = [None] + [cv.counts[m - 1] - (q**m + 1) for m in range(1, g + 1)]
    c = [Fraction(1)]
    for i in range(1, g + 1):
        ci = sum((S[m] * c[i - m] for m in range(1, i + 1)), Fraction(0)) / i
        if ci.denominator != 1:
            raise ConsistencyError("inconsistent counts")
        c.append(ci)
    full = c + [Fraction(0)] * g
    for i in range(g):
        full[2 * g - i] = q ** (g - i) * c[i]
    return Poly(full)
