"""Rank-one zeta of a curve: Z_C(t) = P(t) / ((1 - t)(1 - q t))."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .exact import Poly, RationalFn, TruncatedSeries, reciprocal_roots, series_expand, series_log, to_q


def check_symmetry(P: Poly, q: int, half: int) -> bool:
    """a_{2n-i} == q^{n-i} a_i for the degree-2n numerator, n = half."""
    return P.degree <= 2 * half and all(P[2 * half - i] == Fraction(q) ** (half - i) * P[i] for i in range(half + 1))


@dataclass(frozen=True)
class ArtinZeta:
    q: int
    g: int
    numerator: Poly
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        P = self.numerator
        if P.degree != 2 * self.g:
            raise InputError(f"numerator must have degree 2g = {2 * self.g}")
        if P[0] != 1:
            raise InputError("numerator must satisfy P(0) = 1")
        if not check_symmetry(P, self.q, self.g):
            raise InputError("numerator violates the functional-equation symmetry")

    @classmethod
    def from_curve(cls, curve, **kw) -> "ArtinZeta":
        from .curves import count_vector, zeta_from_counts

        g = curve.genus
        return cls(curve.q, g, zeta_from_counts(count_vector(curve, g, **kw), g))

    @property
    def roots(self) -> list[complex]:
        """Reciprocal roots omega_i, computed once."""
        with self._lock:
            if "roots" not in self._cache:
                self._cache["roots"] = tuple(reciprocal_roots(self.numerator))
            return list(self._cache["roots"])

    def rational(self) -> RationalFn:
        return RationalFn(self.numerator, Poly((1, -1)) * Poly((1, -self.q)))

    def series(self, order: int) -> TruncatedSeries:
        return series_expand(self.rational(), order)

    def point_counts(self, n: int) -> list[int]:
        """N_1..N_n predicted from the numerator."""
        lg = series_log(series_expand(RationalFn(self.numerator, Poly((1,))), n))
        out = []
        for m in range(1, n + 1):
            v = self.q**m + 1 + m * lg[m]
            out.append(int(v) if v.denominator == 1 else v)
        return out

    def to_json(self) -> dict:
        return {"q": self.q, "g": self.g, "numerator": self.numerator.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "ArtinZeta":
        return cls(int(d["q"]), int(d["g"]), Poly.from_json(d["numerator"]))


def class_number(z: ArtinZeta) -> Fraction:
    return z.numerator(Fraction(1))


def zeta_value(z: ArtinZeta, n: int) -> Fraction:
    """zeta_C(n) = Z_C(q^-n), exact."""
    if n <= 1:
        raise InputError("at or beyond pole")
    q = z.q
    # multiply through by q^(2g n) and q^(2n - 1) to stay integral
    num = sum(to_q(c) * q ** (n * (2 * z.g - i)) for i, c in enumerate(z.numerator))
    den = Fraction(q) ** (2 * z.g * n - 2 * n + 1) * (q**n - 1) * (q ** (n - 1) - 1)
    return num / den


def divisor_count(z: ArtinZeta, d: int) -> Fraction:
    """Number of effective divisors of degree d."""
    if d < 0:
        raise InputError("degree must be nonnegative")
    return z.series(d)[d]


def weil_defects(z: ArtinZeta) -> list[float]:
    return [abs(abs(w) - z.q**0.5) for w in z.roots]
