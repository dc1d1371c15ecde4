"""Exact rationals, dense polynomials, rational functions and truncated series.

Rationals are ``fractions.Fraction`` (always reduced, denominator positive).
Every container here is immutable, so values can be shared across threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from mpmath.ctx_mp import MPContext

from .errors import ConvergenceError, InputError

BigRational = Fraction


def to_q(x) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise InputError(f"cannot read {x!r} as an exact rational")


def q_str(x: Fraction) -> str:
    x = to_q(x)
    return f"{x.numerator}/{x.denominator}"


def _strip(cs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


@dataclass(frozen=True)
class Poly:
    """Dense polynomial in t; ``coeffs[i]`` is the coefficient of t**i."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip([to_q(c) for c in self.coeffs]))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __iter__(self):
        return iter(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self), len(other))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self or not other:
            return Poly()
        out = [Fraction(0)] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly((1,))
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (int, Fraction)) else _num(c, x))
        return acc

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def reversed(self, n: int | None = None) -> "Poly":
        """t**n * P(1/t); n defaults to the degree."""
        n = self.degree if n is None else n
        if self.degree > n:
            raise InputError("degree overflow")
        return Poly([self[n - i] for i in range(n + 1)])

    def scale_var(self, c) -> "Poly":
        """P(c*t)."""
        c = to_q(c)
        return Poly([a * c**i for i, a in enumerate(self.coeffs)])

    def to_json(self) -> list[str]:
        return [q_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Iterable) -> "Poly":
        return cls([to_q(c) for c in data])

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"


def _num(c: Fraction, like):
    """Convert an exact coefficient into the numeric type of ``like``."""
    if isinstance(like, (float, complex)):
        return float(c)
    try:
        return type(like)(c.numerator) / c.denominator
    except TypeError:
        return float(c)


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly((to_q(x),))


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise InputError(f"unknown polynomial op {op!r}")


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise InputError("division by zero")
    rem = list(a.coeffs)
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b.coeffs[-1]
    for k in range(len(quo) - 1, -1, -1):
        c = rem[k + b.degree] / lead
        quo[k] = c
        if c:
            for j, bc in enumerate(b.coeffs):
                rem[k + j] -= c * bc
    return Poly(quo), Poly(rem)


@dataclass(frozen=True, eq=False)
class RationalFn:
    num: Poly
    den: Poly

    def __post_init__(self):
        if not self.den:
            raise InputError("division by zero")

    def __eq__(self, other):
        if not isinstance(other, RationalFn):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RationalFn is compared by cross-multiplication and is unhashable")

    def __call__(self, x):
        return self.num(x) / self.den(x)


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple[Fraction, ...]
    order: int

    def __post_init__(self):
        cs = tuple(to_q(c) for c in self.coeffs)
        if len(cs) != self.order + 1:
            raise InputError("series length must be order + 1")
        object.__setattr__(self, "coeffs", cs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, m: int) -> "TruncatedSeries":
        if m > self.order:
            raise InputError("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs[: m + 1], m)

    def __mul__(self, other: "TruncatedSeries"):
        n = min(self.order, other.order)
        out = [sum((self[k] * other[m - k] for k in range(m + 1)), Fraction(0)) for m in range(n + 1)]
        return TruncatedSeries(out, n)


def series_expand(f: RationalFn, order: int) -> TruncatedSeries:
    """Maclaurin coefficients of num/den through t**order, by long division."""
    d0 = f.den[0]
    if d0 == 0:
        raise InputError("pole at origin")
    den = f.den.coeffs
    out: list[Fraction] = []
    for n in range(order + 1):
        acc = f.num[n]
        for k in range(1, min(n, len(den) - 1) + 1):
            acc -= den[k] * out[n - k]
        out.append(acc / d0)
    return TruncatedSeries(out, order)


def series_log(s: TruncatedSeries) -> TruncatedSeries:
    """log of a series with constant term 1 (constant term of the result is 0)."""
    if s[0] != 1:
        raise InputError("series_log needs constant term 1")
    w = s.coeffs
    lg = [Fraction(0)] * (s.order + 1)
    # m*l_m = m*w_m - sum_{k<m} k*l_k*w_{m-k}
    for m in range(1, s.order + 1):
        acc = m * w[m]
        for k in range(1, m):
            acc -= k * lg[k] * w[m - k]
        lg[m] = acc / m
    return TruncatedSeries(lg, s.order)


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    """exp of a series with zero constant term."""
    if s[0] != 0:
        raise InputError("series_exp needs constant term 0")
    e = [Fraction(1)] + [Fraction(0)] * s.order
    for m in range(1, s.order + 1):
        e[m] = sum((k * s[k] * e[m - k] for k in range(1, m + 1)), Fraction(0)) / m
    return TruncatedSeries(e, s.order)


def functional_dual(P: Poly, q: int, D: int) -> Poly:
    """q**(D/2) * t**D * P(1/(q t))."""
    if D % 2:
        raise InputError("D must be even")
    if q < 2:
        raise InputError("q must be at least 2")
    if P.degree > D:
        raise InputError("degree overflow")
    qq = Fraction(q)
    return Poly([P[D - i] * qq ** (i - D // 2) for i in range(D + 1)])


def _mp_ctx(dps: int) -> MPContext:
    # private context: the global mpmath one is not thread safe
    ctx = MPContext()
    ctx.dps = dps
    return ctx


def find_roots(P: Poly, tol: float = 1e-10, dps: int = 60) -> list[complex]:
    """All complex roots of P with multiplicity, checked against a residual bound."""
    if P.degree < 1:
        raise InputError("find_roots needs degree >= 1")
    last = None
    for attempt in range(4):
        ctx = _mp_ctx(dps * (attempt + 1))
        cs = [ctx.mpf(c.numerator) / c.denominator for c in reversed(P.coeffs)]
        try:
            zs = ctx.polyroots(cs, maxsteps=200 * (attempt + 1), extraprec=4 * ctx.prec)
        except ctx.NoConvergence as exc:
            last = exc
            continue
        if all(_residual_ok(ctx, cs, z, tol) for z in zs):
            return [complex(z) for z in zs]
        last = "residual"
    raise ConvergenceError(f"root refinement failed ({last})")


def _residual_ok(ctx, cs_desc, z, tol) -> bool:
    val = ctx.mpc(0)
    scale = ctx.mpf(0)
    az = abs(z)
    for c in cs_desc:
        val = val * z + c
        scale = scale * az + abs(c)
    return abs(val) <= tol * scale


def reciprocal_roots(P: Poly, tol: float = 1e-10) -> list[complex]:
    """Roots of the reversed polynomial: the omega with P(t) = P(0) prod (1 - omega t)."""
    if P[0] == 0:
        raise InputError("reciprocal roots need P(0) != 0")
    return find_roots(P.reversed(), tol)


def _det(rows: list[list[Fraction]]) -> Fraction:
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def resultant(a: Poly, b: Poly) -> Fraction:
    """Sylvester-matrix resultant."""
    m, n = a.degree, b.degree
    if m < 0 or n < 0:
        return Fraction(0)
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(a.coeffs)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(b.coeffs)):
            row[i + j] = c
        rows.append(row)
    return _det(rows)


def discriminant(P: Poly) -> Fraction:
    n = P.degree
    if n < 1:
        raise InputError("discriminant needs degree >= 1")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(P, P.derivative()) / P.coeffs[-1]
