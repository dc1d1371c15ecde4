"""Rank-r invariant tables, the numerator of Z_{C,r}, and the partial xi functions.

Notation: c = r(g-1) and D = r(2g-2) = 2c. The table stores alpha(0..c)
and beta(0..r-1); everything else follows from the extension rules.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .artin import ArtinZeta, check_symmetry, class_number, divisor_count, zeta_value
from .errors import ConsistencyError, InputError
from .exact import (
    Poly,
    RationalFn,
    TruncatedSeries,
    find_roots,
    functional_dual,
    q_str,
    series_expand,
    series_log,
    to_q,
)
from .report import Check, bound


@dataclass(frozen=True)
class InvariantTable:
    r: int
    q: int
    g: int
    alpha_core: tuple[Fraction, ...]
    beta_core: tuple[Fraction, ...]

    def __post_init__(self):
        if self.r < 1 or self.g < 2 or self.q < 2:
            raise InputError("need r >= 1, g >= 2, q >= 2")
        a = tuple(to_q(x) for x in self.alpha_core)
        b = tuple(to_q(x) for x in self.beta_core)
        if len(a) != self.c + 1 or len(b) != self.r:
            raise InputError(f"expected {self.c + 1} alpha and {self.r} beta values")
        if any(x <= 0 for x in a + b):
            raise InputError("invariants must be positive")
        if any(b[j] != b[(self.r - j) % self.r] for j in range(self.r)):
            raise InputError("beta violates beta(j) = beta(r - j)")
        object.__setattr__(self, "alpha_core", a)
        object.__setattr__(self, "beta_core", b)

    @property
    def c(self) -> int:
        return self.r * (self.g - 1)

    @property
    def D(self) -> int:
        return 2 * self.c

    @classmethod
    def rank_one(cls, z: ArtinZeta) -> "InvariantTable":
        """alpha(d) = #effective divisors of degree d + h/(q-1), beta = h/(q-1)."""
        b = class_number(z) / (z.q - 1)
        alpha = [divisor_count(z, d) + b for d in range(z.g)]
        return cls(1, z.q, z.g, tuple(alpha), (b,))

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "q": self.q,
            "g": self.g,
            "alpha": [q_str(x) for x in self.alpha_core],
            "beta": [q_str(x) for x in self.beta_core],
        }

    @classmethod
    def from_json(cls, d: dict) -> "InvariantTable":
        return cls(int(d["r"]), int(d["q"]), int(d["g"]), tuple(d["alpha"]), tuple(d["beta"]))


def extend_beta(tbl: InvariantTable, d: int) -> Fraction:
    return tbl.beta_core[abs(d) % tbl.r]


def extend_alpha(tbl: InvariantTable, d: int) -> Fraction:
    c, D, q = tbl.c, tbl.D, Fraction(tbl.q)
    if d < 0:
        return extend_beta(tbl, d)
    if d <= c:
        return tbl.alpha_core[d]
    if d <= D:
        return tbl.alpha_core[D - d] * q ** (d - c)
    return extend_beta(tbl, d) * q ** (d - c)


def gamma(tbl: InvariantTable, d: int) -> Fraction:
    return extend_alpha(tbl, d) - extend_beta(tbl, d)


def unified_coefficient(tbl: InvariantTable, i: int) -> Fraction:
    """a_i = A(i) - (q^r + 1) A(i - r) + q^r A(i - 2r), A = extended alpha."""
    A = lambda d: extend_alpha(tbl, d)  # noqa: E731
    qr = Fraction(tbl.q) ** tbl.r
    return A(i) - (qr + 1) * A(i - tbl.r) + qr * A(i - 2 * tbl.r)


def _case_branches(tbl: InvariantTable, i: int) -> list[tuple[str, Fraction]]:
    r, g = tbl.r, tbl.g
    qr = Fraction(tbl.q) ** r
    A = lambda d: extend_alpha(tbl, d)  # noqa: E731
    B = lambda d: extend_beta(tbl, d)  # noqa: E731
    out = []
    if 0 <= i <= r - 1:
        out.append(("low", A(i) - B(i)))
    if r <= i <= 2 * r - 1:
        out.append(("second", A(i) - (qr + 1) * A(i - r) + qr * B(i - r)))
    if 2 * r <= i <= r * (g - 1) - 1:
        out.append(("middle", A(i) - (qr + 1) * A(i - r) + qr * A(i - 2 * r)))
    if i == r * (g - 1):
        out.append(("centre", -(qr + 1) * A(r * (g - 2)) + qr * A(r * (g - 3)) + A(r * (g - 1))))
    if r * (g - 1) + 1 <= i <= r * g - 1:
        out.append(("upper", A(i) - (qr + 1) * A(i - r) + A(i - 2 * r) * qr))
    if i == r * g:
        out.append(("top", 2 * qr * A(r * (g - 2)) - (qr + 1) * A(r * (g - 1))))
    return out


def ugly_coefficients(tbl: InvariantTable) -> list[Fraction]:
    """a_0..a_{rg} by the case formula, cross-checked against the unified recurrence."""
    out = []
    for i in range(tbl.r * tbl.g + 1):
        u = unified_coefficient(tbl, i)
        branches = _case_branches(tbl, i)
        if not branches:
            raise ConsistencyError(f"ugly formula inconsistency: no case covers i={i}")
        for name, v in branches:
            if v != u:
                raise ConsistencyError(f"ugly formula inconsistency at i={i} ({name}: {v} != {u})")
        out.append(u)
    return out


def complete_by_fe(a: Sequence, r: int, q: int, g: int) -> Poly:
    """Fill a_{rg+1..2rg} from a_{2rg-i} = a_i q^{rg-i}."""
    n = r * g
    if len(a) != n + 1:
        raise InputError(f"need {n + 1} coefficients")
    a = [to_q(x) for x in a]
    full = a + [Fraction(0)] * n
    for i in range(n):
        full[2 * n - i] = a[i] * Fraction(q) ** (n - i)
    return Poly(full)


@dataclass(frozen=True)
class NonAbelianZeta:
    r: int
    q: int
    g: int
    numerator: Poly
    beta_core: tuple[Fraction, ...] = ()

    def __post_init__(self):
        n = self.r * self.g
        P = self.numerator
        if P[0] != 0 and P.degree != 2 * n:
            raise ConsistencyError(f"numerator degree {P.degree} != 2rg = {2 * n}")
        if not check_symmetry(P, self.q, n):
            raise ConsistencyError("numerator violates the functional equation")
        object.__setattr__(self, "beta_core", tuple(to_q(b) for b in self.beta_core))

    @property
    def degree(self) -> int:
        return 2 * self.r * self.g

    def roots(self, tol: float = 1e-10) -> list[complex]:
        return find_roots(self.numerator.reversed(self.degree), tol)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "q": self.q,
            "g": self.g,
            "numerator": self.numerator.to_json(),
            "beta": [q_str(b) for b in self.beta_core],
        }

    @classmethod
    def from_json(cls, d: dict) -> "NonAbelianZeta":
        return cls(int(d["r"]), int(d["q"]), int(d["g"]), Poly.from_json(d["numerator"]), tuple(d.get("beta", ())))


def build_zeta(tbl: InvariantTable) -> NonAbelianZeta:
    P = complete_by_fe(ugly_coefficients(tbl), tbl.r, tbl.q, tbl.g)
    if functional_dual(P, tbl.q, 2 * tbl.r * tbl.g) != P:
        raise ConsistencyError("completed numerator is not self-dual")
    return NonAbelianZeta(tbl.r, tbl.q, tbl.g, P, tbl.beta_core)


def z_denominator(r: int, q: int) -> Poly:
    return (Poly((1,)) - Poly.monomial(r)) * (Poly((1,)) - Poly.monomial(r, Fraction(q) ** r))


def assemble_Z(z: NonAbelianZeta) -> RationalFn:
    return RationalFn(z.numerator, z_denominator(z.r, z.q))


def assemble_Z_direct(tbl: InvariantTable, order: int) -> TruncatedSeries:
    """gamma(0..D) plus the beta tail sum_i beta(i) (q^{c+i+rn} - 1) t^{D+i+rn}."""
    c, D, r, q = tbl.c, tbl.D, tbl.r, tbl.q
    out = [gamma(tbl, d) if d <= D else Fraction(0) for d in range(order + 1)]
    for d in range(D + 1, order + 1):
        e = d - D  # = i + r n with 1 <= i <= r
        i = (e - 1) % r + 1
        out[d] = extend_beta(tbl, i) * (Fraction(q) ** (c + e) - 1)
    return TruncatedSeries(out, order)


@dataclass(frozen=True)
class CountingNumber:
    m: int
    exact: Fraction
    numeric: complex


def counting_numbers(z: NonAbelianZeta, m: int, rel_tol: float = 1e-6) -> CountingNumber:
    """N_{C,r}(m) exactly from log(Z/P(0)) and numerically from the reciprocal roots."""
    if m < 1:
        raise InputError("m must be >= 1")
    s = series_expand(assemble_Z(z), m)
    lg = series_log(TruncatedSeries([x / s[0] for x in s.coeffs], m))
    exact = m * lg[m]
    ws = z.roots()
    numeric = -sum(w**m for w in ws)
    if m % z.r == 0:
        numeric += z.r * (1 + float(z.q) ** m)
    scale = max(1.0, abs(float(exact)))
    if abs(numeric - float(exact)) > rel_tol * scale:
        raise ConsistencyError(f"counting number N({m}) mismatch: {exact} vs {numeric}")
    return CountingNumber(m, exact, complex(numeric))


def root_of_unity_aggregate(z: NonAbelianZeta, a: int, n_terms: int) -> list[complex]:
    """N(ma), m = 1..n_terms, read off log prod_{i=1}^a Z(zeta_a^i t) / P(0)^a numerically.

    The product is a series in T = t^a; its log coefficient at T^m times m is returned.
    """
    order = a * n_terms
    s = series_expand(assemble_Z(z), order)
    base = [complex(float(x / s[0])) for x in s.coeffs]
    prod = [1.0 + 0j] + [0j] * order
    for i in range(1, a + 1):
        w = cmath.exp(2j * math.pi * i / a)
        f = [base[k] * w**k for k in range(order + 1)]
        prod = [sum(prod[j] * f[k - j] for j in range(k + 1)) for k in range(order + 1)]
    lg = [0j] * (order + 1)
    for k in range(1, order + 1):
        acc = k * prod[k] - sum(j * lg[j] * prod[k - j] for j in range(1, k))
        lg[k] = acc / k
    return [m * lg[a * m] for m in range(1, n_terms + 1)]


# partial xi functions


@dataclass(frozen=True)
class PartialXiData:
    d_L: int
    masses: dict
    beta_L: Fraction

    def __post_init__(self):
        if to_q(self.beta_L) <= 0:
            raise InputError("beta_L must be positive")
        object.__setattr__(self, "beta_L", to_q(self.beta_L))
        object.__setattr__(self, "masses", {int(k): to_q(v) for k, v in self.masses.items()})


def _check_partial(dat: PartialXiData, r: int, g: int):
    c = r * (g - 1)
    D = 2 * c
    if not 0 <= dat.d_L <= c:
        raise InputError("d_L must lie in [0, r(g-1)]")
    allowed = {dat.d_L, D - dat.d_L}
    bad = [d for d in dat.masses if d not in allowed]
    if bad:
        raise InputError(f"masses keyed at degrees {bad} outside the class of L")


def partial_xi_bracket(d_L: int, r: int, q: int, g: int, s: complex) -> complex:
    """The four-term factor multiplying beta_L."""
    c = r * (g - 1)
    D = 2 * c
    lq = math.log(q)
    e = cmath.exp
    x = d_L - c
    dens = (e((s - 1) * D * lq) - 1, e(-s * D * lq) - 1)
    if min(abs(v) for v in dens) < 1e-12:
        raise InputError("evaluation at singularity")
    return (
        e((1 - s) * x * lq) / dens[0]
        + e(s * x * lq) / dens[1]
        + e((s - 1) * x * lq) / dens[0]
        + e(-s * x * lq) / dens[1]
    )


def evaluate_partial_xi(dat: PartialXiData, r: int, q: int, g: int, s: complex) -> complex:
    _check_partial(dat, r, g)
    c = r * (g - 1)
    lq = math.log(q)
    total = 0j
    for d, m in dat.masses.items():
        chi = d - c
        total += 0.5 * float(m) * (cmath.exp(-s * chi * lq) + cmath.exp((s - 1) * chi * lq))
    return total + partial_xi_bracket(dat.d_L, r, q, g, s) * float(dat.beta_L)


def residue_constant(r: int, q: int, g: int) -> float:
    """Res_{s=1} xi^L = beta_L * residue_constant; the residue at s=0 is its negative."""
    return 2.0 / (r * (2 * g - 2) * math.log(q))


def residue_at(f, s0: complex, eps: float = 1e-4) -> complex:
    """Simple-pole residue by the symmetric difference eps/2 (f(s0+eps) - f(s0-eps))."""
    return eps / 2 * (f(s0 + eps) - f(s0 - eps))


def beta_from_residue(dat: PartialXiData, r: int, q: int, g: int, at: int = 1) -> float:
    res = residue_at(lambda s: evaluate_partial_xi(dat, r, q, g, s), complex(at))
    sign = 1 if at == 1 else -1
    return sign * res.real / residue_constant(r, q, g)


# mass and Clifford bounds


def siegel_mass(z: ArtinZeta, r: int) -> Fraction:
    """Total mass of rank-r bundles with fixed determinant."""
    if r < 2:
        raise InputError("siegel_mass needs r >= 2")
    m = Fraction(z.q) ** ((r * r - 1) * (z.g - 1)) / (z.q - 1)
    for k in range(2, r + 1):
        m *= zeta_value(z, k)
    return m


def clifford_check(tbl: InvariantTable, z: ArtinZeta | None = None, prefix: str = "") -> list[Check]:
    """alpha(d)^2 <= q^{d+2r} beta(d)^2 on 0..D, plus 0 < beta(d)/h <= mass when z is given."""
    q = Fraction(tbl.q)
    out = []
    for d in range(tbl.D + 1):
        a, b = extend_alpha(tbl, d), extend_beta(tbl, d)
        out.append(bound(f"{prefix}clifford_d{d}", a * a, q ** (d + 2 * tbl.r) * b * b))
    if z is not None and tbl.r >= 2:
        h = class_number(z)
        mass = siegel_mass(z, tbl.r)
        for j, b in enumerate(tbl.beta_core):
            out.append(bound(f"{prefix}beta_positive_d{j}", Fraction(0), b / h, strict=True))
            out.append(bound(f"{prefix}beta_mass_d{j}", b / h, mass))
    return out
