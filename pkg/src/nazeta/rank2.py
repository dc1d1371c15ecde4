"""Rank-2 zeta of genus-2 curves from explicit beta and gamma invariants."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .artin import ArtinZeta, class_number, divisor_count, weil_defects, zeta_value
from .core import (
    InvariantTable,
    NonAbelianZeta,
    assemble_Z,
    build_zeta,
    clifford_check,
    gamma,
    siegel_mass,
)
from .errors import InputError
from .exact import functional_dual, series_expand
from .report import Check, compare

WEIERSTRASS_FLAG = "formula assumes 6 rational Weierstrass points"
GAMMA2_SOURCES = ("prop33", "mass_count")


@dataclass(frozen=True)
class Rank2Genus2Input:
    z: ArtinZeta
    N_1: int
    h: int
    w_count: int | None = None

    def __post_init__(self):
        if self.z.g != 2:
            raise InputError("rank2-genus2 needs a genus-2 zeta")
        if self.N_1 < 1 or self.h < 1:
            raise InputError("N_1 and h must be positive")
        if Fraction(self.h) != class_number(self.z):
            raise InputError("h does not match the zeta numerator")
        from_roots = self.z.q + 1 - sum(self.z.roots).real
        if abs(from_roots - self.N_1) > 1e-6:
            raise InputError(f"N_1 = {self.N_1} disagrees with q + 1 - sum(omega) = {from_roots}")

    @property
    def q(self) -> int:
        return self.z.q

    @classmethod
    def from_zeta(cls, z: ArtinZeta, w_count: int | None = None) -> "Rank2Genus2Input":
        return cls(z, int(divisor_count(z, 1)), int(class_number(z)), w_count)

    @classmethod
    def from_curve(cls, curve, **kw) -> "Rank2Genus2Input":
        from .curves import weierstrass_count

        return cls.from_zeta(ArtinZeta.from_curve(curve, **kw), weierstrass_count(curve))


def _gap_sum(q: int, d: int) -> Fraction:
    """sum of q^-gap over d1 > d2, d1 + d2 = d (gap = d1 - d2 = d mod 2 + 2n)."""
    q = Fraction(q)
    return 1 / (q * q - 1) if d % 2 == 0 else q / (q * q - 1)


def mass_count_beta(z: ArtinZeta, d: int) -> Fraction:
    """beta_{C,2}(d): Siegel mass minus the Harder-Narasimhan strata, any genus.

    Each unstable stratum L1 (+) L2 with gap = deg L1 - deg L2 > 0 carries mass
    q^{g-1-gap}/(q-1)^2; there are h^2 such pairs over all determinants of degree d.
    """
    q, g = Fraction(z.q), z.g
    h = class_number(z)
    total = h * q ** (3 * (g - 1)) * zeta_value(z, 2) / (q - 1)
    return total - h * h * q ** (g - 1) / (q - 1) ** 2 * _gap_sum(z.q, d)


def beta2_dr(inp: Rank2Genus2Input, d: int) -> Fraction:
    if d not in (0, 1):
        raise InputError("d must be 0 or 1")
    return mass_count_beta(inp.z, d)


def beta2_closed_lemma(inp: Rank2Genus2Input, d: int, exponent: int = 4) -> Fraction:
    """h q^3 zeta(2)/(q-1) - q^{d+1} h^exponent / ((q-1)^2 (q^2-1))."""
    if d not in (0, 1):
        raise InputError("d must be 0 or 1")
    if exponent not in (2, 3, 4):
        raise InputError("exponent must be 2, 3 or 4")
    q, h = Fraction(inp.q), Fraction(inp.h)
    first = q**3 / (q - 1) * zeta_value(inp.z, 2) * h
    return first - q ** (d + 1) / ((q - 1) ** 2 * (q * q - 1)) * h**exponent


def gamma2g2(inp: Rank2Genus2Input, d: int) -> Fraction:
    q, h, N1 = Fraction(inp.q), Fraction(inp.h), inp.N_1
    if d == 0:
        return q / (q - 1) * h
    if d == 1:
        return (q + 1) * h
    if d == 2:
        generic = (q**3 + 2 * q - 3 + N1) / (q - 1)
        diagonal = (q**3 - 2 + N1) / (q - 1)
        canonical = (q**3 + 2 * q**2 - 10 * q + 5) / (q - 1)
        return (h - (q + 1)) * generic + q * diagonal + canonical
    raise InputError("d must be 0, 1 or 2")


def mass_count_gamma(z: ArtinZeta, d: int) -> Fraction:
    """gamma_{C,2}(d) from counting strata with sections, for 0 <= d <= 2g - 2.

    h/(q-1) [ sum_{2e <= d} q^{d-2e+g-1} D_e - sum_{2e < d} q^e D_e ], D_e the
    number of effective divisors of degree e. Diagnostic only.
    """
    if not 0 <= d <= 2 * z.g - 2:
        raise InputError("d out of range")
    q, g = Fraction(z.q), z.g
    h = class_number(z)
    D = [divisor_count(z, e) for e in range(d // 2 + 1)]
    plus = sum(q ** (d - 2 * e + g - 1) * D[e] for e in range(d // 2 + 1))
    minus = sum(q**e * D[e] for e in range(d // 2 + 1) if 2 * e < d)
    return h / (q - 1) * (plus - minus)


@dataclass(frozen=True)
class Rank2Genus2Result:
    inp: Rank2Genus2Input
    table: InvariantTable
    zeta: NonAbelianZeta
    gammas: tuple[Fraction, Fraction, Fraction]
    betas: tuple[Fraction, Fraction]
    flags: tuple[str, ...] = field(default=())


def assemble_rank2_genus2(inp: Rank2Genus2Input, gamma2_source: str = "prop33") -> Rank2Genus2Result:
    if gamma2_source not in GAMMA2_SOURCES:
        raise InputError(f"gamma2_source must be one of {GAMMA2_SOURCES}")
    flags = []
    if inp.w_count is not None and inp.w_count != 6:
        warnings.warn(f"{inp.w_count} rational Weierstrass points; {WEIERSTRASS_FLAG}", stacklevel=2)
        flags.append(WEIERSTRASS_FLAG)
    b0, b1 = beta2_dr(inp, 0), beta2_dr(inp, 1)
    g0, g1 = gamma2g2(inp, 0), gamma2g2(inp, 1)
    g2 = gamma2g2(inp, 2) if gamma2_source == "prop33" else mass_count_gamma(inp.z, 2)
    table = InvariantTable(2, inp.q, 2, (g0 + b0, g1 + b1, g2 + b0), (b0, b1))
    zeta = build_zeta(table)
    return Rank2Genus2Result(inp, table, zeta, (g0, g1, g2), (b0, b1), tuple(flags))


def roots_dual_defect(zeta: NonAbelianZeta) -> float:
    """Largest distance from q/omega to the nearest root omega'."""
    ws = zeta.roots()
    return max(min(abs(zeta.q / w - v) for v in ws) for w in ws)


def beta_discrepancy(inp: Rank2Genus2Input) -> list[Check]:
    """Compare the mass-count beta with the closed form at each exponent.

    The exponent-2 row is a real check; the exponent 3 and 4 rows are
    informational and carry the exact ratio of the second terms.
    """
    out = []
    h = Fraction(inp.h)
    for d in (0, 1):
        ref = beta2_dr(inp, d)
        for e in (2, 3, 4):
            val = beta2_closed_lemma(inp, d, e)
            if e == 2:
                out.append(compare(f"beta{d}_closed_exp2_vs_dr", val, ref))
            else:
                ratio = (h**e) / (h * h)
                out.append(
                    Check(
                        f"beta{d}_closed_exp{e}_vs_dr",
                        val == ref,
                        val,
                        ref,
                        f"second-term ratio h^{e - 2} = {ratio}",
                        status_override="info",
                    )
                )
    return out


def rank2_checks(res: Rank2Genus2Result, tol: float = 1e-6) -> list[Check]:
    inp, P, tbl = res.inp, res.zeta.numerator, res.table
    q = inp.q
    out = [
        compare("degree_is_8", P.degree, 8),
        Check("functional_dual_fixed", functional_dual(P, q, 8) == P),
        compare("a0_equals_gamma0", P[0], res.gammas[0]),
        compare("roots_q_over_omega", roots_dual_defect(res.zeta), 0.0, tol),
        compare("artin_weil_bound", max(weil_defects(inp.z)), 0.0, tol),
        compare("N1_from_roots", inp.q + 1 - sum(inp.z.roots).real, float(inp.N_1), tol),
    ]
    s = series_expand(assemble_Z(res.zeta), 2)
    for d in range(3):
        out.append(compare(f"taylor_t{d}_equals_gamma{d}", s[d], res.gammas[d]))
        out.append(compare(f"table_gamma{d}", gamma(tbl, d), res.gammas[d]))
    h = Fraction(inp.h)
    out.append(compare("gamma0_closed", res.gammas[0], Fraction(q, q - 1) * h))
    out.append(compare("gamma1_closed", res.gammas[1], (q + 1) * h))
    out.extend(clifford_check(tbl, inp.z))
    out.extend(beta_discrepancy(inp))
    out.append(Check("siegel_mass", True, siegel_mass(inp.z, 2), None, status_override="info"))
    return out
