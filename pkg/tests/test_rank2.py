import warnings
from fractions import Fraction

import pytest

from conftest import curve
from nazeta.artin import ArtinZeta, class_number, zeta_value
from nazeta.core import extend_alpha, extend_beta
from nazeta.curves import weierstrass_count
from nazeta.errors import InputError
from nazeta.exact import Poly
from nazeta.rank2 import (
    WEIERSTRASS_FLAG,
    Rank2Genus2Input,
    assemble_rank2_genus2,
    beta2_closed_lemma,
    beta2_dr,
    beta_discrepancy,
    gamma2g2,
    mass_count_beta,
    mass_count_gamma,
    rank2_checks,
)

SWEEP = [3, 11, 13, 31, 41]


def inp_for(q, f=(1, 0, 0, 0, 0, 1)):
    C = curve(q, f)
    return Rank2Genus2Input.from_zeta(ArtinZeta.from_curve(C), weierstrass_count(C))


@pytest.fixture(scope="module")
def results():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return {q: assemble_rank2_genus2(inp_for(q)) for q in SWEEP}


def test_inputs():
    i3, i11 = inp_for(3), inp_for(11)
    assert (i3.N_1, i3.h, i3.w_count) == (4, 10, 2)
    assert (i11.N_1, i11.h, i11.w_count) == (8, 80, 6)
    with pytest.raises(InputError):
        Rank2Genus2Input(i3.z, 5, 10)
    with pytest.raises(InputError):
        Rank2Genus2Input(i3.z, 4, 11)
    with pytest.raises(InputError):
        Rank2Genus2Input(ArtinZeta(3, 1, Poly([1, 0, 3])), 4, 4)


def test_frozen_numerators(results):
    # values computed by this pipeline and cross-checked by the Taylor/gamma identities
    for q, a in {3: (15, 40, Fraction(11, 2)), 11: (88, 960, Fraction(1159, 10)), 41: (2542, 104160, Fraction(237579, 40))}.items():
        P = results[q].zeta.numerator
        assert (P[0], P[1], P[2]) == a
        assert P.degree == 8


def test_gamma_closed_forms():
    z = ArtinZeta(5, 2, Poly([1, 1, 3, 5, 25]))
    inp = Rank2Genus2Input.from_zeta(z)
    H = inp.h
    assert gamma2g2(inp, 0) == Fraction(5 * H, 4)
    assert gamma2g2(inp, 1) == 6 * H
    with pytest.raises(InputError):
        gamma2g2(inp, 3)


def test_gamma2_verbatim_f11():
    inp = inp_for(11)
    q, h, N1 = Fraction(11), 80, 8
    expected = (h - 12) * (q**3 + 2 * q - 3 + N1) / (q - 1) + q * (q**3 - 2 + N1) / (q - 1) + (q**3 + 2 * q**2 - 10 * q + 5) / (q - 1)
    assert gamma2g2(inp, 2) == expected


@pytest.mark.parametrize("q", SWEEP)
def test_beta_structure(q):
    inp = inp_for(q)
    qq, h = Fraction(q), Fraction(inp.h)
    first = qq**3 / (qq - 1) * zeta_value(inp.z, 2) * h
    for d in (0, 1):
        b = beta2_dr(inp, d)
        assert b > 0
        assert b == first - qq ** (d + 1) * h * h / ((qq - 1) ** 2 * (qq * qq - 1))
        assert beta2_closed_lemma(inp, d, 2) == b
        # exponent readings differ only in the power of h on the second term
        gap3 = b - beta2_closed_lemma(inp, d, 3)
        gap4 = b - beta2_closed_lemma(inp, d, 4)
        assert gap4 == gap3 * (h + 1) and gap3 == (h - 1) * (first - b)
    assert (first - beta2_dr(inp, 1)) == q * (first - beta2_dr(inp, 0))


def test_beta_mass_count_any_genus():
    z = ArtinZeta.from_curve(curve(3, (1, 1, 0, 0, 0, 0, 0, 1)))
    b0, b1 = mass_count_beta(z, 0), mass_count_beta(z, 1)
    assert 0 < b0 and 0 < b1
    assert b0 / class_number(z) < Fraction(3) ** 6 * zeta_value(z, 2) / 2


@pytest.mark.parametrize("q", SWEEP)
def test_checks_all_pass(results, q):
    rows = rank2_checks(results[q])
    assert [c.name for c in rows if c.status == "fail"] == []
    assert {c.status for c in rows if "exp3" in c.name or "exp4" in c.name} == {"info"}


def test_discrepancy_rows_state_factor():
    rows = {c.name: c for c in beta_discrepancy(inp_for(11))}
    assert rows["beta0_closed_exp2_vs_dr"].status == "pass"
    assert "h^1 = 80" in rows["beta0_closed_exp3_vs_dr"].tolerance
    assert "h^2 = 6400" in rows["beta1_closed_exp4_vs_dr"].tolerance


def test_weierstrass_flag():
    with pytest.warns(UserWarning, match="Weierstrass"):
        res = assemble_rank2_genus2(inp_for(3))
    assert WEIERSTRASS_FLAG in res.flags
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert assemble_rank2_genus2(inp_for(11)).flags == ()


def test_mass_count_gamma_diagnostic():
    inp = inp_for(11)
    q, h, N1 = Fraction(11), Fraction(80), 8
    assert mass_count_gamma(inp.z, 0) == gamma2g2(inp, 0)
    assert mass_count_gamma(inp.z, 1) == gamma2g2(inp, 1)
    g2 = mass_count_gamma(inp.z, 2)
    assert g2 == h * (q**3 + q * N1 - 1) / (q - 1)
    assert g2 - gamma2g2(inp, 2) == h * (N1 - 2) + (11 * q + N1 - 8) / (q - 1)
    alt = assemble_rank2_genus2(inp, gamma2_source="mass_count")
    assert alt.gammas[2] == g2
    with pytest.raises(InputError):
        assemble_rank2_genus2(inp, gamma2_source="other")


def test_other_curve_f5():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = assemble_rank2_genus2(inp_for(5, (0, 1, 0, 0, 0, 1)))
    assert [c.name for c in rank2_checks(res) if c.status == "fail"] == []


def test_asymptotic_ratios_bounded(results):
    beta_r, gam_r, alpha_r = [], [], []
    for q in SWEEP:
        t = results[q].table
        beta_r.append(max(extend_beta(t, d) for d in (0, 1)) / q**4)
        gam_r.append(Fraction(q) / results[q].gammas[0])
        alpha_r.append(max(float(extend_alpha(t, d)) / q ** (d / 2 + 6) for d in range(5)))
    assert max(beta_r) < 3 and max(gam_r) < 1 and max(alpha_r) < 3
