import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from nazeta.artin import ArtinZeta
from nazeta.errors import ConsistencyError, ConvergenceError, InputError
from nazeta.euler import (
    IntegerCurve,
    LocalFactor,
    LocalFactorStore,
    abscissa,
    elliptic_identities_check,
    elliptic_rank2_factor,
    fill_store,
    fingerprint,
    good_primes,
    local_factor,
    scan,
    truncated_product,
)
from nazeta.exact import Poly

C = IntegerCurve((1, 0, 0, 0, 0, 1))


@pytest.fixture(scope="module")
def store_r1():
    st_ = LocalFactorStore(C, 1)
    fill_store(st_, 800, workers=4)
    return st_


@pytest.fixture(scope="module")
def store_r2():
    st_ = LocalFactorStore(C, 2)
    fill_store(st_, 120, workers=2)
    return st_


def test_discriminant_and_good_primes():
    x = sympy.Symbol("x")
    assert C.disc == sympy.discriminant(x**5 + 1, x) == 3125
    ps = good_primes(C, 50)
    assert ps == [p for p in sympy.primerange(3, 51) if p != 5]
    assert ps == sorted(set(ps))
    with pytest.raises(InputError):
        good_primes(C, 2)


def test_integer_curve_validation():
    with pytest.raises(InputError):
        IntegerCurve((0, 0, 0, 0, 0, 1))
    with pytest.raises(InputError):
        IntegerCurve((1, 0, 0, 0, 1))
    assert IntegerCurve.from_json({"f": [1, 0, 0, 0, 0, 1]}) == C
    assert abscissa(2, 2) == 5 and abscissa(1, 2) == 3


def test_local_factors():
    lf1 = local_factor(C, 3, 1)
    assert lf1.poly == Poly([1, 0, 0, 0, 9])
    lf2 = local_factor(C, 11, 2)
    assert lf2.poly[0] == 1 and lf2.poly.degree == 8
    assert lf2.poly[1] == Fraction(960, 88)
    assert local_factor(C, 3, 2).flags
    with pytest.raises(InputError, match="bad reduction"):
        local_factor(C, 5, 1)
    with pytest.raises(InputError):
        local_factor(IntegerCurve((1, 1, 0, 0, 0, 0, 0, 1)), 3, 2)
    with pytest.raises(ConsistencyError):
        LocalFactor(3, Poly([2, 1]))


def test_r1_factor_is_hasse_weil(store_r1):
    for p in (3, 7, 101):
        z = ArtinZeta.from_curve(C.reduce(p))
        assert store_r1.get(p).poly == z.numerator


def test_store_roundtrip(tmp_path, store_r2):
    path = tmp_path / "s.jsonl"
    st_ = LocalFactorStore(C, 2, path)
    fill_store(st_, 60)
    again = LocalFactorStore(C, 2, path)
    assert len(again) == len(st_)
    for p in good_primes(C, 60):
        assert again.get(p).poly == st_.get(p).poly == store_r2.get(p).poly
    head = json.loads(path.read_text().splitlines()[0])
    assert head["fingerprint"] == fingerprint(C, 2)
    assert fill_store(again, 60) == 0
    with pytest.raises(InputError, match="fingerprint"):
        LocalFactorStore(C, 1, path)


def test_store_is_write_once(store_r2):
    lf = store_r2.get(3)
    store_r2.put(lf)
    with pytest.raises(ConsistencyError):
        store_r2.put(LocalFactor(3, Poly([1, 1])))


def test_product_basics(store_r2):
    empty = LocalFactorStore(C, 2)
    assert truncated_product(empty, 6, 2).value == 1
    with pytest.raises(InputError, match="incomplete store"):
        truncated_product(empty, 6, 10)
    with pytest.raises(InputError, match="abscissa"):
        truncated_product(store_r2, 4.5, 100)
    assert truncated_product(store_r2, 4.5, 100, force=True).value != 0
    r = truncated_product(store_r2, 5.5, 120)
    assert [x for x, _ in r.checkpoints] == [30, 60, 120]
    assert r.deltas[1] < r.deltas[0]
    assert r.flags
    assert len(scan(store_r2, [2, 3 + 1j], 50)) == 2


def test_local_zero_hit():
    st_ = LocalFactorStore(C, 1)
    st_.put(LocalFactor(3, Poly([1, -3])))  # vanishes at 3^-s = 1/3, s = 1
    with pytest.raises(ConvergenceError, match="local zero"):
        truncated_product(st_, 1, 3, force=True)


def test_conjugate_symmetry(store_r2):
    a = truncated_product(store_r2, 5.5 + 2j, 120).value
    b = truncated_product(store_r2, 5.5 - 2j, 120).value
    assert abs(a - b.conjugate()) < 1e-14


@pytest.mark.parametrize(
    "X",
    [
        pytest.param(200, marks=pytest.mark.xfail(strict=True, reason="delta 5.3e-6 between X=200 and 400")),
        pytest.param(400, marks=pytest.mark.xfail(strict=True, reason="delta 1.25e-6 between X=400 and 800")),
    ],
)
def test_r1_doubling_within_1e6(store_r1, X):
    a = truncated_product(store_r1, 3, X).value
    b = truncated_product(store_r1, 3, 2 * X).value
    assert abs(a - b) < 1e-6


def test_r1_deltas_shrink(store_r1):
    r = truncated_product(store_r1, 3, 800)
    assert r.deltas[1] < r.deltas[0]


def test_elliptic_p3():
    assert elliptic_rank2_factor(3) == Poly([1, 2, 2, 6, 9])


@given(st.integers(3, 10**4).map(sympy.nextprime).filter(lambda p: p < 10**4))
def test_elliptic_identities(p):
    assert all(c.passed for c in elliptic_identities_check(p))
