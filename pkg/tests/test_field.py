import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import GF, Poly as SPoly, symbols

from nazeta.errors import InputError
from nazeta.field import (
    FieldSpec,
    add,
    element,
    embed,
    embedding,
    enumerate_field,
    field_ops,
    inv,
    is_irreducible,
    is_square,
    make_field,
    mul,
    power,
    vcharacter,
)

FIELDS = [(3, 1), (5, 1), (3, 2), (5, 2), (7, 2), (3, 3)]


def test_smallest_moduli():
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert make_field(5, 2).modulus == (1, 1, 1)
    assert make_field(3, 3).modulus == (1, 0, 2, 1)


def test_irreducible_against_sympy():
    u = symbols("u")
    for p, k in [(3, 2), (5, 2), (3, 3)]:
        for low in itertools.product(range(p), repeat=k):
            m = tuple(low) + (1,)
            expr = SPoly(list(reversed(m)), u, modulus=p)
            assert is_irreducible(m, p) == expr.is_irreducible


@pytest.mark.parametrize("p", [2, 9, 1])
def test_bad_characteristic(p):
    with pytest.raises(InputError, match="invalid characteristic"):
        make_field(p)


def test_reducible_modulus_rejected():
    with pytest.raises(InputError):
        FieldSpec(5, 2, (1, 0, 1))  # u^2 + 1 = (u - 2)(u + 2) mod 5


def test_budget():
    with pytest.raises(InputError, match="field too large"):
        make_field(101, 5, budget=10**9)


def test_inverse_of_zero():
    F = make_field(5, 2)
    with pytest.raises(InputError, match="division by zero"):
        inv(element(F, 0), F)


@pytest.mark.parametrize("p,k", FIELDS)
def test_multiplicative_group(p, k):
    F = make_field(p, k)
    xs = F.elements(1)
    assert (F.vpow(xs, F.q - 1) == F.const(1, len(xs))).all()
    chi = vcharacter(F, xs)
    assert (chi == 1).sum() == (chi == -1).sum() == (F.q - 1) // 2
    labels = F.vindex(F.vmul(xs, xs))
    assert len(np.unique(labels)) == (F.q - 1) // 2


def test_mul_against_sympy_gf():
    F = make_field(7)
    G = GF(7)
    for a, b in itertools.product(range(7), repeat=2):
        got = mul(element(F, a), element(F, b), F).coeffs[0]
        assert got == int(G(a) * G(b)) % 7


@st.composite
def field_and_elems(draw):
    p, k = draw(st.sampled_from(FIELDS))
    F = make_field(p, k)
    el = st.lists(st.integers(0, p - 1), min_size=k, max_size=k).map(lambda c: element(F, c))
    return F, draw(el), draw(el), draw(el)


@given(field_and_elems())
def test_field_axioms(data):
    F, a, b, c = data
    assert mul(a, add(b, c, F), F) == add(mul(a, b, F), mul(a, c, F), F)
    assert mul(mul(a, b, F), c, F) == mul(a, mul(b, c, F), F)
    if any(a.coeffs):
        assert mul(a, inv(a, F), F) == element(F, 1)
        assert is_square(mul(a, a, F), F) == "square"
    assert power(a, F.q, F) == a
    assert add(field_ops(a, b, F, "sub"), b, F) == a


def test_enumerate_and_is_square_zero():
    F = make_field(3, 2)
    assert len(list(enumerate_field(F))) == 9
    assert is_square(element(F, 0), F) == "zero"


@pytest.mark.parametrize("p,k,K", [(3, 1, 2), (3, 2, 4), (5, 1, 2), (3, 1, 3)])
def test_embedding_is_homomorphism(p, k, K):
    small, big = make_field(p, k), make_field(p, K)
    emb = embedding(small, big)
    xs = small.elements()
    ys = small.elements()[::-1]
    lhs = embed(small.vmul(xs, ys), emb, p)
    rhs = big.vmul(embed(xs, emb, p), embed(ys, emb, p))
    assert (lhs == rhs).all()
    assert (embed(small.vadd(xs, ys), emb, p) == big.vadd(embed(xs, emb, p), embed(ys, emb, p))).all()


def test_no_embedding():
    with pytest.raises(InputError):
        embedding(make_field(3, 2), make_field(3, 3))


def test_json_roundtrip():
    F = make_field(3, 3)
    assert FieldSpec.from_json(F.to_json()) == F
