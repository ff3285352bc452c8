from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, strategies as st

from cbkit.fields import (GF, QQ, ExtensionField, default_minpoly, field_from_spec, is_irreducible_fp,
                          is_square, sqrt, sqrt_fp)


def test_characteristic_two_rejected():
    with pytest.raises(ValueError):
        GF(2)
    with pytest.raises(ValueError):
        GF(2, 3)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        GF(15)


def test_rationals_lowest_terms():
    assert QQ.coerce(Fraction(6, -4)) == Fraction(-3, 2)
    assert QQ.to_json(Fraction(6, 4)) == "3/2"
    assert QQ.from_json("3/7") == Fraction(3, 7)


def test_prime_residues_reduced():
    F = GF(101)
    assert F.coerce(205) == 3
    assert F.coerce(Fraction(1, 2)) == 51
    assert F.to_json(42) == "42"


def test_default_minpoly_is_first_irreducible():
    mp = default_minpoly(7, 2)
    assert is_irreducible_fp(mp, 7)
    # every monic quadratic before it in lexicographic coefficient order is reducible
    for a0 in range(7):
        for a1 in range(7):
            cand = (a0, a1, 1)
            if cand == mp:
                return
            assert not is_irreducible_fp(cand, 7)


def test_extension_rejects_reducible_modulus():
    with pytest.raises(ValueError):
        ExtensionField(7, 2, (6, 0, 1))  # t^2 - 1


@pytest.mark.parametrize("spec", ["rationals", "prime:101", "101", "ext:7:2"])
def test_field_spec_roundtrip(spec):
    F = field_from_spec(spec)
    assert field_from_spec(F.spec()).spec() == F.spec()


@given(st.integers(0, 10 ** 6), st.integers(1, 10 ** 6))
def test_prime_field_inverse(a, seed):
    F = GF(101)
    a = F.coerce(a)
    if a:
        assert F.mul(a, F.inv(a)) == 1


@given(st.integers(0, 2 ** 32))
def test_extension_field_axioms(seed):
    E = GF(7, 3)
    rng = Random(seed)
    a, b, c = E.random(rng), E.random(rng), E.random(rng)
    assert E.mul(a, E.add(b, c)) == E.add(E.mul(a, b), E.mul(a, c))
    assert E.mul(E.mul(a, b), c) == E.mul(a, E.mul(b, c))
    if not E.is_zero(a):
        assert E.mul(a, E.inv(a)) == E.one()
        assert E.pow(a, E.order - 1) == E.one()
    assert E.from_json(E.to_json(a)) == a


@given(st.integers(0, 100))
def test_sqrt_fp(a):
    r = sqrt_fp(a, 101)
    euler = pow(a, 50, 101)
    if a == 0:
        assert r == 0
    elif euler == 1:
        assert r * r % 101 == a
    else:
        assert r is None


def test_sqrt_in_extension():
    E = GF(7, 2)
    minus_one = E.coerce(6)
    assert is_square(E, minus_one)  # every element of F_7 is a square in F_49
    r = sqrt(E, minus_one)
    assert E.mul(r, r) == minus_one
