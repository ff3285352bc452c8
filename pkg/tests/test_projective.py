from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, strategies as st

from cbkit.fields import GF, QQ
from cbkit.linalg import rank
from cbkit.projective import (ConstraintError, HomogeneousForm, MonomialBasis, PointSet, ProjectivePoint,
                              evaluate_form, evaluation_array, evaluation_matrix, normalize_coords,
                              random_form, random_hypersurface, random_multiform)

F = GF(101)
coord = st.integers(0, 100)


def test_normalization_and_zero_vector():
    assert normalize_coords([0, 3, 6], F) == (0, 1, 2)
    with pytest.raises(ValueError):
        ProjectivePoint.of([0, 0, 0], F)


def test_pointset_rejects_duplicates():
    with pytest.raises(ValueError):
        PointSet([[1, 2, 3], [2, 4, 6]], F)


def test_pointset_json_roundtrip():
    S = PointSet([[1, 0, 0], [0, 1, 0], [1, 1, 1]], F)
    assert PointSet.from_json(S.to_json()).to_json() == S.to_json()
    T = PointSet([[Fraction(1, 2), 1, 0], [0, 0, 1]], QQ)
    assert PointSet.from_json(T.to_json()).to_json() == T.to_json()


@pytest.mark.parametrize("n,m", [(3, 1), (3, 3), (4, 2), (6, 4), (1, 5)])
def test_monomial_basis_size(n, m):
    B = MonomialBasis(n, m)
    assert len(B) == B.expected_size
    assert all(sum(e) == m for e in B)
    assert len(set(B.monomials)) == len(B)


def test_evaluation_examples(oracles):
    E = evaluation_matrix(PointSet([[3, 5, 7]], F), 1)
    assert [list(r) for r in E.rows] == [[1, 69, 36]]  # [3:5:7] scaled by 3^-1 = 34
    frame = PointSet([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], F)
    assert rank(evaluation_matrix(frame, 1)) == oracles["ranks"]["frame_m1"] == 3
    conic = PointSet([[1, t, t * t] for t in range(6)], F)
    assert rank(evaluation_matrix(conic, 2)) == oracles["ranks"]["conic6_m2"] == 5


def test_form_evaluation_examples():
    xz_y2 = HomogeneousForm(3, 2, {(1, 0, 1): 1, (0, 2, 0): -1}, QQ)
    assert evaluate_form(xz_y2, [1, 2, 4]) == 0
    x3 = HomogeneousForm(3, 3, {(3, 0, 0): 1}, QQ)
    assert evaluate_form(x3, [0, 1, 0]) == 0


@given(st.integers(0, 10 ** 6), st.integers(1, 100), st.integers(1, 4))
def test_rescaling_scales_by_degree(seed, lam, d):
    rng = Random(seed)
    f = random_form(3, d, F, rng)
    x = [F.random(rng) for _ in range(3)]
    lx = [F.mul(lam, c) for c in x]
    assert f(lx) == F.mul(F.pow(lam, d), f(x))


@given(st.lists(st.lists(coord, min_size=3, max_size=3), min_size=1, max_size=8), st.integers(1, 3))
def test_numpy_and_python_evaluation_agree(rows, m):
    rows = [r for r in rows if any(r)]
    try:
        S = PointSet(rows, F)
    except ValueError:
        return
    B = MonomialBasis(3, m)
    expected = [[evaluate_form(HomogeneousForm(3, m, {e: 1}, F), p.coords) for e in B] for p in S]
    assert evaluation_array(S, m).tolist() == expected


def test_random_hypersurface_constraints():
    rng = Random(1)
    f = random_hypersurface(2, 1, [([1, 0, 0], "vanish")], rng, F)
    assert f.degree == 1 and evaluate_form(f, [1, 0, 0]) == 0
    g = random_hypersurface(2, 1, [([1, 0, 0], "vanish"), ([0, 1, 0], "vanish"), ([1, 1, 0], "vanish")], rng, F)
    assert set(g.coeffs) == {(0, 0, 1)}  # the line z = 0
    with pytest.raises(ConstraintError):
        random_hypersurface(2, 1, [([1, 0, 0], "vanish"), ([0, 1, 0], "vanish"), ([0, 0, 1], "vanish")], rng, F)
    h = random_hypersurface(2, 2, [([1, 0, 0], "vanish"), ([0, 1, 0], "not-vanish")], rng, F)
    assert h([1, 0, 0]) == 0 and h([0, 1, 0]) != 0


def test_unconstrained_forms_rarely_vanish():
    # Schwartz-Zippel: a nonzero degree-3 form vanishes at a random point with probability <= 3/101
    rng = Random(7)
    hits = 0
    for _ in range(400):
        f = random_hypersurface(2, 3, (), rng, F)
        if evaluate_form(f, [F.random(rng) for _ in range(3)]) == 0:
            hits += 1
    assert hits / 400 < 0.08


@given(st.integers(0, 10 ** 6))
def test_substitute_is_composition(seed):
    rng = Random(seed)
    f = random_form(3, 2, F, rng)
    A = [[F.random(rng) for _ in range(3)] for _ in range(3)]
    y = [F.random(rng) for _ in range(3)]
    Ay = [F.dot(r, y) for r in A]
    assert f.substitute(A)(y) == f(Ay)


@given(st.integers(0, 10 ** 6))
def test_form_json_and_gram(seed):
    rng = Random(seed)
    f = random_form(4, 2, F, rng)
    assert HomogeneousForm.from_json(f.to_json(), F).coeffs == f.coeffs
    assert HomogeneousForm.from_gram(f.gram()).coeffs == f.coeffs


def test_multiform_specialize():
    rng = Random(3)
    g = random_multiform([1, 2], [2, 3], F, rng)
    u, v = [2, 5], [1, 7, 9]
    assert g.specialize(0, u)([v]) == g([u, v])
