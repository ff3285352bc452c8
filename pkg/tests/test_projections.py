from math import lcm
from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from cbkit.fields import GF, QQ
from cbkit.projections import (KINDS, build_projection, check_fiber_cb, fiber_points, projection_degree,
                               sample_fiber, verify_fiber_cb, NonGeneric)
from cbkit.projective import evaluate_form

F = GF(101)


def degree(kind, params, seed=0, samples=5):
    rng = Random(seed)
    spec = build_projection(kind, params, F, rng)
    return projection_degree(spec, samples, rng)


@pytest.mark.parametrize("n,d", [(2, 1), (2, 2), (2, 4), (3, 3)])
def test_quadric_line_degree(n, d):
    assert degree("quadric_line", {"n": n, "d": d}).symbolic_degree == d


@pytest.mark.parametrize("d", [1, 3])
def test_quadric_double_degree(d):
    assert degree("quadric_double", {"n": 1, "d": d}).symbolic_degree == d


def test_quadric_double_needs_odd_n():
    with pytest.raises(ValueError):
        build_projection("quadric_double", {"n": 2, "d": 2}, F, Random(0))


@pytest.mark.parametrize("case,expected,tag", [("generic", 8, "generic"), ("line", 7, "contains_line"),
                                               ("conic", 6, "contains_conic")])
def test_ci22_degree_d4(case, expected, tag):
    rep = degree("ci22_plane", {"d": 4, "case": case})
    assert rep.symbolic_degree == expected
    assert rep.case_tag == tag
    assert rep.total_length == 8


@pytest.mark.parametrize("d", [1, 2])
def test_grassmann_degree(d):
    assert degree("grassmann_flag", {"k": 2, "m": 4, "d": d}).symbolic_degree == d


def test_grassmann_carrier_is_a_line_in_plucker_space():
    rep = degree("grassmann_flag", {"k": 2, "m": 4, "d": 2})
    for s in rep.samples:
        assert s.carrier.degree == 1
        assert all(c.degree <= 1 for c in s.carrier.coords)


@pytest.mark.parametrize("factor,expected", [(0, 3), (1, 4)])
def test_product_degree(factor, expected):
    rep = degree("product_point", {"dims": [1, 2], "degrees": [3, 4], "factor": factor})
    assert rep.symbolic_degree == expected


def test_product_degree_one():
    assert degree("product_point", {"dims": [1, 2], "degrees": [1, 1], "factor": 0}).symbolic_degree == 1


def test_rationals_rejected():
    with pytest.raises(ValueError):
        build_projection("quadric_line", {"n": 2, "d": 2}, QQ, Random(0))


@pytest.mark.parametrize("kind,params", [("quadric_line", {"n": 2, "d": 3}), ("quadric_double", {"n": 1, "d": 3})])
def test_fiber_points_lie_on_ambient_and_hypersurface(kind, params):
    rng = Random(4)
    spec = build_projection(kind, params, F, rng)
    checked = 0
    while checked < 3:
        try:
            s = sample_fiber(spec, rng)
        except NonGeneric:
            continue
        if not s.transverse:
            continue
        check_fiber_cb(s, max(spec.adjunction, 0), F, explicit_max_degree=6, rng=rng)
        S = fiber_points(s, F, rng)
        K = S.field
        q = spec.ambient.form()
        for p in S:
            assert K.is_zero(evaluate_form(spec.form, p))
            assert K.is_zero(evaluate_form(q, p))
        checked += 1


def test_quadric_line_fibers_satisfy_cb1():
    spec = build_projection("quadric_line", {"n": 2, "d": 4}, F, Random(8))
    assert spec.adjunction == 1
    samples = verify_fiber_cb(spec, 6, Random(9))
    assert all(s.cb_status == "holds" and s.degree == 4 for s in samples)
    assert all(s.degree >= spec.adjunction + 2 for s in samples)


def test_negative_adjunction_is_vacuous():
    spec = build_projection("quadric_line", {"n": 2, "d": 2}, F, Random(1))
    samples = verify_fiber_cb(spec, 3, Random(2))
    assert {s.cb_status for s in samples} == {"vacuous"}


def test_degree_reports_are_reproducible():
    a = degree("quadric_line", {"n": 2, "d": 3}, seed=5).to_json()
    b = degree("quadric_line", {"n": 2, "d": 3}, seed=5).to_json()
    assert a == b
