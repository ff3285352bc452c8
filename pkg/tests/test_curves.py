from random import Random

from hypothesis import given, strategies as st

from cbkit.cb import cb_check
from cbkit.curves import (classify_degree2, collinear, on_plane_cubic, on_smooth_conic, on_two_lines,
                          plane_curve_dimension, witness_annihilates)
from cbkit.fields import GF
from cbkit.generators import CI_FAMILIES, gen_random, random_embedding
from cbkit.linalg import ExactMatrix, rank
from cbkit.projective import HomogeneousForm, PointSet, evaluate_form

F = GF(101)


def _vanish(forms, S):
    return all(evaluate_form(f, p.coords) == 0 for f in forms for p in S)


def test_collinear_examples(oracles):
    S = PointSet([[1, 0, 0], [0, 1, 0], [1, 1, 0]], F)
    L = collinear(S)
    assert len(L.equations) == 1 and set(L.equations[0].coeffs) == {(0, 0, 1)}
    assert collinear(PointSet([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], F)) is None
    T = PointSet([[1, t, 2 * t] for t in range(5)], F)
    assert rank(T.coordinate_matrix()) == oracles["ranks"]["line5_coords"] == 2
    (eq,) = collinear(T).equations
    two_y_minus_z = HomogeneousForm.linear([0, 2, -1], F)
    assert eq.normalized().coeffs == two_y_minus_z.normalized().coeffs


def test_conic_in_plane_of_p3():
    S = PointSet([[1, t, t * t, 0] for t in range(6)], F)
    C = on_smooth_conic(S)
    assert C is not None
    assert _vanish(C.plane + [C.equation], S)
    (plane,) = C.plane
    assert set(plane.coeffs) == {(0, 0, 0, 1)}
    xz_y2 = HomogeneousForm(4, 2, {(1, 0, 1, 0): 1, (0, 2, 0, 0): -1}, F)
    assert C.equation.normalized().coeffs == xz_y2.normalized().coeffs
    assert classify_degree2(S).kind == "smooth_conic"


def test_four_general_points_in_a_plane_lie_on_a_smooth_conic():
    S = PointSet([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], F)
    C = on_smooth_conic(S, Random(0))
    assert C is not None and _vanish([C.equation], S)
    assert rank(C.plane_equation.gram()) == 3


def test_points_spanning_p3_have_no_conic():
    S = PointSet([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1]], F)
    assert on_smooth_conic(S) is None
    assert classify_degree2(S).kind == "none"


def test_two_concurrent_coordinate_lines():
    # {y = z = 0} and {x = z = 0} in P^3, meeting at [0:0:0:1]
    pts = [[1, 0, 0, a] for a in range(3)] + [[0, 1, 0, a] for a in range(4)]
    S = PointSet(pts, F)
    L1, L2, counts = on_two_lines(S)
    assert sorted(counts) == [3, 4]
    cls = classify_degree2(S)
    assert cls.kind == "two_lines" and witness_annihilates(S, cls)


def test_seven_plus_one():
    pts = [[1, t, 0] for t in range(7)] + [[0, 0, 1]]
    S = PointSet(pts, F)
    L1, L2, counts = on_two_lines(S)
    # lexicographically first pair (0, 1) spans the 7-point line; the stray point joins point 0
    assert counts == [7, 2]
    assert L2.contains(S[0].coords) and L2.contains(S[7].coords)


def test_nine_general_points():
    rng = Random(5)
    S = PointSet([[F.random(rng) for _ in range(3)] for _ in range(9)], F)
    assert on_two_lines(S) is None
    assert classify_degree2(S).kind == "none"


def test_frame_plus_interior_in_p3():
    pts = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1], [1, 2, 3, 4]]
    assert classify_degree2(PointSet(pts, F)).kind == "none"


def _random_set(seed, N):
    rng = Random(seed)
    m = rng.randint(1, 4)
    fam = rng.choice(sorted(CI_FAMILIES) + ["random"])
    pts = gen_random(m, N, F, rng, 2, 10) if fam == "random" else CI_FAMILIES[fam](m, N, F, rng)
    if pts is None or len(pts) < 2:
        return None, m
    try:
        return PointSet(pts, F), m
    except ValueError:
        return None, m


@given(st.integers(0, 2 ** 32), st.sampled_from([2, 3, 4]))
def test_witness_soundness(seed, N):
    S, _ = _random_set(seed, N)
    if S is None:
        return
    cls = classify_degree2(S)
    assert witness_annihilates(S, cls)
    if cls.kind == "two_lines":
        assert sum(cls.per_line_counts) >= len(S)
        assert not all(cls.lines[0].contains(q) for q in cls.lines[1].span)  # distinct lines


@given(st.integers(0, 2 ** 32), st.sampled_from([2, 3]))
def test_classification_invariant_under_coordinate_change(seed, N):
    S, _ = _random_set(seed, N)
    if S is None:
        return
    A = random_embedding(N + 1, N + 1, F, Random(seed))
    assert classify_degree2(S).kind == classify_degree2(S.transform(A)).kind


@given(st.integers(0, 2 ** 32), st.sampled_from([2, 3]))
def test_cb_sets_within_bounds_are_special(seed, N):
    S, m = _random_set(seed, N)
    if S is None or not cb_check(S, m).holds:
        return
    r = len(S)
    cls = classify_degree2(S)
    if r <= 2 * m + 1:
        assert cls.kind == "line"
    if 2 * r <= 5 * m + 2:
        assert cls.kind != "none"
        if cls.kind == "two_lines":
            assert min(cls.per_line_counts) >= m + 1


def test_plane_cubics():
    S = PointSet([[1, a, b] for a in range(3) for b in range(3)], F)
    assert plane_curve_dimension(S, 3) == 2  # nine grid points: the pencil spanned by the two triples of lines
    assert on_plane_cubic(S)
    rng = Random(2)
    T = PointSet([[F.random(rng) for _ in range(3)] for _ in range(10)], F)
    assert not on_plane_cubic(T)
    U = PointSet([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], F)
    assert plane_curve_dimension(U, 3) is None
