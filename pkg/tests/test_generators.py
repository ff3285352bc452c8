from random import Random

from hypothesis import given, strategies as st

from cbkit.cb import cb_check
from cbkit.fields import GF
from cbkit.generators import CI_FAMILIES, FiberFactory
from cbkit.poly import UniPoly, interpolate
from cbkit.projective import PointSet, evaluate_form

F = GF(101)


@given(st.integers(0, 2 ** 32), st.integers(1, 4))
def test_fiber_construction_is_certified(seed, m):
    """The chosen carrier points are exactly the zeros of a hypersurface restricted to the carrier."""
    factory = FiberFactory(F, 0)
    rng = Random(seed)
    res = factory.fiber(m, rng, 12, build_form=True)
    if res is None:
        return
    pts, info = res
    f, carrier = info["form"], info["carrier"]
    assert all(evaluate_form(f, p) == 0 for p in pts)
    # restriction of f to the carrier: its zeros are exactly the chosen parameters
    total = carrier.degree * f.degree
    values = [evaluate_form(f, [c(t) for c in carrier.coords]) for t in range(total + 1)]
    g = interpolate(list(range(total + 1)), values, F)
    assert g.degree == total
    assert g.monic() == UniPoly.from_roots(info["params"], F)


@given(st.integers(0, 2 ** 32))
def test_fibers_of_positive_adjunction_are_cb(seed):
    """Fibers of the quadric-line projection with d = 4 on X through them satisfy CB(d - n - 1)."""
    factory = FiberFactory(F, 0)
    rng = Random(seed)
    res = factory.fiber(1, rng, 12)
    if res is None or res[1]["kind"] != "quadric_line":
        return
    pts, info = res
    d = info["d"]
    m = d - 2 - 1  # adjunction for a surface in a quadric threefold
    if m >= 1:
        assert cb_check(PointSet(pts, F), m).holds


@given(st.integers(0, 2 ** 32), st.sampled_from(sorted(CI_FAMILIES)), st.integers(1, 4))
def test_ci_families_produce_points(seed, fam, m):
    pts = CI_FAMILIES[fam](m, 3, F, Random(seed))
    if pts is not None:
        assert all(len(p) == 4 and any(p) for p in pts)
