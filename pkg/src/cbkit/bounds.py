"""Closed-form values and bounds for the degree of irrationality of hypersurfaces in Fano ambients.

Lower bounds come from positivity of the canonical bundle: if
omega_X = O_X(p) with p >= 0 then irr(X) >= p + 2. Upper bounds are the
degrees of the explicit projections in :mod:`cbkit.projections`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field as dc_field

FAMILIES = ("projective_space", "quadric", "cubic", "ci22", "grassmannian", "product")

CANONICAL = "canonical-positivity bound p+2"
CB_CONIC = "fibers on degree-2 curves, cubic sandwich"


@dataclass
class BoundsQuery:
    family: str
    n: int | None = None
    d: int | None = None
    k: int | None = None
    m: int | None = None
    dims: list[int] | None = None
    degrees: list[int] | None = None
    contains_line: bool | None = None
    contains_conic: bool | None = None


@dataclass
class Bound:
    value: int
    provenance: str


@dataclass
class BoundsVerdict:
    family: str
    n: int
    adjunction: int
    lower: Bound
    upper: Bound
    exact: int | None
    hypothesis_ok: bool
    violated: list[str] = dc_field(default_factory=list)
    assumptions: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


class InconsistentQuery(ValueError):
    pass


def _need(q: BoundsQuery, *names):
    for name in names:
        if getattr(q, name) is None:
            raise InconsistentQuery(f"{q.family} needs parameter {name}")


def _canonical_lower(p: int) -> Bound:
    return Bound(max(1, p + 2), CANONICAL)


def irr_bounds(q: BoundsQuery) -> BoundsVerdict:
    fam = q.family
    if fam not in FAMILIES:
        raise InconsistentQuery(f"unknown family {fam!r}")
    violated: list[str] = []
    assumptions = {}
    exact = None

    if fam == "projective_space":
        _need(q, "n", "d")
        n, d = q.n, q.d
        _positive(n=n, d=d)
        p = d - n - 2
        lower = _canonical_lower(p)
        upper = Bound(max(1, d - 1), "projection from a point of X")
        if d >= 2 * n + 1:
            exact = d - 1
        else:
            violated.append("d >= 2n+1")

    elif fam == "quadric":
        _need(q, "n", "d")
        n, d = q.n, q.d
        _positive(n=n, d=d)
        p = d - n - 1
        lower = _canonical_lower(p)
        upper = Bound(d, "projection from a line on the quadric")
        if d >= 2 * n:
            exact = d
        else:
            violated.append("d >= 2n")

    elif fam == "cubic":
        _need(q, "n", "d")
        n, d = q.n, q.d
        if n not in (2, 3):
            raise InconsistentQuery("cubic family needs n in {2, 3}")
        _positive(d=d)
        p = d - n
        if d >= 5 * n - 2:
            lower = Bound(2 * (d - n) + 2, CB_CONIC)
        else:
            lower = _canonical_lower(p)
        if q.contains_line:
            upper = Bound(max(1, 2 * d - 2), "projection from a line on X")
        else:
            upper = Bound(2 * d, "projection from a line on the cubic")
        assumptions["contains_line"] = q.contains_line
        if n == 2:
            if d < 8:
                violated.append("d >= 8")
            elif q.contains_line is None:
                violated.append("contains_line flag supplied")
            else:
                exact = 2 * d - 2 if q.contains_line else 2 * d
        else:
            if d < 13:
                violated.append("d >= 13")
            if q.contains_line:
                violated.append("X very general (contains no line)")
            if not violated:
                exact = 2 * d

    elif fam == "ci22":
        _need(q, "d")
        d = q.d
        _positive(d=d)
        if q.n not in (None, 2):
            raise InconsistentQuery("ci22 surfaces have n = 2")
        n = 2
        p = d - 2
        lower = Bound(2 * d - 2, "fibers on conics of the pencil") if d >= 8 else _canonical_lower(p)
        if q.contains_conic:
            upper = Bound(max(1, 2 * d - 2), "projection from the plane of a conic on X")
        elif q.contains_line:
            upper = Bound(2 * d - 1, "projection from a plane through a line on X")
        else:
            upper = Bound(2 * d, "projection from a plane in a quadric of the pencil")
        assumptions.update(contains_line=q.contains_line, contains_conic=q.contains_conic)
        if d < 8:
            violated.append("d >= 8")
        elif q.contains_conic is None or (not q.contains_conic and q.contains_line is None):
            violated.append("contains_line/contains_conic flags supplied")
        elif q.contains_conic:
            exact = 2 * d - 2
        elif q.contains_line:
            exact = 2 * d - 1
        else:
            exact = 2 * d

    elif fam == "grassmannian":
        _need(q, "k", "m", "d")
        k, m, d = q.k, q.m, q.d
        if not 1 <= k < m:
            raise InconsistentQuery("need 1 <= k < m")
        _positive(d=d)
        n = k * (m - k) - 1
        if q.n is not None and q.n != n:
            raise InconsistentQuery(f"Gr({k},{m}) hypersurfaces have n = {n}")
        p = d - m
        lower = _canonical_lower(p)
        upper = Bound(d, "projection along a flag pencil")
        if k in (1, m - 1):
            violated.append("k not in {1, m-1}")
        if d < 3 * m - 5:
            violated.append("d >= 3m-5")
        if not violated:
            exact = d

    else:  # product
        _need(q, "dims", "degrees")
        dims, degs = list(q.dims), list(q.degrees)
        if len(dims) < 2 or len(dims) != len(degs):
            raise InconsistentQuery("product needs at least two factors with one degree each")
        if any(x < 1 for x in dims) or any(x < 1 for x in degs):
            raise InconsistentQuery("factor dimensions and degrees must be positive")
        n = sum(dims) - 1
        if q.n is not None and q.n != n:
            raise InconsistentQuery(f"product hypersurfaces have n = {n}")
        p = min(di - mi - 1 for di, mi in zip(degs, dims))
        lower = _canonical_lower(p)
        upper = Bound(min(degs), "projection from a point of one factor")
        if p < max(dims):
            violated.append("p >= max m_i")
        else:
            exact = min(degs)

    assert lower.value <= upper.value, (lower, upper)
    if exact is not None:
        assert lower.value <= exact <= upper.value, (lower, exact, upper)
    return BoundsVerdict(fam, n, p, lower, upper, exact, not violated, violated, assumptions)


def _positive(**kw):
    for name, v in kw.items():
        if v < 1:
            raise InconsistentQuery(f"{name} must be >= 1")
