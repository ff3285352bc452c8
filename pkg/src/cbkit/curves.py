"""Is a point set contained in a line, a union of two lines, or a smooth plane conic?

Witnesses are exact: lines are cut out by N-1 linear forms, a conic by the
N-2 linear forms of its plane plus one quadratic form on P^N (the conic
equation pulled back along a coordinate projection of the plane).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from random import Random
from typing import Sequence

from .fields import Field
from .linalg import ExactMatrix, determinant, nullspace_basis, rank, rref
from .projective import (HomogeneousForm, MonomialBasis, PointSet, evaluate_form,
                         monomial_values)

MAX_POINTS = 64
KINDS = ("line", "two_lines", "smooth_conic", "none")


@dataclass
class Line:
    equations: list[HomogeneousForm]
    span: list[tuple]  # two points spanning the line

    def contains(self, coords) -> bool:
        F = self.equations[0].field if self.equations else None
        return all(F.is_zero(evaluate_form(e, coords)) for e in self.equations)

    def to_json(self) -> dict:
        F = self.equations[0].field
        return {
            "equations": [e.to_json() for e in self.equations],
            "span": [[F.to_json(c) for c in p] for p in self.span],
        }


@dataclass
class Conic:
    plane: list[HomogeneousForm]
    equation: HomogeneousForm  # quadratic form on the ambient space
    plane_basis: list[tuple]
    plane_equation: HomogeneousForm  # the conic in coordinates of plane_basis

    def to_json(self) -> dict:
        F = self.equation.field
        return {
            "plane": [e.to_json() for e in self.plane],
            "equation": self.equation.to_json(),
            "plane_basis": [[F.to_json(c) for c in p] for p in self.plane_basis],
            "plane_equation": self.plane_equation.to_json(),
        }


@dataclass
class CurveClass:
    kind: str
    lines: list[Line] = dc_field(default_factory=list)
    conic: Conic | None = None
    per_line_counts: list[int] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "lines": [l.to_json() for l in self.lines],
            "conic": None if self.conic is None else self.conic.to_json(),
            "per_line_counts": list(self.per_line_counts),
        }


def _linear_forms(vectors, field) -> list[HomogeneousForm]:
    return [HomogeneousForm.linear(v, field) for v in vectors]


def _line_through(vectors: Sequence[Sequence], field: Field) -> Line:
    """The line spanned by vectors (which must span a 2-dimensional space)."""
    M = ExactMatrix(vectors, field)
    rows, piv = rref(M)
    if len(piv) != 2:
        raise ValueError("vectors do not span a line")
    eqs = _linear_forms(nullspace_basis(M), field)
    return Line(equations=eqs, span=[tuple(rows[0]), tuple(rows[1])])


def collinear(S: PointSet) -> Line | None:
    """A line containing S, or None."""
    if len(S) < 2:
        raise ValueError("need at least two points")
    M = S.coordinate_matrix()
    if rank(M) > 2:
        return None
    return _line_through([p.coords for p in S.points], S.field)


def on_two_lines(S: PointSet) -> tuple[Line, Line, list[int]] | None:
    """Two distinct lines covering S, with the number of points on each.

    Candidate first lines are spanned by point pairs (i, j) in lexicographic
    order; the first candidate whose complement is collinear wins. If one
    point is left over, the second line joins it to the lowest-index point of
    the first line.
    """
    r = len(S)
    if r < 2:
        raise ValueError("need at least two points")
    if r > MAX_POINTS:
        raise ValueError(f"at most {MAX_POINTS} points supported")
    F = S.field
    pts = [p.coords for p in S.points]
    seen: set[tuple[int, ...]] = set()
    for i in range(r):
        for j in range(i + 1, r):
            L = _line_through([pts[i], pts[j]], F)
            on = tuple(k for k in range(r) if L.contains(pts[k]))
            if on in seen:
                continue
            seen.add(on)
            rest = [k for k in range(r) if k not in on]
            if not rest:
                # S is collinear; pair L with a coordinate line through pts[i]
                N1 = len(pts[i])
                e = next(tuple(int(a == b) for a in range(N1)) for b in range(N1)
                         if not L.contains(tuple(int(a == b) for a in range(N1))))
                L2 = _line_through([pts[i], e], F)
            elif len(rest) == 1:
                L2 = _line_through([pts[rest[0]], pts[on[0]]], F)
            else:
                if rank(ExactMatrix([pts[k] for k in rest], F)) > 2:
                    continue
                L2 = _line_through([pts[k] for k in rest], F)
            counts = [len(on), sum(1 for q in pts if L2.contains(q))]
            return L, L2, counts
    return None


def _smooth_member(grams: list[ExactMatrix], field: Field, rng: Random):
    """Coefficients of a nonsingular combination of 3x3 symmetric matrices, or None."""
    k = len(grams)

    def combo(c):
        return ExactMatrix([[field.sum(field.mul(ci, G[a, b]) for ci, G in zip(c, grams))
                             for b in range(3)] for a in range(3)], field)

    trials = [[field.one() if i == j else field.zero() for i in range(k)] for j in range(k)]
    trials += [[field.one() if i in (a, b) else field.zero() for i in range(k)]
               for a in range(k) for b in range(a + 1, k)]
    trials += [[field.random(rng) for _ in range(k)] for _ in range(64)]
    for c in trials:
        if all(field.is_zero(x) for x in c):
            continue
        if not field.is_zero(determinant(combo(c))):
            return c
    return None


def on_smooth_conic(S: PointSet, rng: Random | None = None) -> Conic | None:
    """A smooth conic in a plane containing S, or None.

    When several conics pass through S, a nonsingular member of the linear
    system is searched for among basis elements, their pairwise sums and up to
    64 seeded random combinations.
    """
    if len(S) < 3:
        raise ValueError("need at least three points")
    F = S.field
    rng = rng if rng is not None else Random(0)
    M = S.coordinate_matrix()
    rows, piv = rref(M)
    if len(piv) != 3:
        return None  # collinear sets meet a smooth conic in at most two points
    plane_basis = [tuple(rows[k]) for k in range(3)]
    plane_eqs = _linear_forms(nullspace_basis(M), F)
    # plane coordinates of a point x are its pivot entries
    plane_pts = [tuple(p.coords[c] for c in piv) for p in S.points]
    basis = MonomialBasis(3, 2)
    E = ExactMatrix([monomial_values(s, basis, F) for s in plane_pts], F, len(basis))
    K = nullspace_basis(E)
    if not K:
        return None
    forms = [HomogeneousForm.from_vector(basis, v, F) for v in K]
    c = _smooth_member([f.gram() for f in forms], F, rng)
    if c is None:
        return None
    q = HomogeneousForm(3, 2, {}, F)
    for ci, f in zip(c, forms):
        q = q + f * ci
    q = q.normalized()
    n1 = S.ambient_dim + 1
    L = [[F.one() if col == piv[k] else F.zero() for col in range(n1)] for k in range(3)]
    Q = q.substitute(L)
    return Conic(plane=plane_eqs, equation=Q, plane_basis=plane_basis, plane_equation=q)


def classify_degree2(S: PointSet, rng: Random | None = None) -> CurveClass:
    """Most special of: line, two lines, smooth conic; else none."""
    L = collinear(S)
    if L is not None:
        return CurveClass("line", lines=[L], per_line_counts=[len(S)])
    two = on_two_lines(S)
    if two is not None:
        L1, L2, counts = two
        return CurveClass("two_lines", lines=[L1, L2], per_line_counts=counts)
    if len(S) >= 3:
        C = on_smooth_conic(S, rng)
        if C is not None:
            return CurveClass("smooth_conic", conic=C)
    return CurveClass("none")


def witness_annihilates(S: PointSet, cls: CurveClass) -> bool:
    """Every point of S lies on the reported curve."""
    F = S.field
    if cls.kind == "none":
        return True
    if cls.kind == "smooth_conic":
        eqs = cls.conic.plane + [cls.conic.equation]
        return all(all(F.is_zero(evaluate_form(e, p.coords)) for e in eqs) for p in S.points)
    return all(any(L.contains(p.coords) for L in cls.lines) for p in S.points)


def plane_curve_dimension(S: PointSet, degree: int) -> int | None:
    """Dimension of the space of degree-`degree` plane curves through S, if S spans at most a plane."""
    F = S.field
    M = S.coordinate_matrix()
    rows, piv = rref(M)
    if len(piv) > 3:
        return None
    piv = list(piv) + [c for c in range(S.ambient_dim + 1) if c not in piv][: 3 - len(piv)]
    plane_pts = [tuple(p.coords[c] for c in piv) for p in S.points]
    basis = MonomialBasis(3, degree)
    E = ExactMatrix([monomial_values(s, basis, F) for s in plane_pts], F, len(basis))
    return len(basis) - rank(E)


def on_plane_cubic(S: PointSet) -> bool:
    """S lies in a plane and on some cubic curve of that plane."""
    dim = plane_curve_dimension(S, 3)
    return dim is not None and dim > 0
