"""Quadrics, pencils of quadrics, Grassmannians (Plücker) and Segre products."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from random import Random
from typing import Sequence

from .fields import Field, RationalField, is_square, sqrt
from .linalg import (ExactMatrix, determinant, intersect_subspaces, nullspace_basis, rank, rref,
                     span_dimension)
from .poly import UniPoly, interpolate, squarefree, uni_roots
from .projective import HomogeneousForm, ProjectivePoint, normalize_coords

INFINITY = "inf"


# -- linear subspaces ----------------------------------------------------------

@dataclass(frozen=True)
class LinearSubspace:
    """Span of linearly independent vectors in F^{N+1}."""

    basis: tuple
    field: Field

    @classmethod
    def of(cls, vectors: Sequence[Sequence], field: Field) -> "LinearSubspace":
        basis = tuple(tuple(field.coerce(x) for x in v) for v in vectors)
        if span_dimension(basis, field) != len(basis):
            raise ValueError("basis vectors are linearly dependent")
        return cls(basis, field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def dim_projective(self) -> int:
        return len(self.basis) - 1

    @property
    def ambient(self) -> int:
        return len(self.basis[0])

    def contains(self, v: Sequence) -> bool:
        return span_dimension(list(self.basis) + [tuple(v)], self.field) == self.dim

    def equations(self) -> list[list]:
        """Linear forms (coefficient vectors) cutting out the subspace."""
        return nullspace_basis(ExactMatrix(self.basis, self.field))

    def intersect(self, other: "LinearSubspace") -> list[list]:
        return intersect_subspaces(self.basis, other.basis, self.field)

    def point(self, coeffs: Sequence) -> tuple:
        F = self.field
        out = [F.zero()] * self.ambient
        for c, b in zip(coeffs, self.basis):
            out = [F.add(x, F.mul(c, y)) for x, y in zip(out, b)]
        return tuple(out)

    def random_vector(self, rng: Random) -> tuple:
        F = self.field
        while True:
            v = self.point([F.random(rng) for _ in self.basis])
            if any(not F.is_zero(x) for x in v):
                return v

    def same_span(self, other: "LinearSubspace") -> bool:
        return self.dim == other.dim and span_dimension(list(self.basis) + list(other.basis), self.field) == self.dim

    def to_json(self):
        return [[self.field.to_json(x) for x in v] for v in self.basis]


# -- quadrics ------------------------------------------------------------------

@dataclass(frozen=True)
class Quadric:
    gram: ExactMatrix

    def __post_init__(self):
        if not self.gram.is_symmetric():
            raise ValueError("gram matrix must be symmetric")

    @classmethod
    def from_form(cls, q: HomogeneousForm) -> "Quadric":
        return cls(q.gram())

    @classmethod
    def from_rows(cls, rows, field) -> "Quadric":
        return cls(ExactMatrix(rows, field))

    @property
    def field(self) -> Field:
        return self.gram.field

    @property
    def size(self) -> int:
        return self.gram.nrows

    def b(self, u: Sequence, v: Sequence):
        F = self.field
        return F.dot(u, self.gram.matvec(v))

    def q(self, u: Sequence):
        return self.b(u, u)

    def form(self) -> HomogeneousForm:
        return HomogeneousForm.from_gram(self.gram)

    def rank(self) -> int:
        return rank(self.gram)

    def is_smooth(self) -> bool:
        return self.rank() == self.size

    def contains_point(self, u: Sequence) -> bool:
        return self.field.is_zero(self.q(u))

    def orthogonal(self, vectors: Sequence[Sequence]) -> list[list]:
        """Basis of the b-orthogonal complement of span(vectors)."""
        if not vectors:
            return [[self.field.one() if i == j else self.field.zero() for i in range(self.size)]
                    for j in range(self.size)]
        rows = [self.gram.matvec(v) for v in vectors]
        return nullspace_basis(ExactMatrix(rows, self.field))

    def to_json(self):
        return self.gram.to_json()


def quadric_contains(Q: Quadric, L: LinearSubspace) -> bool:
    if L.ambient != Q.size:
        raise ValueError("dimension mismatch")
    F = Q.field
    B = L.basis
    return all(F.is_zero(Q.b(B[i], B[j])) for i in range(len(B)) for j in range(i, len(B)))


def diagonalize(Q: Quadric) -> list:
    """Diagonal entries of a form congruent to Q (odd characteristic)."""
    F = Q.field
    G = [list(r) for r in Q.gram.rows]
    n = len(G)
    diag = []
    for k in range(n):
        sub = range(k, n)
        piv = next((i for i in sub if not F.is_zero(G[i][i])), None)
        if piv is None:
            off = next(((i, j) for i in sub for j in sub if i < j and not F.is_zero(G[i][j])), None)
            if off is None:
                diag.extend([F.zero()] * (n - k))
                break
            i, j = off
            # e_i <- e_i + e_j makes the diagonal entry 2 G_ij != 0
            for c in range(n):
                G[i][c] = F.add(G[i][c], G[j][c])
            for r in range(n):
                G[r][i] = F.add(G[r][i], G[r][j])
            piv = i
        G[k], G[piv] = G[piv], G[k]
        for r in range(n):
            G[r][k], G[r][piv] = G[r][piv], G[r][k]
        a = G[k][k]
        inv = F.inv(a)
        for i in range(k + 1, n):
            f = F.mul(G[i][k], inv)
            if F.is_zero(f):
                continue
            for c in range(n):
                G[i][c] = F.sub(G[i][c], F.mul(f, G[k][c]))
            for r in range(n):
                G[r][i] = F.sub(G[r][i], F.mul(f, G[r][k]))
        diag.append(a)
    return diag


def max_isotropic_dim(Q: Quadric) -> int:
    """Dimension of a maximal totally isotropic subspace (finite field of odd order)."""
    F = Q.field
    diag = diagonalize(Q)
    nz = [a for a in diag if not F.is_zero(a)]
    corank = len(diag) - len(nz)
    n0 = len(nz)
    if n0 % 2:
        return corank + n0 // 2
    disc = F.one()
    for a in nz:
        disc = F.mul(disc, a)
    if (n0 // 2) % 2:
        disc = F.neg(disc)
    return corank + (n0 // 2 if is_square(F, disc) else n0 // 2 - 1)


def _isotropic_in_span(Q: Quadric, C: list, rng: Random, tries: int = 256):
    """A nonzero isotropic vector in span(C), or None."""
    F = Q.field
    if len(C) == 1:
        return tuple(C[0]) if F.is_zero(Q.q(C[0])) else None
    # an isotropic basis vector is not returned directly: callers need the
    # choice spread over the whole cone, not pinned to one coordinate point
    L = LinearSubspace(tuple(tuple(c) for c in C), F)
    for _ in range(tries):
        x = L.random_vector(rng)
        y = L.random_vector(rng)
        qx, qy, bxy = Q.q(x), Q.q(y), Q.b(x, y)
        if F.is_zero(qy):
            return y
        # q(x + t y) = qx + 2 t bxy + t^2 qy
        disc = F.sub(F.mul(bxy, bxy), F.mul(qx, qy))
        s = sqrt(F, disc)
        if s is None:
            continue
        t = F.div(F.sub(s, bxy), qy)
        v = tuple(F.add(a, F.mul(t, b)) for a, b in zip(x, y))
        if any(not F.is_zero(a) for a in v):
            return v
    return None


def isotropic_subspace(Q: Quadric, k: int, rng: Random | None = None,
                       seed: Sequence[Sequence] = ()) -> LinearSubspace:
    """A totally isotropic subspace of projective dimension k, grown one vector at a time.

    `seed` vectors (mutually orthogonal and isotropic) are used as a starting
    point; over Q they are required, as no isotropic vector search is done there.
    """
    F = Q.field
    rng = rng if rng is not None else Random(0)
    U = [tuple(F.coerce(x) for x in v) for v in seed]
    if U and not quadric_contains(Q, LinearSubspace.of(U, F)):
        raise ValueError("seed vectors do not span an isotropic subspace")
    if isinstance(F, RationalField):
        if len(U) >= k + 1:
            return LinearSubspace.of(U[: k + 1], F)
        raise ValueError("requires finite field or user-supplied seed vector")
    if k + 1 > max_isotropic_dim(Q):
        raise ValueError("no isotropic subspace of that dimension")
    while len(U) < k + 1:
        W = Q.orthogonal(U)
        # complement of U inside W
        comp = []
        cur = list(U)
        for w in W:
            if span_dimension(cur + [w], F) > len(cur):
                cur.append(w)
                comp.append(w)
        v = _isotropic_in_span(Q, comp, rng)
        if v is None:
            raise RuntimeError("isotropic vector search exhausted its retries")
        U.append(v)
    L = LinearSubspace.of(U, F)
    assert quadric_contains(Q, L)
    return L


def same_family(Q: Quadric, A: LinearSubspace, B: LinearSubspace) -> bool | None:
    """Ruling of two maximal isotropic subspaces of a smooth even-dimensional quadric.

    Same family iff dim(A ∩ B) has the parity of the half dimension. Returns
    None when the quadric is singular or the subspaces are not maximal.
    """
    n = Q.size
    if n % 2 or not Q.is_smooth() or A.dim != n // 2 or B.dim != n // 2:
        return None
    inter = len(A.intersect(B))
    return (inter - n // 2) % 2 == 0


# -- pencils -------------------------------------------------------------------

@dataclass(frozen=True)
class QuadricPencil:
    """Members M1 + t M2, with t = INFINITY meaning M2."""

    m1: ExactMatrix
    m2: ExactMatrix

    def __post_init__(self):
        if not (self.m1.is_symmetric() and self.m2.is_symmetric()):
            raise ValueError("pencil members must be symmetric")
        if self.m1.shape != self.m2.shape:
            raise ValueError("shape mismatch")

    @property
    def field(self) -> Field:
        return self.m1.field

    @property
    def size(self) -> int:
        return self.m1.nrows

    def member_matrix(self, t, field: Field | None = None) -> ExactMatrix:
        if t == INFINITY:
            return self.m2 if field is None else ExactMatrix(self.m2.rows, field)
        F = field or self.field
        t = F.coerce(t)
        return ExactMatrix([[F.add(F.coerce(a), F.mul(t, F.coerce(b))) for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.m1.rows, self.m2.rows)], F)

    def member(self, t) -> Quadric:
        return Quadric(self.member_matrix(t))

    def to_json(self) -> dict:
        return {"m1": self.m1.to_json(), "m2": self.m2.to_json()}

    @classmethod
    def from_json(cls, obj: dict, field: Field) -> "QuadricPencil":
        return cls(ExactMatrix([[field.from_json(x) for x in r] for r in obj["m1"]], field),
                   ExactMatrix([[field.from_json(x) for x in r] for r in obj["m2"]], field))


@dataclass
class PencilDiscriminant:
    poly: UniPoly
    roots: list  # (Root, member rank) pairs
    check_infinity: bool  # the binary form has a root at t = infinity
    rank_at_infinity: int | None
    squarefree: bool
    smooth: bool

    def to_json(self) -> dict:
        F = self.poly.field
        return {
            "discriminant": self.poly.to_json(),
            "degree": self.poly.degree,
            "roots": [{"value": r.field.to_json(r.value), "field": r.field.spec(),
                       "orbit_degree": r.degree, "multiplicity": r.multiplicity, "rank": k}
                      for r, k in self.roots],
            "check_infinity": self.check_infinity,
            "rank_at_infinity": self.rank_at_infinity,
            "squarefree": self.squarefree,
            "smooth": self.smooth,
        }


def pencil_discriminant(pencil: QuadricPencil, rng: Random | None = None) -> PencilDiscriminant:
    """det(M1 + t M2) with its roots and the member ranks there.

    The pencil is smooth (its base locus a smooth complete intersection) when
    the binary form det(s M1 + t M2) of degree N+1 is squarefree and every
    singular member has corank exactly one. A missing top degree is a root
    at t = infinity, which is checked through M2.
    """
    F = pencil.field
    n = pencil.size
    xs = [F.from_int(i) for i in range(n + 1)]
    if hasattr(F, "p") and F.p <= n:
        raise ValueError("field too small to interpolate the discriminant")
    ys = [determinant(pencil.member_matrix(x)) for x in xs]
    disc = interpolate(xs, ys, F)
    if disc.is_zero():
        raise ValueError("degenerate pencil")
    inf_mult = n - disc.degree
    check_inf = inf_mult > 0
    rank_inf = rank(pencil.m2) if check_inf else None
    roots = []
    if not isinstance(F, RationalField) and disc.degree > 0:
        for r in uni_roots(disc, max_ext_degree=disc.degree, rng=rng):
            roots.append((r, rank(pencil.member_matrix(r.value, r.field))))
    sqf = inf_mult <= 1 and (disc.degree == 0 or squarefree(disc))
    ranks_ok = all(k == n - 1 for _, k in roots) and (rank_inf is None or rank_inf == n - 1)
    return PencilDiscriminant(disc, roots, check_inf, rank_inf, sqf, sqf and ranks_ok)


def residual_quadric(pencil: QuadricPencil, plane: LinearSubspace):
    """The unique pencil parameter t (or INFINITY) whose member contains the plane."""
    F = pencil.field
    Q1, Q2 = Quadric(pencil.m1), Quadric(pencil.m2)
    B = plane.basis
    rows = [[Q1.b(B[i], B[j]), Q2.b(B[i], B[j])] for i in range(len(B)) for j in range(i, len(B))]
    sols = nullspace_basis(ExactMatrix(rows, F))
    if len(sols) != 1:
        raise ValueError("plane not residual to pencil / Z not smooth")
    s, t = sols[0]
    if F.is_zero(s):
        return INFINITY
    return F.div(t, s)


# -- Grassmannians -------------------------------------------------------------

@dataclass(frozen=True)
class PluckerModel:
    k: int
    m: int

    def __post_init__(self):
        if not 1 <= self.k < self.m:
            raise ValueError("need 1 <= k < m")

    @property
    def subsets(self) -> list[tuple[int, ...]]:
        return list(itertools.combinations(range(self.m), self.k))

    @property
    def ambient_dim(self) -> int:
        return len(self.subsets) - 1

    @property
    def dimension(self) -> int:
        return self.k * (self.m - self.k)

    def index(self, subset: Sequence[int]) -> int:
        return self.subsets.index(tuple(sorted(subset)))


def _signed(coords: dict, idx: Sequence[int], F: Field):
    """Plücker coordinate for an index sequence, with sign from sorting; zero on repeats."""
    if len(set(idx)) < len(idx):
        return F.zero()
    perm = sorted(range(len(idx)), key=lambda a: idx[a])
    inversions = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
    v = coords[tuple(sorted(idx))]
    return F.neg(v) if inversions % 2 else v


def plucker_relations_hold(model: PluckerModel, coords: Sequence, F: Field) -> bool:
    """All quadratic Plücker relations sum_l (-1)^l p_{I+j_l} p_{J-j_l} = 0."""
    c = dict(zip(model.subsets, coords))
    for I in itertools.combinations(range(model.m), model.k - 1):
        for J in itertools.combinations(range(model.m), model.k + 1):
            acc = F.zero()
            for l, j in enumerate(J):
                term = F.mul(_signed(c, list(I) + [j], F), _signed(c, [x for x in J if x != j], F))
                acc = F.sub(acc, term) if l % 2 else F.add(acc, term)
            if not F.is_zero(acc):
                return False
    return True


def plucker_coordinates(model: PluckerModel, rows: Sequence[Sequence], F: Field) -> list:
    """k x k minors of a k x m matrix, lex order of column subsets (not normalized)."""
    out = []
    for cols in model.subsets:
        out.append(determinant(ExactMatrix([[r[c] for c in cols] for r in rows], F)))
    return out


def plucker_embed(model: PluckerModel, subspace: LinearSubspace) -> ProjectivePoint:
    if subspace.dim != model.k or subspace.ambient != model.m:
        raise ValueError("wrong dimension")
    F = subspace.field
    coords = plucker_coordinates(model, subspace.basis, F)
    assert plucker_relations_hold(model, coords, F)
    return ProjectivePoint.of(coords, F)


# -- Segre products ------------------------------------------------------------

@dataclass(frozen=True)
class SegreModel:
    dims: tuple

    def __post_init__(self):
        if len(self.dims) < 2:
            raise ValueError("need at least two factors")

    @property
    def index_tuples(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*[range(m + 1) for m in self.dims]))

    @property
    def ambient_dim(self) -> int:
        out = 1
        for m in self.dims:
            out *= m + 1
        return out - 1


def segre_coordinates(model: SegreModel, vectors: Sequence[Sequence], F: Field) -> list:
    if len(vectors) != len(model.dims):
        raise ValueError("arity mismatch")
    if any(len(v) != m + 1 for v, m in zip(vectors, model.dims)):
        raise ValueError("dimension mismatch")
    out = []
    for idx in model.index_tuples:
        x = F.one()
        for v, i in zip(vectors, idx):
            x = F.mul(x, v[i])
        out.append(x)
    return out


def segre_embed(model: SegreModel, pts: Sequence) -> ProjectivePoint:
    if len(pts) != len(model.dims):
        raise ValueError("arity mismatch")
    F = pts[0].field if isinstance(pts[0], ProjectivePoint) else None
    vecs = [p.coords if isinstance(p, ProjectivePoint) else tuple(p) for p in pts]
    if F is None:
        raise ValueError("points must carry a field")
    return ProjectivePoint.of(segre_coordinates(model, vecs, F), F)


def segre_minors_vanish(model: SegreModel, coords: Sequence, F: Field) -> bool:
    """Every flattening of the coordinate tensor has rank <= 1."""
    c = dict(zip(model.index_tuples, coords))
    for f, m in enumerate(model.dims):
        rest = list(itertools.product(*[range(mm + 1) for j, mm in enumerate(model.dims) if j != f]))

        def entry(i, r):
            return c[tuple(r[:f]) + (i,) + tuple(r[f:])]

        for i1, i2 in itertools.combinations(range(m + 1), 2):
            for r1, r2 in itertools.combinations(rest, 2):
                if not F.is_zero(F.sub(F.mul(entry(i1, r1), entry(i2, r2)),
                                       F.mul(entry(i1, r2), entry(i2, r1)))):
                    return False
    return True
