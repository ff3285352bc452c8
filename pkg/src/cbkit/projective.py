"""Points of P^N, monomial bases, homogeneous forms and evaluation matrices.

Monomial order: graded-lex with x_0 > x_1 > ... ; within a fixed degree the
exponent vectors are listed in descending lexicographic order, so for three
variables and degree 2 the columns are x0^2, x0x1, x0x2, x1^2, x1x2, x2^2.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from math import comb
from random import Random
from typing import Iterable, Sequence

import numpy as np

from .fields import Field, PrimeField, field_from_spec
from .linalg import ExactMatrix, nullspace_basis, _use_numpy

MONOMIAL_ORDER = "graded-lex, x0 > x1 > ... (descending lexicographic within a degree)"


def normalize_coords(coords: Sequence, field: Field) -> tuple:
    """Scale so that the first nonzero coordinate is 1."""
    coords = [field.coerce(c) for c in coords]
    for c in coords:
        if not field.is_zero(c):
            inv = field.inv(c)
            return tuple(field.mul(x, inv) for x in coords)
    raise ValueError("the zero vector is not a projective point")


@dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple
    field: Field = dc_field(compare=False, hash=False)

    @classmethod
    def of(cls, coords: Sequence, field: Field) -> "ProjectivePoint":
        return cls(normalize_coords(coords, field), field)

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    def to_json(self):
        return [self.field.to_json(c) for c in self.coords]


class PointSet:
    """Finite set of distinct points in P^N over one field."""

    def __init__(self, points: Iterable, field: Field):
        pts = []
        for p in points:
            if isinstance(p, ProjectivePoint):
                pts.append(ProjectivePoint(normalize_coords(p.coords, field), field))
            else:
                pts.append(ProjectivePoint.of(p, field))
        if not pts:
            raise ValueError("empty point set")
        dims = {p.ambient_dim for p in pts}
        if len(dims) != 1:
            raise ValueError("points live in different ambient spaces")
        seen = {}
        for i, p in enumerate(pts):
            if p.coords in seen:
                raise ValueError(f"duplicate point: indices {seen[p.coords]} and {i}")
            seen[p.coords] = i
        self.points = tuple(pts)
        self.field = field
        self.ambient_dim = dims.pop()

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def without(self, i: int) -> "PointSet":
        return PointSet(self.points[:i] + self.points[i + 1:], self.field)

    def subset(self, idx: Iterable[int]) -> "PointSet":
        return PointSet([self.points[i] for i in idx], self.field)

    def coordinate_matrix(self) -> ExactMatrix:
        return ExactMatrix([p.coords for p in self.points], self.field)

    def transform(self, A: Sequence[Sequence]) -> "PointSet":
        """Apply x -> A x to every point (A invertible, (N+1)x(N+1))."""
        F = self.field
        return PointSet([[F.dot(row, p.coords) for row in A] for p in self.points], F)

    def to_json(self) -> dict:
        return {
            "field": self.field.spec(),
            "dim": self.ambient_dim,
            "points": [p.to_json() for p in self.points],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PointSet":
        F = field_from_spec(obj["field"])
        pts = [[F.from_json(c) for c in pt] for pt in obj["points"]]
        S = cls(pts, F)
        if "dim" in obj and int(obj["dim"]) != S.ambient_dim:
            raise ValueError("declared dim does not match coordinates")
        return S


@functools.lru_cache(maxsize=None)
def _monomials(num_vars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    if num_vars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in _monomials(num_vars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


class MonomialBasis:
    """Degree-m monomials in num_vars variables, in the fixed order above."""

    def __init__(self, num_vars: int, degree: int):
        if num_vars < 1 or degree < 0:
            raise ValueError("bad monomial basis parameters")
        self.num_vars = num_vars
        self.degree = degree
        self.monomials = _monomials(num_vars, degree)
        self.index = {e: i for i, e in enumerate(self.monomials)}

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    @property
    def expected_size(self) -> int:
        return comb(self.num_vars - 1 + self.degree, self.degree)


def monomial_values(coords: Sequence, basis: MonomialBasis, field: Field) -> list:
    powers = []
    for c in coords:
        row = [field.one()]
        for _ in range(basis.degree):
            row.append(field.mul(row[-1], c))
        powers.append(row)
    out = []
    for e in basis.monomials:
        v = field.one()
        for j, k in enumerate(e):
            if k:
                v = field.mul(v, powers[j][k])
        out.append(v)
    return out


def exponent_key(e: Sequence[int]) -> str:
    return ",".join(str(x) for x in e)


def parse_exponent_key(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(","))


class HomogeneousForm:
    """Homogeneous polynomial; zero coefficients are never stored."""

    def __init__(self, num_vars: int, degree: int, coeffs: dict, field: Field):
        clean = {}
        for e, c in coeffs.items():
            e = tuple(e)
            if len(e) != num_vars or sum(e) != degree or min(e) < 0:
                raise ValueError(f"exponent {e} does not fit ({num_vars} vars, degree {degree})")
            c = field.coerce(c)
            if not field.is_zero(c):
                clean[e] = field.add(clean.get(e, field.zero()), c)
                if field.is_zero(clean[e]):
                    del clean[e]
        self.num_vars = num_vars
        self.degree = degree
        self.coeffs = clean
        self.field = field

    @classmethod
    def from_vector(cls, basis: MonomialBasis, vec: Sequence, field: Field) -> "HomogeneousForm":
        return cls(basis.num_vars, basis.degree, dict(zip(basis.monomials, vec)), field)

    @classmethod
    def linear(cls, coeffs: Sequence, field: Field) -> "HomogeneousForm":
        n = len(coeffs)
        return cls(n, 1, {tuple(int(i == j) for i in range(n)): c for j, c in enumerate(coeffs)}, field)

    @classmethod
    def from_gram(cls, G: ExactMatrix) -> "HomogeneousForm":
        """x^T G x."""
        F = G.field
        n = G.nrows
        coeffs = {}
        for i in range(n):
            for j in range(n):
                e = [0] * n
                e[i] += 1
                e[j] += 1
                e = tuple(e)
                coeffs[e] = F.add(coeffs.get(e, F.zero()), G[i, j])
        return cls(n, 2, coeffs, F)

    def gram(self) -> ExactMatrix:
        """Symmetric matrix of a quadratic form (needs odd characteristic)."""
        if self.degree != 2:
            raise ValueError("gram matrix needs a quadratic form")
        F = self.field
        n = self.num_vars
        half = F.inv(F.from_int(2))
        G = [[F.zero()] * n for _ in range(n)]
        for e, c in self.coeffs.items():
            idx = [i for i in range(n) for _ in range(e[i])]
            i, j = idx
            if i == j:
                G[i][i] = F.add(G[i][i], c)
            else:
                h = F.mul(c, half)
                G[i][j] = F.add(G[i][j], h)
                G[j][i] = F.add(G[j][i], h)
        return ExactMatrix(G, F)

    def is_zero(self) -> bool:
        return not self.coeffs

    def vector(self, basis: MonomialBasis | None = None) -> list:
        basis = basis or MonomialBasis(self.num_vars, self.degree)
        F = self.field
        return [self.coeffs.get(e, F.zero()) for e in basis.monomials]

    def __call__(self, coords: Sequence):
        return evaluate_form(self, coords)

    def __add__(self, other):
        F = self.field
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = F.add(out.get(e, F.zero()), c)
        return HomogeneousForm(self.num_vars, self.degree, out, F)

    def __mul__(self, other):
        F = self.field
        if not isinstance(other, HomogeneousForm):
            c = F.coerce(other)
            return HomogeneousForm(self.num_vars, self.degree, {e: F.mul(c, v) for e, v in self.coeffs.items()}, F)
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(out.get(e, F.zero()), F.mul(c1, c2))
        return HomogeneousForm(self.num_vars, self.degree + other.degree, out, F)

    def normalized(self) -> "HomogeneousForm":
        """Scale so that the first nonzero coefficient (monomial order) is 1."""
        F = self.field
        for e in MonomialBasis(self.num_vars, self.degree).monomials:
            if e in self.coeffs:
                return self * F.inv(self.coeffs[e])
        return self

    def substitute(self, A: Sequence[Sequence]) -> "HomogeneousForm":
        """The form y -> f(A y), A of shape (num_vars) x (new number of variables)."""
        F = self.field
        ny = len(A[0])
        lin = [HomogeneousForm.linear(row, F) for row in A]
        one = HomogeneousForm(ny, 0, {(0,) * ny: F.one()}, F)
        total = HomogeneousForm(ny, self.degree, {}, F)
        for e, c in self.coeffs.items():
            term = one
            for j, k in enumerate(e):
                for _ in range(k):
                    term = term * lin[j]
            total = total + term * c
        return total

    def to_json(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "degree": self.degree,
            "coeffs": {exponent_key(e): self.field.to_json(c)
                       for e, c in sorted(self.coeffs.items(), key=lambda t: t[0], reverse=True)},
        }

    @classmethod
    def from_json(cls, obj: dict, field: Field) -> "HomogeneousForm":
        coeffs = {parse_exponent_key(k): field.from_json(v) for k, v in obj["coeffs"].items()}
        return cls(int(obj["num_vars"]), int(obj["degree"]), coeffs, field)

    def __repr__(self):
        return f"HomogeneousForm(vars={self.num_vars}, deg={self.degree}, terms={len(self.coeffs)})"


class MultiHomogeneousForm:
    """Form on P^{m_1} x ... x P^{m_k}; keys are tuples of per-factor exponent tuples."""

    def __init__(self, dims: Sequence[int], degrees: Sequence[int], coeffs: dict, field: Field):
        self.dims = tuple(dims)
        self.degrees = tuple(degrees)
        if len(self.dims) != len(self.degrees):
            raise ValueError("one degree per factor")
        clean = {}
        for key, c in coeffs.items():
            key = tuple(tuple(b) for b in key)
            if len(key) != len(self.dims):
                raise ValueError("one exponent block per factor")
            for b, m, d in zip(key, self.dims, self.degrees):
                if len(b) != m + 1 or sum(b) != d:
                    raise ValueError(f"exponent block {b} does not fit P^{m} degree {d}")
            c = field.coerce(c)
            if not field.is_zero(c):
                clean[key] = c
        self.coeffs = clean
        self.field = field

    def __call__(self, points: Sequence[Sequence]):
        return evaluate_form(self, points)

    def specialize(self, factor: int, coords: Sequence) -> "MultiHomogeneousForm":
        """Substitute a point for one factor, leaving a form on the others."""
        F = self.field
        out = {}
        for key, c in self.coeffs.items():
            v = c
            for x, k in zip(coords, key[factor]):
                if k:
                    v = F.mul(v, F.pow(x, k))
            rest = key[:factor] + key[factor + 1:]
            out[rest] = F.add(out.get(rest, F.zero()), v)
        dims = self.dims[:factor] + self.dims[factor + 1:]
        degs = self.degrees[:factor] + self.degrees[factor + 1:]
        return MultiHomogeneousForm(dims, degs, out, F)

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "degrees": list(self.degrees),
            "coeffs": {"|".join(exponent_key(b) for b in key): self.field.to_json(c)
                       for key, c in sorted(self.coeffs.items(), reverse=True)},
        }


def evaluate_form(f, P, field: Field | None = None):
    """Value of a (multi)homogeneous form at a point (or tuple of points).

    `field` (default: the point's field, else the form's) may be an extension
    of the form's field; coefficients are coerced into it.
    """
    if field is None:
        field = P.field if isinstance(P, ProjectivePoint) else f.field
    F = field
    lift = (lambda c: c) if F is f.field else F.coerce
    if isinstance(f, MultiHomogeneousForm):
        pts = [p.coords if isinstance(p, ProjectivePoint) else tuple(p) for p in P]
        if len(pts) != len(f.dims) or any(len(c) != m + 1 for c, m in zip(pts, f.dims)):
            raise ValueError("dimension mismatch")
        acc = F.zero()
        for key, c in f.coeffs.items():
            v = lift(c)
            for coords, block in zip(pts, key):
                for x, k in zip(coords, block):
                    if k:
                        v = F.mul(v, F.pow(x, k))
            acc = F.add(acc, v)
        return acc
    coords = P.coords if isinstance(P, ProjectivePoint) else tuple(P)
    if len(coords) != f.num_vars:
        raise ValueError("dimension mismatch")
    acc = F.zero()
    for e, c in f.coeffs.items():
        v = lift(c)
        for x, k in zip(coords, e):
            if k:
                v = F.mul(v, F.pow(x, k))
        acc = F.add(acc, v)
    return acc


@functools.lru_cache(maxsize=None)
def _exponent_array(num_vars: int, degree: int) -> np.ndarray:
    return np.array(_monomials(num_vars, degree), dtype=np.int64).reshape(-1, num_vars)


def evaluation_array(S: PointSet, m: int) -> np.ndarray:
    """Evaluation matrix as an int64 array (prime fields only)."""
    p = S.field.p
    n = S.ambient_dim + 1
    exps = _exponent_array(n, m)  # C x n
    pts = np.array([pt.coords for pt in S.points], dtype=np.int64)
    powers = np.empty((m + 1,) + pts.shape, dtype=np.int64)
    powers[0] = 1
    for k in range(1, m + 1):
        powers[k] = (powers[k - 1] * pts) % p
    out = powers[exps[:, 0], :, 0].T
    for j in range(1, n):
        out = (out * powers[exps[:, j], :, j].T) % p
    return out


def evaluation_matrix(S: PointSet, m: int) -> ExactMatrix:
    """Row per point, column per degree-m monomial, evaluated at normalized coordinates."""
    if m < 0:
        raise ValueError("degree must be >= 0")
    F = S.field
    if _use_numpy(F):
        return ExactMatrix(evaluation_array(S, m).tolist(), F)
    basis = MonomialBasis(S.ambient_dim + 1, m)
    return ExactMatrix([monomial_values(p.coords, basis, F) for p in S.points], F, len(basis))


def random_form(num_vars: int, degree: int, field: Field, rng: Random) -> HomogeneousForm:
    basis = MonomialBasis(num_vars, degree)
    return HomogeneousForm.from_vector(basis, [field.random(rng) for _ in basis.monomials], field)


def random_multiform(dims: Sequence[int], degrees: Sequence[int], field: Field, rng: Random) -> MultiHomogeneousForm:
    bases = [MonomialBasis(m + 1, d).monomials for m, d in zip(dims, degrees)]
    coeffs = {}

    def rec(i, prefix):
        if i == len(bases):
            coeffs[prefix] = field.random(rng)
            return
        for e in bases[i]:
            rec(i + 1, prefix + (e,))

    rec(0, ())
    return MultiHomogeneousForm(dims, degrees, coeffs, field)


def _combine(vectors, coeffs, field):
    vec = [field.zero()] * len(vectors[0])
    for c, b in zip(coeffs, vectors):
        vec = [field.add(x, field.mul(c, y)) for x, y in zip(vec, b)]
    return vec


class ConstraintError(ValueError):
    pass


def random_hypersurface(N: int, d: int, constraints: Sequence = (), rng: Random | None = None,
                        field: Field | None = None, max_tries: int = 32) -> HomogeneousForm:
    """Random degree-d form on P^N subject to (point, "vanish" | "not-vanish") constraints.

    Coefficients are uniform on the linear space cut out by the vanishing
    constraints; draws violating a non-vanishing constraint are rejected.
    """
    rng = rng if rng is not None else Random(0)
    pts_v, pts_nv = [], []
    for pt, kind in constraints:
        coords = pt.coords if isinstance(pt, ProjectivePoint) else tuple(pt)
        if field is None and isinstance(pt, ProjectivePoint):
            field = pt.field
        if len(coords) != N + 1:
            raise ValueError("dimension mismatch")
        if kind in ("vanish", True):
            pts_v.append(coords)
        elif kind in ("not-vanish", "not_vanish", False):
            pts_nv.append(coords)
        else:
            raise ValueError(f"unknown constraint kind {kind!r}")
    if field is None:
        raise ValueError("field required")
    basis = MonomialBasis(N + 1, d)
    if pts_v:
        E = ExactMatrix([monomial_values(c, basis, field) for c in pts_v], field, len(basis))
        kernel = nullspace_basis(E)
    else:
        kernel = None
    if kernel is not None and not kernel:
        raise ConstraintError("unsatisfiable constraints")
    K = None
    if kernel is not None and _use_numpy(field) and len(kernel) * field.p * field.p < 2 ** 62:
        K = np.array(kernel, dtype=np.int64) % field.p
    for _ in range(max_tries):
        if kernel is None:
            vec = [field.random(rng) for _ in basis.monomials]
        elif K is not None:
            cs = np.array([field.random(rng) for _ in kernel], dtype=np.int64)
            vec = [int(x) for x in (cs @ K) % field.p]
        else:
            vec = _combine(kernel, [field.random(rng) for _ in kernel], field)
        f = HomogeneousForm.from_vector(basis, vec, field)
        if f.is_zero():
            continue
        if all(not field.is_zero(evaluate_form(f, c)) for c in pts_nv):
            return f
    raise ConstraintError(f"retry cap exceeded ({max_tries} draws)")
