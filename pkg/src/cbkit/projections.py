"""Projections from linear centers and their degrees, computed on fiber carriers.

Every construction reduces to the same recipe: pick a general fiber, which
lies on an explicit rational curve gamma(t) (a line or a conic, the
"carrier"), restrict the equation of X to gamma, and discard the roots
sitting over the base locus of the projection. The degree of what is left
is the degree of the map; its roots are the fiber.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field as dc_field
from math import lcm
from random import Random
from typing import Any, Callable, Sequence

from .ambients import (INFINITY, LinearSubspace, PluckerModel, Quadric, QuadricPencil, SegreModel,
                       isotropic_subspace, max_isotropic_dim, pencil_discriminant,
                       plucker_coordinates, plucker_relations_hold, quadric_contains,
                       residual_quadric, same_family, segre_coordinates)
from .cb import CbReport, OrbitCbReport, cb_check, cb_check_orbits
from .fields import Field, GF, PrimeField, sqrt
from .linalg import ExactMatrix, nullspace_basis, rank, span_dimension
from .poly import UniPoly, interpolate, irreducible_factors, poly_gcd, roots_in_field, squarefree, supported_part
from .projective import (HomogeneousForm, MonomialBasis, MultiHomogeneousForm, PointSet,
                         evaluate_form, random_form, random_multiform)

log = logging.getLogger(__name__)

KINDS = ("quadric_line", "quadric_double", "ci22_plane", "grassmann_flag", "product_point")
DEFAULT_RETRIES = 32


class NonGeneric(Exception):
    """A random choice hit a special position; the caller resamples."""


class GenericityError(RuntimeError):
    """Retry cap exceeded; the message names the condition that kept failing."""


@dataclass
class ProjectionSpec:
    kind: str
    field: PrimeField
    params: dict
    ambient: Any
    center: Any
    form: Any  # HomogeneousForm or MultiHomogeneousForm defining X inside the ambient
    adjunction: int  # omega_X = O(adjunction); fibers satisfy CB(adjunction)
    info: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        F = self.field
        center = self.center
        if isinstance(center, LinearSubspace):
            center = center.to_json()
        elif isinstance(center, tuple):
            center = [c.to_json() if hasattr(c, "to_json") else [F.to_json(x) for x in c] for c in center]
        elif isinstance(center, dict):
            center = {k: (v.to_json() if hasattr(v, "to_json") else v) for k, v in center.items()}
        return {
            "kind": self.kind,
            "params": self.params,
            "adjunction": self.adjunction,
            "center": center,
            "info": self.info,
        }


@dataclass
class Carrier:
    """A rational curve t -> coords(t) containing one fiber."""

    coords: list[UniPoly]
    degree: int  # degree of the parametrization (1 = line, 2 = conic)
    base: UniPoly  # its roots are the finite parameters over the base locus
    infinity_is_base: bool
    restrict: Callable[[Any], Any]  # parameter value -> value of the equation of X
    target: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coords": [c.to_json() for c in self.coords],
            "base": self.base.to_json(),
            "infinity_is_base": self.infinity_is_base,
        }


@dataclass
class FiberSample:
    target: dict
    carrier: Carrier
    restricted: UniPoly
    fiber: UniPoly  # monic; roots = fiber parameters
    base_locus_drop: int
    transverse: bool
    residue_degrees: list[int] = dc_field(default_factory=list)
    points: PointSet | None = None
    cb_verdict: CbReport | OrbitCbReport | None = None
    cb_status: str = "unchecked"  # unchecked | holds | fails | vacuous

    @property
    def degree(self) -> int:
        return self.fiber.degree

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "carrier": self.carrier.to_json(),
            "restricted_degree": self.restricted.degree,
            "fiber_polynomial": self.fiber.to_json(),
            "degree": self.degree,
            "base_locus_drop": self.base_locus_drop,
            "transverse": self.transverse,
            "residue_degrees": self.residue_degrees,
            "points": None if self.points is None else self.points.to_json(),
            "cb_status": self.cb_status,
            "cb_verdict": None if self.cb_verdict is None else self.cb_verdict.to_json(),
        }


@dataclass
class DegreeReport:
    kind: str
    symbolic_degree: int
    base_locus_drop: int
    total_length: int
    case_tag: str | None
    samples: list[FiberSample]
    resampled: int = 0
    info: dict = dc_field(default_factory=dict)

    def to_json(self, with_samples: bool = False) -> dict:
        out = {
            "kind": self.kind,
            "symbolic_degree": self.symbolic_degree,
            "base_locus_drop": self.base_locus_drop,
            "total_length": self.total_length,
            "case_tag": self.case_tag,
            "num_samples": len(self.samples),
            "resampled": self.resampled,
            "info": self.info,
        }
        if with_samples:
            out["samples"] = [s.to_json() for s in self.samples]
        return out


# -- helpers -------------------------------------------------------------------

def _require_prime_field(F: Field) -> PrimeField:
    if not isinstance(F, PrimeField):
        raise ValueError("projection sampling needs a finite prime field")
    return F


def _line_param(P0: Sequence, R: Sequence, F: Field) -> list[UniPoly]:
    return [UniPoly([a, b], F) for a, b in zip(P0, R)]


def _restrict_values(carrier_eval: Callable, degree: int, F: Field) -> UniPoly:
    if F.p <= degree:
        raise ValueError("field too small to interpolate the restricted equation")
    xs = [F.from_int(i) for i in range(degree + 1)]
    return interpolate(xs, [carrier_eval(x) for x in xs], F)


def _eval_coords(coords: Sequence[UniPoly], t) -> tuple:
    return tuple(c(t) for c in coords)


def _linear_restriction(eq: Sequence, coords: Sequence[UniPoly], F: Field) -> UniPoly:
    acc = UniPoly.zero(F)
    for c, g in zip(eq, coords):
        if not F.is_zero(c):
            acc = acc + g.scale(c)
    return acc


def _base_from_equations(eqs: Sequence[Sequence], coords: Sequence[UniPoly], F: Field) -> UniPoly:
    """Monic gcd of linear equations restricted to the carrier (1 if they have no common root)."""
    g = UniPoly.zero(F)
    for eq in eqs:
        g = poly_gcd(g, _linear_restriction(eq, coords, F))
    if g.is_zero():
        raise NonGeneric("carrier lies inside the center")
    return g


def _quadric_restriction(Q: Quadric, coords: Sequence[UniPoly]) -> UniPoly:
    F = Q.field
    acc = UniPoly.zero(F)
    n = len(coords)
    for i in range(n):
        for j in range(n):
            g = Q.gram[i, j]
            if not F.is_zero(g):
                acc = acc + (coords[i] * coords[j]).scale(g)
    return acc


def random_symmetric(n: int, F: Field, rng: Random) -> ExactMatrix:
    rows = [[F.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = F.random(rng)
    return ExactMatrix(rows, F)


def random_smooth_quadric(n_vars: int, F: Field, rng: Random, min_isotropic: int = 0,
                          retries: int = DEFAULT_RETRIES) -> Quadric:
    for _ in range(retries):
        Q = Quadric(random_symmetric(n_vars, F, rng))
        if Q.is_smooth() and max_isotropic_dim(Q) >= min_isotropic:
            return Q
    raise GenericityError("no smooth quadric with the required isotropic subspaces found")


def _random_vector(n: int, F: Field, rng: Random) -> tuple:
    while True:
        v = tuple(F.random(rng) for _ in range(n))
        if any(v):
            return v


def _conic_point(G: Quadric, rng: Random, retries: int = 256) -> tuple:
    """A rational point on the conic of a 3x3 gram matrix (finite field, odd p)."""
    F = G.field
    for _ in range(retries):
        a = _random_vector(3, F, rng)
        d = _random_vector(3, F, rng)
        qa, qd, bad = G.q(a), G.q(d), G.b(a, d)
        if F.is_zero(qd):
            return d
        disc = F.sub(F.mul(bad, bad), F.mul(qa, qd))
        s = sqrt(F, disc)
        if s is None:
            continue
        lam = F.div(F.sub(s, bad), qd)
        v = tuple(F.add(x, F.mul(lam, y)) for x, y in zip(a, d))
        if any(v):
            return v
    raise GenericityError("no rational point on the residual conic")


# -- constructions ---------------------------------------------------------------

def build_quadric_line(n: int, d: int, F: Field, rng: Random) -> ProjectionSpec:
    """X = Q ∩ V(f) in P^{n+2}, projected from a line on Q."""
    F = _require_prime_field(F)
    N = n + 2
    Q = random_smooth_quadric(N + 1, F, rng, min_isotropic=2)
    for _ in range(DEFAULT_RETRIES):
        ell = isotropic_subspace(Q, 1, rng)
        f = random_form(N + 1, d, F, rng)
        coords = _line_param(ell.basis[0], ell.basis[1], F)
        if not _restrict_values(lambda t: evaluate_form(f, _eval_coords(coords, t)), d, F).is_zero():
            break
    else:
        raise GenericityError("line contained in X")
    return ProjectionSpec("quadric_line", F, {"n": n, "d": d}, Q, ell, f, d - n - 1)


def build_quadric_double(n: int, d: int, F: Field, rng: Random) -> ProjectionSpec:
    """X = Q ∩ V(f) in P^{n+2} (n odd), mapped along lines joining two disjoint maximal isotropics."""
    F = _require_prime_field(F)
    if n % 2 == 0 or n < 1:
        raise ValueError("the double projection needs odd n")
    N = n + 2
    h = (N + 1) // 2
    Q = random_smooth_quadric(N + 1, F, rng, min_isotropic=h)
    for _ in range(DEFAULT_RETRIES):
        V = isotropic_subspace(Q, h - 1, rng)
        W = isotropic_subspace(Q, h - 1, rng)
        if not V.intersect(W):
            break
    else:
        raise GenericityError("no pair of disjoint maximal isotropic subspaces")
    f = random_form(N + 1, d, F, rng)
    parity = same_family(Q, V, W)
    return ProjectionSpec("quadric_double", F, {"n": n, "d": d}, Q, (V, W), f, d - n - 1,
                          info={"same_family": parity})


CI22_CASES = ("generic", "line", "conic")


def build_ci22_plane(d: int, F: Field, rng: Random, case: str = "generic") -> ProjectionSpec:
    """X = Q1 ∩ Q2 ∩ V(g) in P^5 projected from a plane P lying on Q1.

    case "line" makes P ∩ X contain a line, case "conic" makes it contain the
    conic P ∩ Q2; both are built in coordinates where P = <e0, e1, e2>.
    """
    F = _require_prime_field(F)
    if case not in CI22_CASES:
        raise ValueError(f"unknown case {case!r}")
    half = F.inv(F.from_int(2))
    for _ in range(DEFAULT_RETRIES):
        M1 = random_symmetric(6, F, rng).rows
        M2 = random_symmetric(6, F, rng).rows
        M1 = [list(r) for r in M1]
        M2 = [list(r) for r in M2]
        for i in range(3):
            for j in range(3):
                M1[i][j] = F.zero()
        if case == "line":
            for i in range(3):
                for j in range(3):
                    M2[i][j] = F.zero()
            M2[0][1] = M2[1][0] = half  # Q2 restricted to P is x0*x1
        elif case == "conic":
            S = random_symmetric(3, F, rng)
            if rank(S) < 3:
                continue
            for i in range(3):
                for j in range(3):
                    M2[i][j] = S[i, j]
        pencil = QuadricPencil(ExactMatrix(M1, F), ExactMatrix(M2, F))
        try:
            disc = pencil_discriminant(pencil, rng)
        except ValueError:
            continue
        if disc.smooth:
            break
    else:
        raise GenericityError("no smooth pencil found")
    P = LinearSubspace.of([[int(i == j) for i in range(6)] for j in range(3)], F)
    t = residual_quadric(pencil, P)
    if case == "generic":
        g = random_form(6, d, F, rng)
    else:
        xs = [HomogeneousForm.linear([int(i == j) for i in range(6)], F) for j in range(6)]
        if case == "line":
            lead = xs[0]
        else:
            lead = Quadric(ExactMatrix([[M2[i][j] if i < 3 and j < 3 else 0 for j in range(6)]
                                        for i in range(6)], F)).form()
        g = lead * random_form(6, d - lead.degree, F, rng)
        for i in (3, 4, 5):
            g = g + xs[i] * random_form(6, d - 1, F, rng)
    return ProjectionSpec("ci22_plane", F, {"d": d, "case": case}, pencil, P, g, d - 2,
                          info={"plane_member": F.to_json(t) if t != INFINITY else INFINITY,
                                "discriminant": disc.poly.to_json()})


def build_grassmann_flag(k: int, m: int, d: int, F: Field, rng: Random) -> ProjectionSpec:
    """X = Gr(k, m) ∩ V(f) in Plücker space, projected using a vector λ and a hyperplane W."""
    F = _require_prime_field(F)
    model = PluckerModel(k, m)
    if k in (1, m - 1):
        raise ValueError("the flag projection needs 1 < k < m-1")
    for _ in range(DEFAULT_RETRIES):
        lam = _random_vector(m, F, rng)
        w_eq = _random_vector(m, F, rng)
        if not F.is_zero(F.dot(lam, w_eq)):
            break
    W = LinearSubspace.of(nullspace_basis(ExactMatrix([w_eq], F)), F)
    f = random_form(model.ambient_dim + 1, d, F, rng)
    return ProjectionSpec("grassmann_flag", F, {"k": k, "m": m, "d": d}, model,
                          {"lambda": [F.to_json(x) for x in lam], "W": W, "w_equation": list(w_eq)},
                          f, d - m)


def build_product_point(dims: Sequence[int], degrees: Sequence[int], factor: int, F: Field,
                        rng: Random) -> ProjectionSpec:
    """X = V(f) in P^{m_1} x ... x P^{m_k}, projected from a point of one factor."""
    F = _require_prime_field(F)
    dims, degrees = tuple(dims), tuple(degrees)
    model = SegreModel(dims)
    if len(dims) != len(degrees) or not 0 <= factor < len(dims):
        raise ValueError("bad factor data")
    f = random_multiform(dims, degrees, F, rng)
    for _ in range(DEFAULT_RETRIES):
        x = _random_vector(dims[factor] + 1, F, rng)
        if not f.specialize(factor, x).is_zero():
            break
    else:
        raise GenericityError("slice through the center lies in X")
    adj = min(dj - mj - 1 for dj, mj in zip(degrees, dims))
    return ProjectionSpec("product_point", F, {"dims": list(dims), "degrees": list(degrees), "factor": factor},
                          model, {"factor": factor, "x": [F.to_json(c) for c in x]}, f, adj)


def build_projection(kind: str, params: dict, F: Field, rng: Random) -> ProjectionSpec:
    if kind == "quadric_line":
        return build_quadric_line(int(params["n"]), int(params["d"]), F, rng)
    if kind == "quadric_double":
        return build_quadric_double(int(params["n"]), int(params["d"]), F, rng)
    if kind == "ci22_plane":
        return build_ci22_plane(int(params["d"]), F, rng, params.get("case", "generic"))
    if kind == "grassmann_flag":
        return build_grassmann_flag(int(params["k"]), int(params["m"]), int(params["d"]), F, rng)
    if kind == "product_point":
        return build_product_point(params["dims"], params["degrees"], int(params.get("factor", 0)), F, rng)
    raise ValueError(f"unknown projection kind {kind!r}")


# -- carriers ------------------------------------------------------------------

def _carrier_quadric_line(spec: ProjectionSpec, rng: Random) -> Carrier:
    Q: Quadric = spec.ambient
    ell: LinearSubspace = spec.center
    F = spec.field
    e, f_ = ell.basis
    u = _random_vector(Q.size, F, rng)
    if ell.contains(u):
        raise NonGeneric("plane through the line is degenerate")
    # Q restricted to <e, f, u> is c * (2 b(e,u) a0 + 2 b(f,u) a1 + q(u) c)
    lin = [F.mul(F.from_int(2), Q.b(e, u)), F.mul(F.from_int(2), Q.b(f_, u)), Q.q(u)]
    if all(F.is_zero(x) for x in lin):
        raise NonGeneric("plane lies on the quadric")
    ker = nullspace_basis(ExactMatrix([lin], F))
    plane = [e, f_, u]
    resid = [tuple(F.sum(F.mul(c, v[i]) for c, v in zip(k, plane)) for i in range(Q.size)) for k in ker]
    # general parametrization of the residual line
    a, b = [F.random(rng) for _ in range(2)], [F.random(rng) for _ in range(2)]
    if F.is_zero(F.sub(F.mul(a[0], b[1]), F.mul(a[1], b[0]))):
        raise NonGeneric("degenerate parametrization")
    P0 = [F.add(F.mul(a[0], x), F.mul(a[1], y)) for x, y in zip(*resid)]
    R = [F.add(F.mul(b[0], x), F.mul(b[1], y)) for x, y in zip(*resid)]
    coords = _line_param(P0, R, F)
    base = _base_from_equations(ell.equations(), coords, F)
    return Carrier(coords, 1, base, False, lambda t: evaluate_form(spec.form, _eval_coords(coords, t)),
                   target={"plane_vector": [F.to_json(x) for x in u]})


def _carrier_quadric_double(spec: ProjectionSpec, rng: Random) -> Carrier:
    Q: Quadric = spec.ambient
    V, W = spec.center
    F = spec.field
    v = V.random_vector(rng)
    Wv = [w for w in W.intersect(LinearSubspace.of(Q.orthogonal([v]), F))]
    if not Wv:
        raise NonGeneric("W meets the orthogonal of v trivially")
    w = LinearSubspace.of(Wv, F).random_vector(rng)
    coords = _line_param(v, w, F)
    base = UniPoly.x(F)  # t = 0 is the point v of V; t = infinity is w in W
    return Carrier(coords, 1, base, True, lambda t: evaluate_form(spec.form, _eval_coords(coords, t)),
                   target={"v": [F.to_json(x) for x in v], "w": [F.to_json(x) for x in w]})


def _carrier_ci22(spec: ProjectionSpec, rng: Random) -> Carrier:
    pencil: QuadricPencil = spec.ambient
    P: LinearSubspace = spec.center
    F = spec.field
    t = residual_quadric(pencil, P)
    Qt = pencil.member(t)
    u = _random_vector(6, F, rng)
    if P.contains(u):
        raise NonGeneric("3-plane through P is degenerate")
    space = list(P.basis) + [u]
    two = F.from_int(2)
    lin = [F.mul(two, Qt.b(p, u)) for p in P.basis] + [Qt.q(u)]
    if all(F.is_zero(x) for x in lin):
        raise NonGeneric("3-plane lies on the quadric containing P")
    ker = nullspace_basis(ExactMatrix([lin], F))
    Pp = [tuple(F.sum(F.mul(c, v[i]) for c, v in zip(k, space)) for i in range(6)) for k in ker]
    while True:
        s = F.random(rng)
        if t == INFINITY or s != t:
            break
    Qs = pencil.member(s)
    G = Quadric(ExactMatrix([[Qs.b(a, b) for b in Pp] for a in Pp], F))
    if not G.is_smooth():
        raise NonGeneric("residual conic is singular")
    o = _conic_point(G, rng)
    D0, D1 = _random_vector(3, F, rng), _random_vector(3, F, rng)
    if span_dimension([o, D0, D1], F) < 3:
        raise NonGeneric("conic parametrization is degenerate")
    # gamma(tau) = q(d) o - 2 b(o, d) d with d = D0 + tau D1, in plane coordinates
    d = [UniPoly([a, b], F) for a, b in zip(D0, D1)]
    Gm = G.gram
    qd = UniPoly.zero(F)
    bod = UniPoly.zero(F)
    for i in range(3):
        for j in range(3):
            if not F.is_zero(Gm[i, j]):
                qd = qd + (d[i] * d[j]).scale(Gm[i, j])
                bod = bod + d[j].scale(F.mul(o[i], Gm[i, j]))
    plane_param = [qd.scale(o[i]) - (bod * d[i]).scale(two) for i in range(3)]
    coords = [UniPoly.zero(F)] * 6
    for c, vec in zip(plane_param, Pp):
        coords = [acc + c.scale(vec[i]) for i, acc in enumerate(coords)]
    if any(g.degree > 2 for g in coords) or all(g.is_zero() for g in coords):
        raise NonGeneric("conic parametrization is degenerate")
    for M in (Quadric(pencil.m1), Quadric(pencil.m2)):
        assert _quadric_restriction(M, coords).is_zero(), "carrier conic leaves the base locus of the pencil"
    base = _base_from_equations(P.equations(), coords, F)
    return Carrier(coords, 2, base, False, lambda x: evaluate_form(spec.form, _eval_coords(coords, x)),
                   target={"plane_vector": [F.to_json(x) for x in u], "s": F.to_json(s),
                           "conic_point": [F.to_json(x) for x in o]})


def _carrier_grassmann(spec: ProjectionSpec, rng: Random) -> Carrier:
    model: PluckerModel = spec.ambient
    F = spec.field
    k, m = model.k, model.m
    lam = [F.from_json(x) for x in spec.center["lambda"]]
    W: LinearSubspace = spec.center["W"]
    w_eq = spec.center["w_equation"]
    Lam = LinearSubspace.of([_random_vector(m, F, rng) for _ in range(k)], F)
    U = Lam.intersect(W)
    if len(U) != k - 1:
        raise NonGeneric("k-plane meets W in the wrong dimension")
    b = next(v for v in Lam.basis if not F.is_zero(F.dot(w_eq, v)))
    if span_dimension(U + [b, lam], F) != k + 1:
        raise NonGeneric("λ lies in the chosen k-plane")
    P0 = plucker_coordinates(model, U + [b], F)
    P1 = plucker_coordinates(model, U + [lam], F)
    coords = _line_param(P0, P1, F)
    for tt in range(3):
        assert plucker_relations_hold(model, _eval_coords(coords, F.from_int(tt)), F)
        row = [F.add(x, F.mul(F.from_int(tt), y)) for x, y in zip(b, lam)]
        direct = plucker_coordinates(model, U + [row], F)
        assert list(direct) == list(_eval_coords(coords, F.from_int(tt))), "carrier is not affine-linear"
    # b + t λ lies in W at t_W = -w(b) / w(λ); t = infinity is the flag through λ
    tW = F.neg(F.div(F.dot(w_eq, b), F.dot(w_eq, lam)))
    base = UniPoly([F.neg(tW), F.one()], F)
    return Carrier(coords, 1, base, True, lambda t: evaluate_form(spec.form, _eval_coords(coords, t)),
                   target={"k_plane": Lam.to_json()})


def _carrier_product(spec: ProjectionSpec, rng: Random) -> Carrier:
    model: SegreModel = spec.ambient
    F = spec.field
    i = spec.center["factor"]
    x = [F.from_json(c) for c in spec.center["x"]]
    others = [_random_vector(mj + 1, F, rng) for mj in model.dims]
    r = _random_vector(model.dims[i] + 1, F, rng)
    if span_dimension([r, x], F) < 2:
        raise NonGeneric("line through the center is degenerate")
    line = _line_param(r, x, F)  # t = infinity is the center x
    factors = [[UniPoly.constant(c, F) for c in others[j]] if j != i else line for j in range(len(model.dims))]
    coords = []
    for idx in model.index_tuples:
        g = UniPoly.constant(F.one(), F)
        for j, a in enumerate(idx):
            g = g * factors[j][a]
        coords.append(g)

    def restrict(t):
        pts = [others[j] if j != i else tuple(F.add(a, F.mul(t, b)) for a, b in zip(r, x))
               for j in range(len(model.dims))]
        return evaluate_form(spec.form, pts)

    return Carrier(coords, 1, UniPoly.constant(F.one(), F), True, restrict,
                   target={"others": [[F.to_json(c) for c in o] for j, o in enumerate(others) if j != i],
                           "line_point": [F.to_json(c) for c in r]})


_CARRIERS = {
    "quadric_line": _carrier_quadric_line,
    "quadric_double": _carrier_quadric_double,
    "ci22_plane": _carrier_ci22,
    "grassmann_flag": _carrier_grassmann,
    "product_point": _carrier_product,
}


def _form_degree(spec: ProjectionSpec) -> int:
    if spec.kind == "product_point":
        return spec.params["degrees"][spec.params["factor"]]
    return spec.form.degree


def _ambient_checks(spec: ProjectionSpec, carrier: Carrier):
    if spec.kind in ("quadric_line", "quadric_double"):
        assert _quadric_restriction(spec.ambient, carrier.coords).is_zero(), "carrier leaves the quadric"


def sample_fiber(spec: ProjectionSpec, rng: Random) -> FiberSample:
    """One general fiber; raises NonGeneric if the random choices were special."""
    F = spec.field
    carrier = _CARRIERS[spec.kind](spec, rng)
    _ambient_checks(spec, carrier)
    total = carrier.degree * _form_degree(spec)
    G = _restrict_values(carrier.restrict, total, F)
    if G.is_zero():
        raise NonGeneric("carrier contained in X")
    deficiency = total - G.degree
    if deficiency and not carrier.infinity_is_base:
        raise NonGeneric("carrier point at infinity lies on X")
    base_part = supported_part(G, carrier.base) if carrier.base.degree > 0 else UniPoly.constant(F.one(), F)
    fiber = (G // base_part).monic()
    drop = base_part.degree + deficiency
    transverse = fiber.degree >= 1 and squarefree(fiber)
    return FiberSample(target=carrier.target, carrier=carrier, restricted=G, fiber=fiber,
                       base_locus_drop=drop, transverse=transverse)


def _collect(spec: ProjectionSpec, count: int, rng: Random, retries: int,
             accept: Callable[[FiberSample], bool] = lambda s: True):
    samples = []
    failures = Counter()
    attempts = 0
    while len(samples) < count:
        if attempts >= count + retries:
            cond = failures.most_common(1)[0][0] if failures else "unknown"
            raise GenericityError(f"retry cap exceeded; failing condition: {cond}")
        attempts += 1
        try:
            s = sample_fiber(spec, rng)
        except NonGeneric as exc:
            failures[str(exc)] += 1
            continue
        if not accept(s):
            failures["sample rejected"] += 1
            continue
        samples.append(s)
    return samples, attempts - count


def projection_degree(spec: ProjectionSpec, samples: int = 10, rng: Random | None = None,
                      retries: int = DEFAULT_RETRIES) -> DegreeReport:
    """Degree of the projection, stable across `samples` independent general fibers.

    The degree shared by most samples is taken as the general one; samples
    disagreeing with it are special and get replaced, never averaged in.
    """
    rng = rng if rng is not None else Random(0)
    batch, resampled = _collect(spec, samples, rng, retries)
    mode = Counter(s.degree for s in batch).most_common(1)[0][0]
    good = [s for s in batch if s.degree == mode]
    if len(good) < samples:
        extra, more = _collect(spec, samples - len(good), rng, retries, lambda s: s.degree == mode)
        resampled += more + (samples - len(good))
        good += extra
    total = good[0].carrier.degree * _form_degree(spec)
    drop = good[0].base_locus_drop
    assert all(s.base_locus_drop == drop for s in good), "base locus drop varies between general samples"
    case_tag = None
    if spec.kind == "ci22_plane":
        case_tag = {0: "generic", 1: "contains_line", 2: "contains_conic"}.get(drop, f"drop_{drop}")
        built = spec.params.get("case", "generic")
        expected = {"generic": "generic", "line": "contains_line", "conic": "contains_conic"}[built]
        if built != "generic":
            assert case_tag == expected, f"constructed {built} case measured as {case_tag}"
    return DegreeReport(spec.kind, mode, drop, total, case_tag, good, resampled, info=dict(spec.info))


def degree_quadric_line(spec, samples=10, rng=None) -> DegreeReport:
    _expect(spec, "quadric_line")
    return projection_degree(spec, samples, rng)


def degree_quadric_double(spec, samples=10, rng=None) -> DegreeReport:
    _expect(spec, "quadric_double")
    return projection_degree(spec, samples, rng)


def degree_ci22_plane(spec, samples=10, rng=None) -> DegreeReport:
    _expect(spec, "ci22_plane")
    return projection_degree(spec, samples, rng)


def degree_grassmann_flag(spec, samples=10, rng=None) -> DegreeReport:
    _expect(spec, "grassmann_flag")
    return projection_degree(spec, samples, rng)


def degree_product_point(spec, samples=10, rng=None) -> DegreeReport:
    _expect(spec, "product_point")
    return projection_degree(spec, samples, rng)


def _expect(spec, kind):
    if spec.kind != kind:
        raise ValueError(f"expected a {kind} projection, got {spec.kind}")


# -- CB on fibers --------------------------------------------------------------

def fiber_points(sample: FiberSample, F: PrimeField, rng: Random | None = None) -> PointSet:
    """The fiber as explicit points over the splitting field of the fiber polynomial."""
    L = lcm(*sample.residue_degrees) if sample.residue_degrees else 1
    K = GF(F.p, L)
    roots = roots_in_field(sample.fiber, K, rng)
    pts = [[c.evaluate_in(K, a) for c in sample.carrier.coords] for a in roots]
    return PointSet(pts, K)


def check_fiber_cb(sample: FiberSample, m: int, F: PrimeField, explicit_max_degree: int = 2,
                   rng: Random | None = None) -> FiberSample:
    """Run CB(m) on a transverse fiber.

    Galois orbits are handled over F_p; when the splitting field has degree
    at most `explicit_max_degree` the points are also listed there and
    checked directly, and the two verdicts must agree.
    """
    rng = rng if rng is not None else Random(0)
    factors = irreducible_factors(sample.fiber, rng)
    sample.residue_degrees = [h.degree for h, _ in factors]
    if not sample.transverse:
        raise ValueError("CB is only checked on transverse fibers")
    if m < 0:
        sample.cb_status = "vacuous"
        return sample
    if sample.fiber.degree < 2:
        raise ValueError("fiber too small for CB")
    rep = cb_check_orbits(sample.fiber, sample.carrier.coords, m, rng)
    sample.cb_verdict = rep
    sample.cb_status = "holds" if rep.holds else "fails"
    if lcm(*sample.residue_degrees) <= explicit_max_degree:
        S = fiber_points(sample, F, rng)
        assert len(S) == sample.fiber.degree
        direct = cb_check(S, m)
        assert direct.holds == rep.holds, "orbit and explicit CB verdicts disagree"
        sample.points = S
        sample.cb_verdict = direct
    return sample


def verify_fiber_cb(spec: ProjectionSpec, sample_count: int = 20, rng: Random | None = None,
                    retries: int = DEFAULT_RETRIES, explicit_max_degree: int = 2) -> list[FiberSample]:
    """Sample transverse fibers and check CB at the adjunction degree on each."""
    rng = rng if rng is not None else Random(0)
    general = projection_degree(spec, 10, rng, retries).symbolic_degree
    try:
        samples, _ = _collect(spec, sample_count, rng, retries,
                              lambda s: s.transverse and s.degree == general)
    except GenericityError as exc:
        raise GenericityError(f"no transverse sample found ({exc})") from exc
    for s in samples:
        check_fiber_cb(s, spec.adjunction, spec.field, explicit_max_degree, rng)
        if s.cb_status == "holds":
            assert s.degree >= spec.adjunction + 2, "CB fiber smaller than m+2"
    return samples
