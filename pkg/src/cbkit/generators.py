"""Random point configurations that often satisfy CB(m).

Random sets almost never satisfy a Cayley-Bacharach condition, so most
generators build sets from complete intersections and from rational fibers
of the projections in :mod:`cbkit.projections`.
"""

from __future__ import annotations

from random import Random
from typing import Callable

from .ambients import LinearSubspace
from .fields import PrimeField
from .linalg import ExactMatrix, nullspace_basis, rank
from .poly import UniPoly
from .projections import (NonGeneric, ProjectionSpec, _CARRIERS, build_ci22_plane,
                          build_grassmann_flag, build_quadric_double, build_quadric_line)
from .projective import HomogeneousForm, PointSet, evaluate_form, random_form

GENERATORS = ("ci_fibers", "projection_fibers", "random_filtered")


def _vec(n, F, rng):
    while True:
        v = [F.random(rng) for _ in range(n)]
        if any(v):
            return v


def random_embedding(k: int, n: int, F: PrimeField, rng: Random) -> list[list[int]]:
    """An injective linear map F^k -> F^n as an n x k matrix."""
    while True:
        A = [[F.random(rng) for _ in range(k)] for _ in range(n)]
        if rank(ExactMatrix(A, F)) == k:
            return A


def _apply(A, v, F):
    return [F.dot(row, v) for row in A]


def _params(count: int, F: PrimeField, rng: Random, allow_infinity: bool = True) -> list:
    """Distinct points of P^1 as pairs (s, t)."""
    pool = list(range(F.p)) + (["inf"] if allow_infinity else [])
    chosen = rng.sample(pool, count)
    return [(0, 1) if c == "inf" else (1, c) for c in chosen]


def _to_space(plane_pts, N, F, rng):
    """Embed points of P^2 (coordinate triples) into P^N by a random injective map."""
    A = random_embedding(3, N + 1, F, rng)
    return [_apply(A, p, F) for p in plane_pts]


def gen_line(m, N, F, rng):
    r = rng.randint(max(2, m), 2 * m + 3)
    A, B = _vec(N + 1, F, rng), _vec(N + 1, F, rng)
    if rank(ExactMatrix([A, B], F)) < 2:
        return None
    return [[F.add(F.mul(s, a), F.mul(t, b)) for a, b in zip(A, B)] for s, t in _params(r, F, rng)]


def gen_two_lines(m, N, F, rng):
    a = rng.randint(max(1, m - 1), m + 2)
    b = rng.randint(max(1, m - 1), m + 2)
    skew = N >= 3 and rng.random() < 0.5
    if skew:
        vs = [_vec(N + 1, F, rng) for _ in range(4)]
        if rank(ExactMatrix(vs, F)) < 4:
            return None
        A, B, C, D = vs
    else:
        P = _vec(3, F, rng)
        B, D = _vec(3, F, rng), _vec(3, F, rng)
        if rank(ExactMatrix([P, B, D], F)) < 3:
            return None
        A = C = P  # the lines meet at P
        emb = random_embedding(3, N + 1, F, rng)
        A, B, C, D = (_apply(emb, v, F) for v in (A, B, C, D))
    shared = not skew and rng.random() < 0.3
    pts = []
    for (X, Y), k in (((A, B), a), ((C, D), b)):
        params = [pr for pr in _params(k + 1, F, rng, allow_infinity=True) if pr != (1, 0)][:k]
        pts += [[F.add(F.mul(s, x), F.mul(t, y)) for x, y in zip(X, Y)] for s, t in params]
    if shared:
        pts.append(list(A))
    return pts


def gen_conic(m, N, F, rng):
    r = rng.randint(max(3, 2 * m - 1), 2 * m + 3)
    plane = [[F.mul(s, s), F.mul(s, t), F.mul(t, t)] for s, t in _params(r, F, rng)]
    return _to_space(plane, N, F, rng)


def gen_conic_chords(m, N, F, rng):
    """Complete intersection of a conic with k chords: 2k points, CB(k-1)."""
    k = rng.randint(max(1, m), m + 2)
    params = _params(2 * k, F, rng)
    plane = [[F.mul(s, s), F.mul(s, t), F.mul(t, t)] for s, t in params]
    if rng.random() < 0.2:
        plane.append(_vec(3, F, rng))  # perturb: one point off the conic
    return _to_space(plane, N, F, rng)


def gen_grid(m, N, F, rng):
    """Intersection of a general lines with b general lines in a plane: CB(a+b-3)."""
    a = rng.randint(1, m + 2)
    b = max(1, m + 3 - a + rng.randint(-1, 1))
    if a * b > 3 * m + 6:
        return None
    L = [_vec(3, F, rng) for _ in range(a)]
    M = [_vec(3, F, rng) for _ in range(b)]
    pts = []
    for l in L:
        for mm in M:
            p = [F.sub(F.mul(l[1], mm[2]), F.mul(l[2], mm[1])),
                 F.sub(F.mul(l[2], mm[0]), F.mul(l[0], mm[2])),
                 F.sub(F.mul(l[0], mm[1]), F.mul(l[1], mm[0]))]
            if not any(p):
                return None
            pts.append(p)
    if rng.random() < 0.2 and len(pts) > 2:
        pts.pop(rng.randrange(len(pts)))  # perturb: drop one point
    return _to_space(pts, N, F, rng)


def gen_line_plus(m, N, F, rng):
    base = gen_line(m, N, F, rng)
    if base is None:
        return None
    return base + [_vec(N + 1, F, rng) for _ in range(rng.randint(1, 2))]


CI_FAMILIES: dict[str, Callable] = {
    "line": gen_line,
    "two_lines": gen_two_lines,
    "conic": gen_conic,
    "conic_chords": gen_conic_chords,
    "grid": gen_grid,
    "line_plus": gen_line_plus,
}


def gen_random(m, N, F, rng, r_min=2, r_max=12):
    r = rng.randint(max(2, r_min), max(2, r_max))
    return [_vec(N + 1, F, rng) for _ in range(r)]


# -- rational fibers of projections ---------------------------------------------

class FiberFactory:
    """Projection instances reused across trials; each trial picks a fresh carrier and X."""

    def __init__(self, F: PrimeField, seed: int):
        self.F = F
        self.seed = seed
        self._specs: dict = {}

    def spec(self, kind: str) -> ProjectionSpec:
        if kind not in self._specs:
            rng = Random(f"fiber-factory/{self.seed}/{kind}")
            if kind == "quadric_line":
                self._specs[kind] = build_quadric_line(2, 2, self.F, rng)
            elif kind == "quadric_double":
                self._specs[kind] = build_quadric_double(1, 2, self.F, rng)
            elif kind == "ci22_plane":
                self._specs[kind] = build_ci22_plane(2, self.F, rng)
            elif kind == "grassmann_flag":
                self._specs[kind] = build_grassmann_flag(2, 4, 2, self.F, rng)
            else:
                raise ValueError(kind)
        return self._specs[kind]

    def fiber(self, m: int, rng: Random, r_max: int, build_form: bool = False):
        """A fiber made rational by choosing X through chosen points of a carrier.

        Returns (points, info). The points are the fiber, over the target of
        the carrier, of the projection restricted to X = ambient ∩ V(f) where
        f = (product of linear forms cutting the carrier exactly in the chosen
        points) + (random forms in the ideal of the carrier). Building f is
        only needed to certify the construction, so it is optional.
        """
        F = self.F
        kind = rng.choice(["quadric_line", "quadric_double", "ci22_plane", "grassmann_flag"])
        spec = self.spec(kind)
        try:
            carrier = _CARRIERS[kind](spec, rng)
        except NonGeneric:
            return None
        e = carrier.degree
        d = rng.randint(1, max(1, r_max // e))
        base = carrier.base
        pool = [t for t in range(F.p) if base.degree <= 0 or not F.is_zero(base(t))]
        ts = rng.sample(pool, e * d)
        pts = [tuple(c(t) for c in carrier.coords) for t in ts]
        info = {"kind": kind, "d": d, "params": ts}
        if build_form:
            f = carrier_form(carrier, ts, F, rng)
            if f is None:
                return None
            info["form"] = f
            info["carrier"] = carrier
        return [list(p) for p in pts], info


def _carrier_ideal_linear(carrier, F) -> list[list]:
    """Linear forms vanishing on the carrier (coefficient vectors)."""
    rows = [[c.coeffs[k] if k < len(c.coeffs) else F.zero() for c in carrier.coords]
            for k in range(carrier.degree + 1)]
    return nullspace_basis(ExactMatrix(rows, F))


def carrier_form(carrier, ts, F: PrimeField, rng: Random):
    """A degree-d form whose restriction to the carrier vanishes exactly at parameters ts."""
    e = carrier.degree
    d = len(ts) // e
    n = len(carrier.coords)
    groups = [ts[e * i: e * (i + 1)] for i in range(d)]
    f = None
    for grp in groups:
        pts = [[c(t) for c in carrier.coords] for t in grp]
        ker = nullspace_basis(ExactMatrix(pts, F))
        for _ in range(16):
            w = [F.zero()] * n
            for k in ker:
                c = F.random(rng)
                w = [F.add(x, F.mul(c, y)) for x, y in zip(w, k)]
            restricted = sum_restrict(w, carrier, F)
            if restricted.degree == e:  # no extra root, not identically zero, nothing at infinity
                break
        else:
            return None
        L = HomogeneousForm.linear(w, F)
        f = L if f is None else f * L
    lin = _carrier_ideal_linear(carrier, F)
    for eq in lin:
        f = f + HomogeneousForm.linear(eq, F) * random_form(n, d - 1, F, rng)
    return f


def sum_restrict(w, carrier, F) -> UniPoly:
    acc = UniPoly.zero(F)
    for c, g in zip(w, carrier.coords):
        if not F.is_zero(c):
            acc = acc + g.scale(c)
    return acc
