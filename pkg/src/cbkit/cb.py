"""The Cayley-Bacharach condition CB(m) for finite point sets.

A set S satisfies CB(m) when every degree-m form vanishing on all but one
point of S vanishes on the last one as well. With E the evaluation matrix of
S in degree m, dropping point p lowers rank(E) exactly when row p is outside
the span of the other rows, i.e. when no left-kernel vector of E is nonzero at
p. The fast path therefore needs one elimination of [E | I]; the naive path
recomputes rank(E minus row p) for every p.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from random import Random
from typing import Sequence

import numpy as np

from .fields import Field, PrimeField
from .linalg import (ExactMatrix, gauss_rank, left_kernel_basis, left_kernel_numpy,
                     nullspace_basis, rank, _use_numpy)
from .poly import UniPoly, irreducible_factors
from .projective import (HomogeneousForm, MonomialBasis, PointSet, evaluate_form,
                         evaluation_array, evaluation_matrix, monomial_values)

log = logging.getLogger(__name__)


class CbUndefined(ValueError):
    pass


@dataclass
class CbReport:
    m: int
    holds: bool
    ranks: list[tuple[int, int]]  # per point: (rank of full set, rank without the point)
    failing_point: int | None = None
    witness_form: HomogeneousForm | None = None

    @property
    def r(self) -> int:
        return len(self.ranks)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "holds": self.holds,
            "failing_point": self.failing_point,
            "ranks": [list(t) for t in self.ranks],
            "witness_form": None if self.witness_form is None else self.witness_form.to_json(),
        }


def _check_args(S: PointSet, m: int):
    if len(S) < 2:
        raise CbUndefined("CB undefined for fewer than two points")
    if m < 0:
        raise ValueError("degree must be >= 0")


def _witness(S: PointSet, m: int, i: int) -> HomogeneousForm:
    """A degree-m form through S minus point i that misses point i."""
    F = S.field
    basis = MonomialBasis(S.ambient_dim + 1, m)
    E = evaluation_matrix(S.without(i), m) if len(S) > 1 else None
    row = monomial_values(S[i].coords, basis, F)
    for v in nullspace_basis(E):
        if not F.is_zero(F.dot(row, v)):
            f = HomogeneousForm.from_vector(basis, v, F).normalized()
            assert not F.is_zero(evaluate_form(f, S[i].coords))
            return f
    raise AssertionError("no separating form although the rank dropped")


def cb_check(S: PointSet, m: int, method: str = "fast", witness: bool = True) -> CbReport:
    """Decide CB(m) for S via the rank criterion."""
    _check_args(S, m)
    r = len(S)
    F = S.field
    if method == "fast":
        if _use_numpy(F):
            K = left_kernel_numpy(evaluation_array(S, m), F.p)
            support = np.any(K != 0, axis=0) if K.size else np.zeros(r, dtype=bool)
            kdim = K.shape[0]
        else:
            K = left_kernel_basis(evaluation_matrix(S, m))
            support = [any(not F.is_zero(k[i]) for k in K) for i in range(r)]
            kdim = len(K)
        full = r - kdim
        ranks = [(full, full if support[i] else full - 1) for i in range(r)]
    elif method == "naive":
        basis = MonomialBasis(S.ambient_dim + 1, m)
        rows = [monomial_values(p.coords, basis, F) for p in S.points]
        full = gauss_rank(ExactMatrix(rows, F, len(basis)))
        ranks = [(full, gauss_rank(ExactMatrix(rows[:i] + rows[i + 1:], F, len(basis)))) for i in range(r)]
    else:
        raise ValueError(f"unknown method {method!r}")
    failing = next((i for i, (a, b) in enumerate(ranks) if a != b), None)
    report = CbReport(m=m, holds=failing is None, ranks=ranks, failing_point=failing)
    if failing is not None and witness:
        report.witness_form = _witness(S, m, failing)
    return report


def cb_check_oracle(S: PointSet, m: int) -> bool:
    """Literal definition: every form through S minus p must vanish at p."""
    _check_args(S, m)
    F = S.field
    basis = MonomialBasis(S.ambient_dim + 1, m)
    rows = [monomial_values(p.coords, basis, F) for p in S.points]
    for i in range(len(S)):
        others = ExactMatrix(rows[:i] + rows[i + 1:], F, len(basis))
        for v in nullspace_basis(others):
            if not F.is_zero(F.dot(rows[i], v)):
                return False
    return True


class MonotonicityError(AssertionError):
    pass


def max_cb_degree(S: PointSet, m_max: int) -> int | None:
    """Largest m <= m_max with CB(m), or None."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    for m in range(m_max, 0, -1):
        if cb_check(S, m, witness=False).holds:
            for lower in range(m - 1, 0, -1):
                if not cb_check(S, lower, witness=False).holds:
                    raise MonotonicityError(f"CB({m}) holds but CB({lower}) fails")
            return m
    return None


# -- Galois-stable point sets --------------------------------------------------

@dataclass
class OrbitCbReport:
    """CB verdict for the points gamma(alpha), f(alpha) = 0, over the algebraic closure."""

    m: int
    holds: bool
    num_points: int
    rank_full: int
    orbit_degrees: list[int]
    orbit_holds: list[bool]
    failing_orbit: int | None = None

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "holds": self.holds,
            "num_points": self.num_points,
            "rank_full": self.rank_full,
            "orbit_degrees": self.orbit_degrees,
            "orbit_holds": self.orbit_holds,
            "failing_orbit": self.failing_orbit,
        }


def _power_sums(f_monic: Sequence[int], count: int, p: int) -> list[int]:
    D = len(f_monic) - 1
    c = f_monic
    ps = [D % p]
    for k in range(1, count):
        s = 0
        for i in range(1, min(k - 1, D) + 1):
            s += c[D - i] * ps[k - i]
        if k <= D:
            s += k * c[D - k]
        ps.append((-s) % p)
    return ps


def cb_check_orbits(f: UniPoly, coords: Sequence[UniPoly], m: int, rng: Random | None = None) -> OrbitCbReport:
    """CB(m) for {gamma(alpha) : f(alpha) = 0}, gamma = coords, using only F_p linear algebra.

    With A = F_p[t]/(f) (f squarefree), the left kernel of the evaluation
    matrix over the closure is spanned by Galois-fixed vectors, and those are
    the a in A with Tr(a * M(gamma)) = 0 for every degree-m monomial M. The
    point gamma(alpha) is covered by the kernel iff some basis element a is
    nonzero modulo the irreducible factor of f vanishing at alpha.
    The parametrisation must be injective on the roots of f.
    """
    F = f.field
    if not isinstance(F, PrimeField):
        raise ValueError("orbit check needs a prime field")
    if m < 0:
        raise ValueError("degree must be >= 0")
    p = F.p
    f = f.monic()
    D = f.degree
    if D < 2:
        raise CbUndefined("CB undefined for fewer than two points")
    if D * p * p >= 2 ** 62:
        raise ValueError("orbit check works in int64; need deg(f) * p^2 < 2^62")
    # multiplication-by-t companion matrix on the basis 1, t, ..., t^{D-1}
    C = np.zeros((D, D), dtype=np.int64)
    for k in range(D - 1):
        C[k + 1, k] = 1
    C[:, D - 1] = [(-c) % p for c in f.coeffs[:D]]
    tpow = [np.eye(D, dtype=np.int64)]
    maxdeg = max(g.degree for g in coords)
    for _ in range(maxdeg):
        tpow.append((C @ tpow[-1]) % p)
    mults = []
    for g in coords:
        Mg = np.zeros((D, D), dtype=np.int64)
        for i, a in enumerate(g.coeffs):
            if a:
                Mg = (Mg + a * tpow[i]) % p
        mults.append(Mg)
    n = len(coords)
    one = np.zeros(D, dtype=np.int64)
    one[0] = 1
    cache = {(0,) * n: one}

    def vec(e):
        if e in cache:
            return cache[e]
        j = next(i for i, k in enumerate(e) if k)
        parent = e[:j] + (e[j] - 1,) + e[j + 1:]
        v = (mults[j] @ vec(parent)) % p
        cache[e] = v
        return v

    basis = MonomialBasis(n, m)
    A = np.stack([vec(e) for e in basis.monomials], axis=1)  # D x C
    ps = _power_sums(list(f.coeffs), 2 * D - 1, p)
    H = np.array([[ps[i + j] for j in range(D)] for i in range(D)], dtype=np.int64)
    T = (H @ A) % p
    K = left_kernel_numpy(T, p)
    factors = irreducible_factors(f, rng)
    orbit_holds = []
    for h, _ in factors:
        covered = False
        for row in K:
            a = UniPoly([int(x) for x in row], F)
            if not (a % h).is_zero():
                covered = True
                break
        orbit_holds.append(covered)
    failing = next((i for i, ok in enumerate(orbit_holds) if not ok), None)
    return OrbitCbReport(
        m=m,
        holds=failing is None,
        num_points=D,
        rank_full=D - K.shape[0],
        orbit_degrees=[h.degree for h, _ in factors],
        orbit_holds=orbit_holds,
        failing_orbit=failing,
    )
