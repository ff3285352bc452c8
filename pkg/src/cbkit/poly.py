"""Univariate polynomials over an exact field, with root finding over finite fields.

Factoring follows the usual pipeline: squarefree decomposition, distinct-degree
splitting, then Cantor-Zassenhaus equal-degree splitting driven by a caller
supplied ``random.Random``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from random import Random
from typing import Any, Sequence

from .fields import Field, GF, PrimeField, ExtensionField


class UniPoly:
    """Immutable polynomial, coefficients lowest degree first, no trailing zeros."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Sequence, field: Field, *, normalize: bool = True):
        if normalize:
            c = [field.coerce(x) for x in coeffs]
            while c and field.is_zero(c[-1]):
                c.pop()
            coeffs = c
        self.coeffs = tuple(coeffs)
        self.field = field

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, field):
        return cls((), field, normalize=False)

    @classmethod
    def constant(cls, c, field):
        return cls([c], field)

    @classmethod
    def x(cls, field):
        return cls([field.zero(), field.one()], field, normalize=False)

    @classmethod
    def from_roots(cls, roots, field):
        out = cls.constant(field.one(), field)
        for r in roots:
            out = out * cls([field.neg(r), field.one()], field)
        return out

    # -- basic properties -----------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero()

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero()

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)}, {self.field!r})"

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        inv = self.field.inv(self.lead())
        F = self.field
        return UniPoly([F.mul(c, inv) for c in self.coeffs], F, normalize=False)

    def scale(self, c) -> "UniPoly":
        F = self.field
        return UniPoly([F.mul(c, a) for a in self.coeffs], F)

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other):
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = F.add(out[i], y)
        return UniPoly(out, F)

    def __neg__(self):
        F = self.field
        return UniPoly([F.neg(c) for c in self.coeffs], F, normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return self.scale(self.field.coerce(other))
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly.zero(F)
        if isinstance(F, PrimeField):
            p = F.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return UniPoly([c % p for c in out], F, normalize=False)._trim()
        out = [F.zero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if F.is_zero(x):
                continue
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
        return UniPoly(out, F)

    __rmul__ = __mul__

    def _trim(self):
        c = list(self.coeffs)
        F = self.field
        while c and F.is_zero(c[-1]):
            c.pop()
        return UniPoly(c, F, normalize=False)

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        r = list(self.coeffs)
        db = other.degree
        if len(r) - 1 < db:
            return UniPoly.zero(F), self
        inv_lead = F.inv(other.lead())
        q = [F.zero()] * (len(r) - db)
        b = other.coeffs
        if isinstance(F, PrimeField):
            p = F.p
            for i in range(len(r) - 1, db - 1, -1):
                c = r[i] * inv_lead % p
                if c:
                    q[i - db] = c
                    for j in range(db + 1):
                        r[i - db + j] = (r[i - db + j] - c * b[j]) % p
        else:
            for i in range(len(r) - 1, db - 1, -1):
                c = F.mul(r[i], inv_lead)
                if not F.is_zero(c):
                    q[i - db] = c
                    for j in range(db + 1):
                        r[i - db + j] = F.sub(r[i - db + j], F.mul(c, b[j]))
        return UniPoly(q, F), UniPoly(r[:db], F)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int):
        result = UniPoly.constant(self.field.one(), self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def powmod(self, e: int, mod: "UniPoly") -> "UniPoly":
        result = UniPoly.constant(self.field.one(), self.field)
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def derivative(self) -> "UniPoly":
        F = self.field
        return UniPoly([F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:], F)

    def __call__(self, x):
        F = self.field
        acc = F.zero()
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def evaluate_in(self, field: Field, x):
        """Evaluate at x in a field containing this polynomial's coefficient field."""
        acc = field.zero()
        for c in reversed(self.coeffs):
            acc = field.add(field.mul(acc, x), field.coerce(c))
        return acc

    def to_json(self) -> list:
        return [self.field.to_json(c) for c in self.coeffs]


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def interpolate(xs: Sequence, ys: Sequence, field: Field) -> UniPoly:
    """Lagrange interpolation through distinct nodes."""
    F = field
    result = UniPoly.zero(F)
    n = len(xs)
    for i in range(n):
        if F.is_zero(ys[i]):
            continue
        num = UniPoly.constant(F.one(), F)
        den = F.one()
        for j in range(n):
            if j != i:
                num = num * UniPoly([F.neg(xs[j]), F.one()], F)
                den = F.mul(den, F.sub(xs[i], xs[j]))
        result = result + num.scale(F.mul(ys[i], F.inv(den)))
    return result


def supported_part(f: UniPoly, h: UniPoly) -> UniPoly:
    """Largest monic divisor of f whose roots are all roots of h (multiplicity kept)."""
    if f.is_zero():
        raise ValueError("identically zero")
    part = UniPoly.constant(f.field.one(), f.field)
    rest = f
    while True:
        g = poly_gcd(rest, h)
        if g.degree <= 0:
            return part
        part = part * g
        rest = rest // g


# -- squarefree structure -----------------------------------------------------

def squarefree(f: UniPoly) -> bool:
    """True iff gcd(f, f') is constant."""
    if f.is_zero():
        raise ValueError("identically zero")
    char = f.field.characteristic
    if char and char <= f.degree:
        raise ValueError("characteristic too small")
    return poly_gcd(f, f.derivative()).degree <= 0


def _pth_root(f: UniPoly) -> UniPoly:
    F = f.field
    p = F.characteristic
    coeffs = f.coeffs[::p]
    if isinstance(F, ExtensionField):
        coeffs = [F.pow(c, p ** (F.k - 1)) for c in coeffs]
    return UniPoly(coeffs, F)


def squarefree_decomposition(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Pairs (g, e) with f = lead * prod g^e, each g monic squarefree, pairwise coprime."""
    if f.is_zero():
        raise ValueError("identically zero")
    F = f.field
    p = F.characteristic
    out: dict[int, UniPoly] = {}

    def add(g, e):
        if g.degree > 0:
            out[e] = out[e] * g if e in out else g

    def rec(f, mult):
        f = f.monic()
        if f.degree <= 0:
            return
        df = f.derivative()
        if df.is_zero():
            rec(_pth_root(f), mult * p)
            return
        c = poly_gcd(f, df)
        w = f // c
        i = 1
        while w.degree > 0:
            y = poly_gcd(w, c)
            add(w // y, i * mult)
            w, c = y, c // y
            i += 1
        if c.degree > 0:
            # remaining factor is a p-th power
            rec(_pth_root(c), mult * p)

    rec(f, 1)
    return sorted(((g.monic(), e) for e, g in out.items()), key=lambda t: t[1])


def distinct_degree(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Split a monic squarefree f into products of irreducibles of equal degree."""
    F = f.field
    q = F.order
    if q is None:
        raise ValueError("root listing requires finite field")
    out = []
    x = UniPoly.x(F)
    h = x
    rest = f.monic()
    d = 0
    while rest.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(q, rest)
        g = poly_gcd(rest, h - x)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def equal_degree(f: UniPoly, d: int, rng: Random) -> list[UniPoly]:
    """Cantor-Zassenhaus: split monic squarefree f, all factors of degree d."""
    F = f.field
    q = F.order
    if f.degree == d:
        return [f.monic()]
    if f.degree <= 0:
        return []
    e = (q ** d - 1) // 2
    one = UniPoly.constant(F.one(), F)
    while True:
        a = UniPoly([F.random(rng) for _ in range(f.degree)], F)
        if a.degree <= 0:
            continue
        g = poly_gcd(a, f)
        if 0 < g.degree < f.degree:
            break
        g = poly_gcd(a.powmod(e, f) - one, f)
        if 0 < g.degree < f.degree:
            break
    return equal_degree(g, d, rng) + equal_degree(f // g, d, rng)


def irreducible_factors(f: UniPoly, rng: Random | None = None) -> list[tuple[UniPoly, int]]:
    """Monic irreducible factors with multiplicities, in a deterministic order."""
    if f.is_zero():
        raise ValueError("identically zero")
    if not f.field.is_finite:
        raise ValueError("root listing requires finite field")
    rng = rng if rng is not None else Random(0)
    out = []
    for g, e in squarefree_decomposition(f):
        for part, d in distinct_degree(g):
            for h in equal_degree(part, d, rng):
                out.append((h, e))
    out.sort(key=lambda t: (t[0].degree, t[1], [str(c) for c in t[0].coeffs]))
    return out


def roots_in_field(f: UniPoly, field: Field, rng: Random | None = None) -> list:
    """Distinct roots of f lying in ``field`` (f's coefficients must embed in it)."""
    if f.is_zero():
        raise ValueError("identically zero")
    rng = rng if rng is not None else Random(0)
    g = UniPoly([field.coerce(c) for c in f.coeffs], field)
    if g.degree <= 0:
        return []
    q = field.order
    x = UniPoly.x(field)
    lin = poly_gcd(g, x.powmod(q, g) - x)
    roots = []
    for h in equal_degree(lin, 1, rng) if lin.degree > 0 else []:
        roots.append(field.neg(h.coeffs[0]))
    return sorted(roots, key=_sort_key)


def _sort_key(a):
    return a if isinstance(a, int) else tuple(a)


@dataclass(frozen=True)
class Root:
    """A root of a polynomial over F_p, living in F_{p^degree} (canonical modulus)."""

    value: Any
    field: Field
    multiplicity: int
    degree: int
    orbit: int  # index of the irreducible factor it belongs to

    def to_json(self):
        return {
            "value": self.field.to_json(self.value),
            "field": self.field.spec(),
            "multiplicity": self.multiplicity,
            "degree": self.degree,
            "orbit": self.orbit,
        }


def uni_roots(f: UniPoly, max_ext_degree: int = 1, rng: Random | None = None) -> list[Root]:
    """All roots of f over extensions of degree <= max_ext_degree.

    Every conjugate is listed, so for ``max_ext_degree >= deg f`` the
    multiplicities sum to deg f, and summing ``multiplicity * degree`` over one
    representative per orbit also gives deg f.
    """
    if f.is_zero():
        raise ValueError("identically zero")
    F = f.field
    if not F.is_finite:
        raise ValueError("root listing requires finite field")
    rng = rng if rng is not None else Random(0)
    if isinstance(F, ExtensionField):
        # roots over the base extension only
        out = []
        for i, (h, e) in enumerate(irreducible_factors(f, rng)):
            if h.degree == 1:
                out.append(Root(F.neg(h.coeffs[0]), F, e, 1, i))
        return out
    out = []
    for i, (h, e) in enumerate(irreducible_factors(f, rng)):
        d = h.degree
        if d > max_ext_degree:
            continue
        K = GF(F.p, d)
        for r in roots_in_field(h, K, rng):
            out.append(Root(r, K, e, d, i))
    return out


def splitting_degree(f: UniPoly, rng: Random | None = None) -> int:
    """Degree over F_p of the splitting field of f."""
    return lcm(*[h.degree for h, _ in irreducible_factors(f, rng)]) if f.degree > 0 else 1
