"""Exact scalar fields: the rationals, prime fields F_p and extensions F_{p^k}.

Elements are plain Python values so that hot loops stay cheap:

* ``RationalField``  -> ``fractions.Fraction`` (always in lowest terms)
* ``PrimeField``     -> ``int`` in ``range(p)``
* ``ExtensionField`` -> ``tuple`` of ``k`` ints, the residue of a polynomial
  modulo the field's monic minimal polynomial (lowest degree first)

A field object carries the arithmetic; elements carry no back-reference.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from random import Random
from typing import Any, Sequence


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Interface shared by all fields."""

    characteristic: int = 0
    degree: int = 1

    @property
    def order(self) -> int | None:
        return None

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    # arithmetic, overridden per field
    def zero(self): raise NotImplementedError
    def one(self): raise NotImplementedError
    def from_int(self, n: int): raise NotImplementedError
    def add(self, a, b): raise NotImplementedError
    def sub(self, a, b): raise NotImplementedError
    def mul(self, a, b): raise NotImplementedError
    def neg(self, a): raise NotImplementedError
    def inv(self, a): raise NotImplementedError
    def random(self, rng: Random): raise NotImplementedError
    def to_json(self, a) -> Any: raise NotImplementedError
    def from_json(self, obj: Any): raise NotImplementedError
    def spec(self) -> dict: raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def coerce(self, a):
        """Map an int, Fraction, or native element into this field."""
        if isinstance(a, int):
            return self.from_int(a)
        return a

    def random_nonzero(self, rng: Random):
        while True:
            a = self.random(rng)
            if not self.is_zero(a):
                return a

    def sum(self, items):
        acc = self.zero()
        for x in items:
            acc = self.add(acc, x)
        return acc

    def dot(self, u: Sequence, v: Sequence):
        acc = self.zero()
        for a, b in zip(u, v):
            acc = self.add(acc, self.mul(a, b))
        return acc

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec() == other.spec()

    def __hash__(self):
        return hash(repr(self.spec()))


class RationalField(Field):
    characteristic = 0

    def zero(self): return Fraction(0)
    def one(self): return Fraction(1)
    def from_int(self, n): return Fraction(n)
    def add(self, a, b): return a + b
    def sub(self, a, b): return a - b
    def mul(self, a, b): return a * b
    def neg(self, a): return -a
    def is_zero(self, a): return a == 0

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def coerce(self, a):
        return Fraction(a)

    def random(self, rng, bound: int = 50):
        return Fraction(rng.randint(-bound, bound))

    def to_json(self, a):
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def from_json(self, obj):
        return Fraction(str(obj))

    def spec(self):
        return {"kind": "rationals"}

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p == 2:
            raise ValueError("characteristic 2 is not supported")
        self.p = p
        self.characteristic = p

    @property
    def order(self):
        return self.p

    def zero(self): return 0
    def one(self): return 1
    def from_int(self, n): return n % self.p
    def add(self, a, b): return (a + b) % self.p
    def sub(self, a, b): return (a - b) % self.p
    def mul(self, a, b): return (a * b) % self.p
    def neg(self, a): return (-a) % self.p
    def is_zero(self, a): return a == 0

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        return pow(a, e, self.p)

    def coerce(self, a):
        if isinstance(a, Fraction):
            return a.numerator * pow(a.denominator, -1, self.p) % self.p
        return a % self.p

    def random(self, rng):
        return rng.randrange(self.p)

    def to_json(self, a):
        return str(a)

    def from_json(self, obj):
        if isinstance(obj, str) and "/" in obj:
            return self.coerce(Fraction(obj))
        return int(obj) % self.p

    def spec(self):
        return {"kind": "prime", "p": self.p}

    def __repr__(self):
        return f"GF({self.p})"


# -- polynomials over F_p as int lists, lowest degree first -------------------
# Just enough to build and test extension moduli; the general polynomial
# machinery lives in cbkit.poly.

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a, b, mod, p):
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _fp_reduce(prod, mod, p)


def _fp_reduce(a, mod, p):
    # mod is monic
    a = list(a)
    k = len(mod) - 1
    for i in range(len(a) - 1, k - 1, -1):
        c = a[i]
        if c:
            for j in range(k + 1):
                a[i - k + j] = (a[i - k + j] - c * mod[j]) % p
    return _fp_trim(a[:k] if len(a) > k else a)


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        monic = [(c * inv) % p for c in b]
        a = _fp_reduce(a, monic, p) if len(a) >= len(monic) else a
        a, b = b, a
    return a


def _fp_powx(e, mod, p):
    """x^e mod (mod) over F_p."""
    result, base = [1], [0, 1]
    base = _fp_reduce(base, mod, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, mod, p)
        base = _fp_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _prime_factors(n):
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_fp(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p (coefficients low first)."""
    poly = [c % p for c in poly]
    k = len(poly) - 1
    if k < 1 or poly[-1] != 1:
        raise ValueError("expected a monic polynomial of degree >= 1")
    if k == 1:
        return True
    x = [0, 1]
    if _fp_trim([a - b for a, b in itertools.zip_longest(_fp_powx(p ** k, poly, p), x, fillvalue=0)]):
        return False
    for q in _prime_factors(k):
        h = _fp_powx(p ** (k // q), poly, p)
        diff = _fp_trim([(a - b) % p for a, b in itertools.zip_longest(h, x, fillvalue=0)])
        if len(_fp_gcd(poly, diff, p)) > 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def default_minpoly(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible of degree k, enumerating (c_0, ..., c_{k-1}) lexicographically."""
    # c_0 = 0 gives a factor x, so start the constant term at 1
    for tail in itertools.product(range(1, p), *([range(p)] * (k - 1))):
        cand = tuple(tail) + (1,)
        if is_irreducible_fp(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")


class ExtensionField(Field):
    """F_{p^k} = F_p[x]/(minpoly)."""

    def __init__(self, p: int, k: int, minpoly: Sequence[int] | None = None):
        if not is_prime(p) or p == 2:
            raise ValueError("p must be an odd prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        if minpoly is None:
            minpoly = default_minpoly(p, k)
        minpoly = tuple(c % p for c in minpoly)
        if len(minpoly) != k + 1 or minpoly[-1] != 1:
            raise ValueError("minpoly must be monic of degree k")
        if not is_irreducible_fp(minpoly, p):
            raise ValueError("minpoly is reducible over F_p")
        self.p = p
        self.k = k
        self.degree = k
        self.characteristic = p
        self.minpoly = minpoly
        self._zero = (0,) * k
        self._one = (1,) + (0,) * (k - 1)

    @property
    def order(self):
        return self.p ** self.k

    def zero(self): return self._zero
    def one(self): return self._one

    def from_int(self, n):
        return ((n % self.p),) + (0,) * (self.k - 1)

    def coerce(self, a):
        if isinstance(a, tuple):
            return a
        if isinstance(a, Fraction):
            return self.from_int(a.numerator * pow(a.denominator, -1, self.p))
        return self.from_int(a)

    def generator(self):
        """The class of x."""
        if self.k == 1:
            return self.from_int(-self.minpoly[0])
        return (0, 1) + (0,) * (self.k - 2)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def is_zero(self, a):
        return not any(a)

    def mul(self, a, b):
        p, k, mod = self.p, self.k, self.minpoly
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(k):
                    prod[i - k + j] -= c * mod[j]
        return tuple(c % p for c in prod[:k])

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in F_p[x]
        p = self.p
        r0, r1 = list(self.minpoly), _fp_trim(list(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            inv_lead = pow(r1[-1], -1, p)
            q = [0] * (len(r0) - len(r1) + 1)
            r = list(r0)
            for i in range(len(r) - len(r1), -1, -1):
                c = (r[i + len(r1) - 1] * inv_lead) % p
                q[i] = c
                if c:
                    for j, y in enumerate(r1):
                        r[i + j] = (r[i + j] - c * y) % p
            r = _fp_trim(r)
            qs = _poly_mul(q, s1, p)
            s = _fp_trim([(x - y) % p for x, y in itertools.zip_longest(s0, qs, fillvalue=0)])
            r0, r1, s0, s1 = r1, r, s1, s
        c = pow(r1[0], -1, p)
        out = [(x * c) % p for x in s1] + [0] * self.k
        return tuple(out[: self.k])

    def frobenius(self, a, times: int = 1):
        return self.pow(a, self.p ** times)

    def random(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.k))

    def to_json(self, a):
        return [str(c) for c in a]

    def from_json(self, obj):
        if isinstance(obj, (list, tuple)):
            vals = [int(c) % self.p for c in obj] + [0] * self.k
            return tuple(vals[: self.k])
        return self.from_int(int(obj))

    def spec(self):
        return {"kind": "extension", "p": self.p, "k": self.k, "minpoly": [str(c) for c in self.minpoly]}

    def __repr__(self):
        return f"GF({self.p}^{self.k})"


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


QQ = RationalField()


@functools.lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> Field:
    """Cached field constructor; ``GF(p)`` is prime, ``GF(p, k)`` an extension."""
    if k == 1:
        return PrimeField(p)
    return ExtensionField(p, k)


def field_from_spec(spec: dict | str) -> Field:
    """Build a field from a JSON spec dict or a CLI string.

    Strings: ``"rationals"``, ``"prime:101"``, ``"101"``, ``"ext:101:2"``.
    """
    if isinstance(spec, str):
        s = spec.strip().lower()
        if s in ("q", "qq", "rationals"):
            return QQ
        parts = s.split(":")
        if parts[0] in ("prime", "gf", "fp"):
            return GF(int(parts[1]))
        if parts[0] in ("ext", "extension"):
            return GF(int(parts[1]), int(parts[2]))
        return GF(int(s))
    kind = spec.get("kind")
    if kind == "rationals":
        return QQ
    if kind == "prime":
        return GF(int(spec["p"]))
    if kind == "extension":
        p, k = int(spec["p"]), int(spec["k"])
        if "minpoly" in spec and spec["minpoly"] is not None:
            mp = tuple(int(c) for c in spec["minpoly"])
            if mp != default_minpoly(p, k):
                return ExtensionField(p, k, mp)
        return GF(p, k)
    raise ValueError(f"unknown field kind {kind!r}")


def sqrt_fp(a: int, p: int) -> int | None:
    """A square root of a mod p (Tonelli-Shanks), or None for non-residues."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def is_square(field: Field, a) -> bool:
    if field.is_zero(a):
        return True
    q = field.order
    if q is None:
        raise ValueError("square test requires a finite field")
    return field.pow(a, (q - 1) // 2) == field.one()


def sqrt(field: Field, a):
    """Square root in a finite field of odd order, or None."""
    if isinstance(field, PrimeField):
        return sqrt_fp(a, field.p)
    if field.is_zero(a):
        return a
    if not is_square(field, a):
        return None
    q = field.order
    # Tonelli-Shanks over F_q
    s, m = 0, q - 1
    while m % 2 == 0:
        m //= 2
        s += 1
    rng = Random(q)
    while True:
        z = field.random_nonzero(rng)
        if not is_square(field, z):
            break
    c = field.pow(z, m)
    t = field.pow(a, m)
    r = field.pow(a, (m + 1) // 2)
    one = field.one()
    while t != one:
        i, t2 = 0, t
        while t2 != one:
            t2 = field.mul(t2, t2)
            i += 1
        b = field.pow(c, 1 << (s - i - 1))
        s, c = i, field.mul(b, b)
        t = field.mul(t, c)
        r = field.mul(r, b)
    return r
