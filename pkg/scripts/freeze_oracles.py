"""Compute reference values with sympy alone and freeze them into tests/data/oracles.json.

Nothing here imports cbkit; the test-suite compares cbkit against these numbers.
Re-running the script must reproduce the file exactly.
"""

import itertools
import json
import random
from pathlib import Path

from sympy import GF, Poly, Symbol, expand, prod, resultant, subresultants, symbols
from sympy.polys.matrices import DomainMatrix

P = 101
K = GF(P)
OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "oracles.json"


def rank_mod_p(rows):
    return DomainMatrix([[K(int(x)) for x in r] for r in rows], (len(rows), len(rows[0])), K).rank()


def monomials(nvars, deg):
    return [e for e in itertools.product(range(deg + 1), repeat=nvars) if sum(e) == deg]


def eval_rows(points, deg):
    mons = monomials(len(points[0]), deg)
    return [[prod(c ** a for c, a in zip(pt, e)) % P for e in mons] for pt in points]


def small_ranks():
    vander = [[1, t, t * t] for t in (1, 2, 3, 4)]
    conic = [(1, t, t * t) for t in range(6)]
    line = [(1, t, 2 * t) for t in range(5)]
    return {
        "vandermonde_4x3": rank_mod_p(vander),
        "conic6_m2": rank_mod_p(eval_rows(conic, 2)),
        "line5_coords": rank_mod_p(line),
        "frame_m1": rank_mod_p([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]),
    }


def diag_pencil():
    t = Symbol("t")
    poly = Poly(expand(prod(1 + i * t for i in range(1, 7))), t)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]  # ascending
    roots = sorted((-pow(i, -1, P)) % P for i in range(1, 7))
    return {"coeffs_over_Z": coeffs, "coeffs_mod_p": [c % P for c in coeffs], "roots_mod_p": roots}


def plucker():
    rng = random.Random("plucker-oracle")
    rows = [[rng.randrange(P) for _ in range(4)] for _ in range(2)]
    minors = {}
    for i, j in itertools.combinations(range(4), 2):
        minors[f"{i}{j}"] = (rows[0][i] * rows[1][j] - rows[0][j] * rows[1][i]) % P
    return {"rows": rows, "minors": minors}


def segre():
    u, v = [3, 5], [2, 7, 11]
    return {"u": u, "v": v, "coords": [(a * b) % P for a in u for b in v]}


def cubic_intersection():
    """Nine points of two random plane cubics, as {(t, y(t), 1) : R(t) = 0} with y a polynomial mod R."""
    x, y = symbols("x y")
    mons = monomials(3, 3)
    seed = 0
    while True:
        rng = random.Random(f"cubics/{seed}")
        cf = [rng.randrange(P) for _ in mons]
        cg = [rng.randrange(P) for _ in mons]
        f = sum(c * x ** a * y ** b for c, (a, b, _) in zip(cf, mons))
        g = sum(c * x ** a * y ** b for c, (a, b, _) in zip(cg, mons))
        R = Poly(resultant(f, g, y), x, modulus=P)
        ok = R.degree() == 9 and Poly(f, y).degree() == 3 and Poly(g, y).degree() == 3
        if ok and R.gcd(R.diff(x)).degree() == 0:
            # subresultants are determinants, so computing over Z and reducing mod p is exact
            sub = subresultants(f, g, y)
            lin = [s for s in sub if Poly(s, y).degree() == 1]
            if lin:
                S = Poly(lin[-1], y)
                s1 = Poly(S.coeff_monomial(y), x, modulus=P)
                s0 = Poly(S.coeff_monomial(1), x, modulus=P)
                if s1.gcd(R).degree() == 0:
                    inv = s1.invert(R)
                    yx = (-s0 * inv).rem(R)
                    fac = sorted(q.degree() for q, _ in R.factor_list()[1])
                    lc = int(R.LC()) % P
                    ilc = pow(lc, -1, P)
                    monic = [(int(c) * ilc) % P for c in reversed(R.all_coeffs())]
                    ycoef = [int(c) % P for c in reversed(yx.all_coeffs())]
                    return {
                        "seed": seed,
                        "monomials": [list(e) for e in mons],
                        "f": cf,
                        "g": cg,
                        "resultant_monic": monic,
                        "y_mod_resultant": ycoef,
                        "factor_degrees": fac,
                    }
        seed += 1


def main():
    data = {
        "p": P,
        "ranks": small_ranks(),
        "diag_pencil": diag_pencil(),
        "plucker": plucker(),
        "segre": segre(),
        "cubic_intersection": cubic_intersection(),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
