"""Print the projection degree table: measured symbolic degree against the expected value."""

from random import Random

from cbkit.fields import GF
from cbkit.projections import build_projection, projection_degree

F = GF(101)

ROWS = (
    [("quadric_line", {"n": n, "d": d}, d) for n in (2, 3) for d in range(2, 7)]
    + [("quadric_double", {"n": 1, "d": d}, d) for d in (2, 3, 4)]
    + [("ci22_plane", {"d": d, "case": c}, 2 * d - k) for d in (4, 8)
       for c, k in (("generic", 0), ("line", 1), ("conic", 2))]
    + [("grassmann_flag", {"k": 2, "m": 4, "d": d}, d) for d in (1, 2, 3)]
    + [("product_point", {"dims": [1, 2], "degrees": [3, 4], "factor": f}, e) for f, e in ((0, 3), (1, 4))]
)


def main():
    print(f"{'kind':16} {'params':48} {'expected':>8} {'measured':>8}  case")
    for kind, params, expected in ROWS:
        rng = Random(f"{kind}/{sorted(params.items())}")
        rep = projection_degree(build_projection(kind, params, F, rng), 10, rng)
        flag = "" if rep.symbolic_degree == expected else "  MISMATCH"
        print(f"{kind:16} {str(params):48} {expected:>8} {rep.symbolic_degree:>8}  {rep.case_tag or ''}{flag}")


if __name__ == "__main__":
    main()
