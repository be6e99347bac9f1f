"""Walk the (H, E) parameter plane and watch the profile families change.

For fixed n and H > 0 the conserved quantity E selects the family: E = 0
gives the sphere, 0 < E < E_cyl the unduloids, E = E_cyl the cylinder,
E > E_cyl nothing (the admissible band is empty), and E < 0 the nodoids.
At H = 0 the same machinery degenerates to the hyperplane (E = 0) and the
catenoid-type minimal profiles (E != 0).  Flipping the signs of both H and
E mirrors the generating curve in t, so the family never changes.
"""

from heisenberg_cmc.classify import classify, cylinder_energy
from heisenberg_cmc.errors import NoAdmissibleRadiusError


def describe(n, h, e):
    try:
        c = classify(n, h, e)
    except NoAdmissibleRadiusError:
        return "empty band (no admissible radius)"
    if c.x1 is not None and c.x2 is not None:
        return f"{c.family.value:10s} band [{c.x1:.4f}, {c.x2:.4f}]"
    return f"{c.family.value}"


def main():
    n, h = 2, 1.0
    ecyl = cylinder_energy(n, h)
    print(f"n = {n}, H = {h}: cylinder energy E_cyl = {ecyl:.6f}\n")
    print(f"{'E':>10s}  family")
    for frac in (-1.0, -0.3, 0.0, 0.3, 0.7, 1.0, 1.2):
        e = frac * ecyl
        print(f"{e:10.4f}  {describe(n, h, e)}")

    print("\nH = 0 (minimal profiles):")
    for e in (0.0, 0.8):
        print(f"{e:10.4f}  {describe(n, 0.0, e)}")

    print("\nsign mirror (H, E) -> (-H, -E):")
    for h_, e_ in ((1.0, -0.2), (1.0, 0.05)):
        a = classify(n, h_, e_).family.value
        b = classify(n, -h_, -e_).family.value
        print(f"  ({h_:+.2f}, {e_:+.2f}) -> {a:10s}   ({-h_:+.2f}, {-e_:+.2f}) -> {b}")


if __name__ == "__main__":
    main()
