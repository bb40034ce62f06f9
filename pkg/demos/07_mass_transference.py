"""The constructive heart of mass transference: disjoint blowups.

To push a full-measure statement down to a finer Hausdorff measure, one
needs, inside every interval B, a disjoint subfamily of blown-up balls
whose mass sum f(r) is a definite fraction of |B| (a twentieth here).
The selection is a greedy sweep: sort the blowups that fit inside B by
decreasing radius and keep whatever does not collide.  The bound is
checked, never assumed; a family too sparse to fill B is rejected.
"""

from fractions import Fraction

from betadyn import (
    Beta,
    DimensionFn,
    TargetFn,
    ball_family_from_targets,
    dyadic_family,
    select_disjoint_blowups,
)

identity = DimensionFn.power(1)

# Dyadic intervals of generations 3..9 fill [0,1]; the greedy keeps mass 1/2.
family = dyadic_family(3, 9)
sel = select_disjoint_blowups(family, identity, (0, 1), G=1)
print(f"dyadic family in [0,1]: kept {len(sel.indices)} balls, "
      f"mass {float(sel.mass)} >= bound {float(sel.bound)}")

# The same family restricted to a sub-box: the bound still holds with room.
B = (Fraction(1, 5), Fraction(7, 10))
sel = select_disjoint_blowups(family, identity, B, G=1)
print(f"inside [0.2, 0.7]:      kept {len(sel.indices)} balls, "
      f"mass {float(sel.mass):.4f} >= bound {float(sel.bound):.4f} "
      f"(cover fraction {sel.cover_fraction:.3f})")

# A family that cannot fill the box is refused instead of silently passing.
sparse = dyadic_family(1, 1)
try:
    select_disjoint_blowups(sparse, identity, (0, 1), G=1)
except Exception as exc:
    print(f"sparse family rejected: {type(exc).__name__} - {exc}")

# The ball system the dichotomy argument actually uses: target windows of
# every admissible word at several depths.
b2 = Beta.integer(2)
fam = ball_family_from_targets(b2, Fraction(0),
                               TargetFn.family(tau=0, C=Fraction(1, 2)),
                               n_values=(4, 5, 6, 7))
sel = select_disjoint_blowups(fam, identity, (0, 1), G=1,
                              min_cover_fraction=0.2)
print(f"target-window family:   kept {len(sel.indices)} of {len(fam)} balls, "
      f"mass {float(sel.mass):.4f}")
