"""Reading the fractal dimension off cover counts.

The natural covers of the target sets have, at depth n, elements of
diameter Psi(n)/beta**n: one window per admissible word in the line case,
64 cubes per cover rectangle in the planar case.  Regressing log(count)
against log(1/diameter) recovers the predicted dimensions numerically,
with the residual reported so slow convergence cannot hide.
"""

from betadyn import Beta, box_dimension_estimate, predicted_hausdorff

b2 = Beta.integer(2)

for tau in (1, 2):
    rep = box_dimension_estimate(b2, 0, tau, range(10, 21), "1d")
    print(f"point set, tau={tau}: slope {rep.slope:.4f} "
          f"(predicted {float(predicted_hausdorff(tau, '1d')):.4f}, "
          f"residual {rep.residual:.2e})")

rep = box_dimension_estimate(b2, 0, 1, range(10, 21), "2d")
print(f"pair set,  tau=1: slope {rep.slope:.4f} "
      f"(predicted {float(predicted_hausdorff(1, '2d')):.4f}, "
      f"residual {rep.residual:.2e})")

print("\nper-level counts for the planar cover at tau=1:")
for n, delta, count in rep.levels[:5]:
    print(f"    n={n:2d}: diameter {delta:.3e}, {count} cubes")

# The slope is robust to the base: the golden ratio gives the same 1/2.
phi = Beta.golden()
rep = box_dimension_estimate(phi, 0, 1, range(10, 21), "1d")
print(f"\ngolden base, tau=1: slope {rep.slope:.4f}")
