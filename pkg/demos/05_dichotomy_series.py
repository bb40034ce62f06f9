"""The zero-or-full dichotomy read off a single series.

For a dimension function f, the generalized Hausdorff measure of the point
target set is zero or full according to convergence or divergence of
sum f(Psi(n)/beta**n) * beta**n; the planar version weighs the term with
beta**(2n)/Psi(n) instead.  For power-law families the verdict is exact
exponent arithmetic, which is how the predicted dimensions 1/(1+tau) and
1 + 1/(1+tau) fall out: the verdict flips exactly there.
"""

from fractions import Fraction

from betadyn import (
    Beta,
    DimensionFn,
    TargetFn,
    corollary_g,
    corollary_psi1,
    corollary_psi_eps,
    predicted_hausdorff,
    series_1d,
    series_2d,
)

b2 = Beta.integer(2)
tau = Fraction(1)

print(f"tau = {tau}: predicted dimensions "
      f"{predicted_hausdorff(tau, '1d')} (point), "
      f"{predicted_hausdorff(tau, '2d')} (pair)")

print("\npoint-set verdicts across s (flip at 1/2):")
for s10 in range(3, 8):
    s = Fraction(s10, 10)
    rep = series_1d(DimensionFn.power(s), TargetFn.family(tau=tau), b2)
    print(f"    s={float(s):.1f}: {rep.verdict:10s} -> measure {rep.measure_verdict}")

print("\npair-set verdicts across s (flip at 3/2):")
for s10 in range(13, 18):
    s = Fraction(s10, 10)
    rep = series_2d(DimensionFn.power(s, declared_dim=2),
                    TargetFn.family(tau=tau), b2)
    print(f"    s={float(s):.1f}: {rep.verdict:10s} -> measure {rep.measure_verdict}")

# The exact logarithmic order: at the critical dimension function the
# undamped speed gives term = 1 identically (divergent, full measure),
# while damping by (log beta**n)**-(1+eps)(1+tau) tips the series over to
# convergence for every eps > 0.
g = corollary_g(tau)
rep1 = series_2d(g, corollary_psi1(tau), b2, N=30)
repe = series_2d(g, corollary_psi_eps(tau, Fraction(1, 2)), b2, N=30)
print(f"\ncritical g, undamped speed: {rep1.verdict} "
      f"(partial sum at 30 is exactly {rep1.checkpoints[-1][1]:.0f})")
print(f"critical g, log-damped:     {repe.verdict} "
      f"(terms are (n log beta)**-1.5)")
