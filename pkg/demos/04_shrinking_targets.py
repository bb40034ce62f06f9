"""Orbits hitting shrinking targets, and the zero-one law behind them.

Fix a target y and speeds Psi(n).  The orbit of Lebesgue-almost every x
hits the window (y - Psi(n), y + Psi(n)) at infinitely many n exactly when
the series sum Psi(n) diverges.  At summable speeds almost every orbit
eventually stops hitting.  Both halves are visible in seeded simulations,
with the exact per-step window measure as the oracle for an integer base.
"""

from fractions import Fraction

from betadyn import Beta, TargetFn, hit_sequence, monte_carlo_measure

b2 = Beta.integer(2)

# A rational orbit is exactly periodic, so its hit set is transparent.
psi = TargetFn.family(tau=0, C=Fraction(1, 100))
rec = hit_sequence(Fraction(1, 3), Fraction(1, 3), b2, psi, 12)
print("orbit of 1/3 against target 1/3, width 0.01:", rec.hits)
rec = hit_sequence(Fraction(1, 3), Fraction(2, 3), b2, psi, 12,
                   mode="one-sided")
print("one-sided variant against 2/3:", rec.hits)

# Divergent speeds Psi(n) = 1/(4n): mean hit count grows like log N / 2.
divergent = TargetFn.family(tau=0, a=1, C=Fraction(1, 4))
stats = monte_carlo_measure(b2, Fraction(2, 5), divergent, N=1000,
                            samples=400, seed=2024)
print(f"\ndivergent speeds: mean hits {stats.mean_hits:.2f}, "
      f"oracle {stats.oracle_mean:.2f}, "
      f"samples with a hit past N/2: {stats.tail_frac:.2%}")

# Summable speeds Psi(n) = n**-2: late hits are exponentially rare.
convergent = TargetFn.family(tau=0, a=2)
stats = monte_carlo_measure(b2, Fraction(2, 5), convergent, N=1000,
                            samples=400, seed=2024, tail_threshold=100)
print(f"summable speeds:  mean hits {stats.mean_hits:.2f}, "
      f"oracle {stats.oracle_mean:.2f}, "
      f"samples with a hit past n=100: {stats.tail_frac:.2%}")
print("(the union bound for that tail is sum 2/n**2 over n>100 ~ 2%)")
