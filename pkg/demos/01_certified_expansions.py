"""Certified digit expansions in a non-integer base.

The greedy expansion of x in base beta applies x -> beta*x mod 1 and reads
off the integer parts.  Each step multiplies any numerical error by beta,
so after fifty steps a double-precision orbit is garbage.  Here every base
is either exact (integer, rational, quadratic irrational) or a shrinkable
enclosure, and a digit is only ever emitted when its floor is certified.
"""

from fractions import Fraction

from betadyn import Beta, digits, expansion_of_one, reconstruct

# Four flavours of base: exact integer, exact rational, the golden ratio as
# an exact quadratic integer, and pi as a rigorous enclosure.
bases = {
    "2": Beta.integer(2),
    "9/5": Beta.parse("1.8"),
    "golden": Beta.golden(),
    "pi": Beta.pi(),
}

x = Fraction(5, 8)
for name, beta in bases.items():
    seq = digits(x, beta, 12)
    print(f"base {name:6s}: digits of 5/8 = {seq.digits}")

# Reconstruction is exact for the exact kinds: summing the digit series and
# the terminal recovers the input, not an approximation of it.
phi = bases["golden"]
seq = digits(x, phi, 40)
assert reconstruct(seq) == phi.element(x, 0)
print("\ngolden-base reconstruction at depth 40 is exact:", x)

# The expansion of 1 drives everything downstream.  For the golden ratio it
# terminates (1 = 1/phi + 1/phi**2) and is periodized to (1,0)(1,0)...
for name, beta in bases.items():
    star = expansion_of_one(beta, 12)
    if star.is_eventually_periodic:
        print(f"base {name:6s}: expansion of 1 periodic, "
              f"preperiod={star.preperiod} period={star.period}")
    else:
        print(f"base {name:6s}: expansion of 1 prefix {star.prefix(12)}")

# A base stated only to 30 bits cannot certify a digit that sits exactly on
# a discontinuity of the map; the library refuses rather than guessing.
shaky = Beta.real_decimal("1.5", 30)
try:
    digits(Fraction(2, 3), shaky, 4)
except Exception as exc:
    print("\nstated-precision base refuses an ambiguous digit:")
    print("   ", type(exc).__name__, "-", exc)
