"""Which digit strings actually occur?

In base 2 every 0/1 string is the start of some expansion.  In base phi the
string (1,1) never occurs: a word is admissible exactly when each suffix is
lexicographically at most the matching prefix of the expansion-of-one
sequence.  The admissible words of length n tile [0,1] and their number
grows like beta**n, squeezed between beta**n and beta**(n+1)/(beta-1).
"""

from betadyn import (
    Beta,
    count_admissible,
    enumerate_admissible,
    expansion_of_one,
    is_admissible,
)

phi = Beta.golden()

print("golden base, all admissible words of length 3:")
for w in enumerate_admissible(phi, 3):
    print("   ", w)
print("(1,1) admissible?", is_admissible((1, 1), phi))

# Counting runs on the follower automaton of the expansion-of-one sequence;
# for the golden base that automaton has two states and the counts are the
# Fibonacci numbers.
print("\ngolden-base counts (Fibonacci shifted by two):")
print("   ", [count_admissible(phi, n).count for n in range(1, 11)])

# Eventual periodicity makes counting logarithmic in the depth.
big = count_admissible(phi, 500)
print(f"depth 500 count has {len(str(big.count))} digits "
      f"(method: {big.method})")

# For a base with no periodicity (pi has none detectable) the same automaton
# runs on a plain prefix, and the classical sandwich still holds.
bpi = Beta.pi()
for n in (5, 10, 15):
    got = count_admissible(bpi, n)
    lo, hi = bpi.enclosure(64)
    print(f"pi base, n={n:2d}: {got.count:12d} words, "
          f"bounds ok: {got.bounds_ok(bpi)}")

star = expansion_of_one(bpi, 16)
print("pi base expansion of 1 starts:", star.prefix(16))
