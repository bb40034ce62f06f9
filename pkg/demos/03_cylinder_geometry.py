"""Cylinders: the intervals carved out by a fixed digit prefix.

The points starting with digits w form an interval whose left endpoint is
the value of w.  Lexicographic order on words matches spatial order, so a
cylinder ends where its successor word begins, and the cylinders of each
depth tile [0,1] exactly.  Inside one cylinder a shrinking target around y
pulls back to a window [anchor, anchor + radius); on short cylinders the
window can be empty, which is precisely the subtlety the one-sided sets
are designed around.
"""

from fractions import Fraction

from betadyn import Beta, cylinder, partition_check, target_interval

phi = Beta.golden()

print("golden base, depth-2 cylinders:")
for w in ((0, 0), (0, 1), (1, 0)):
    c = cylinder(phi, w)
    print(f"    {w}: left={c.left_float():.6f} length={c.length_float():.6f}"
          f"{'  (last, closed at 1)' if c.is_last else ''}")

# The three lengths are 1/phi**2, 1/phi**3, 1/phi**2 and sum to 1 exactly;
# partition_check verifies that at any depth.
for n in (2, 6, 10):
    rep = partition_check(phi, n)
    print(f"depth {n:2d}: {rep.count:4d} cylinders, defect {rep.total_defect}, "
          f"gaps {rep.max_gap}, overlaps {rep.max_overlap}")

# Target windows inside a cylinder: anchor = left + y * beta**-n.
print("\ntarget windows for y = 0.7, speed value 0.1:")
for w in ((0, 0), (0, 1), (1, 0)):
    ti = target_interval(phi, w, Fraction(7, 10), Fraction(1, 10))
    state = "empty" if ti.radius == 0 else f"radius {ti.radius_float():.6f}"
    print(f"    {w}: anchor {ti.anchor_float():.6f}, {state}")
print("the (0,1) window is empty: the anchor lands past the right endpoint,")
print("the short-cylinder case that forces the one-sided machinery.")
