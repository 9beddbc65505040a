"""Valuations, angular components, and the zigzag well-order.

Every number here is an exact rational viewed inside Q_p, so valuations
and angular components come out exactly; there is no precision to manage.
"""

from fractions import Fraction

from padicint import (
    GammaCell,
    PAdicPoint,
    Prime,
    rational_ac,
    rational_ord,
    wellorder_less,
    wellorder_min,
)

p2 = Prime(2)

print("== valuations ==")
for value in [12, 40, Fraction(8, 3), Fraction(5, 16), 0]:
    print(f"  ord_2({value}) = {rational_ord(Fraction(value), 2)}")

print("\nThe valuation turns products into sums and is ultrametric:")
x, y = Fraction(12), Fraction(8, 3)
print(f"  ord(x*y) = {rational_ord(x * y, 2)} = {rational_ord(x, 2)} + {rational_ord(y, 2)}")
print(f"  ord(x+y) = {rational_ord(x + y, 2)} >= min(ord x, ord y) = {min(rational_ord(x, 2), rational_ord(y, 2))}")

print("\n== angular components ==")
print("ac_m strips the leading power of p and reduces the unit mod p^m.")
for value in [12, Fraction(8, 3), 0]:
    for m in (1, 2, 3):
        print(f"  ac_{m}({value}) at p=2: {rational_ac(Fraction(value), 2, m)}")

print("\nAt p = 2 the depth-1 angular component of anything nonzero is 1,")
print("so depth >= 2 is what carries information:")
pt = PAdicPoint(Fraction(7, 5), p2)
print(f"  7/5: ord = {pt.ord()}, ac_1 = {pt.ac(1).r}, ac_3 = {pt.ac(3).r}")

print("\n== the zigzag order 0, 1, -1, 2, -2, ... ==")
chain = sorted(range(-4, 5), key=lambda v: (0 if v == 0 else (2 * v - 1 if v > 0 else -2 * v)))
print("  chain:", " < ".join(str(c) for c in chain))
print("  wellorder_less(3, -3) =", wellorder_less(3, -3))

print("\nEvery congruence-constrained interval has a least element in this")
print("order, found from at most two candidates per cell:")
cell = GammaCell(None, -2, 3, 1)  # gamma < -2, gamma = 1 mod 3
print(f"  min of (gamma < -2, gamma = 1 mod 3): {wellorder_min([cell])}")
union = [GammaCell(2, 4, 1, 0), GammaCell(-4, -2, 1, 0)]  # {3} and {-3}
print(f"  min of {{3}} union {{-3}}: {wellorder_min(union)}")
