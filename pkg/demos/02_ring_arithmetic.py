"""Exact arithmetic in the coefficient ring Z[q, q^-1, 1/(1-q^-i)].

Measures and integrals in this package are not floating-point numbers:
they are rational functions in q, stored in a canonical form and only
specialized to q = p at the very end.
"""

from fractions import Fraction

from padicint import AqElem, GammaCell, Prime, geom_sum, weighted_sum

one = AqElem.one()
qinv = AqElem.q_power(-1)
g1 = AqElem.geom(1)  # 1/(1-q^-1)
g2 = AqElem.geom(2)  # 1/(1-q^-2)

print("== canonical cancellation ==")
print(f"  (1 - q^-1) * 1/(1-q^-1)  =  {((one - qinv) * g1).render()}")
print(f"  1/(1-q^-1) - q^-1/(1-q^-1)  =  {(g1 - qinv * g1).render()}")

print("\n== equality is decided by cross-multiplication ==")
lhs = (one + qinv) * g2
print(f"  (1+q^-1)/(1-q^-2) == 1/(1-q^-1) ?  {lhs == g1}")

print("\n== evaluation at q = p is exact ==")
total = g1 + g2
print(f"  1/(1-q^-1) + 1/(1-q^-2) = {total.render()}")
print(f"  at q = 2: {total.eval_at(Prime(2))}   (2 + 4/3 = 10/3)")

print("\n== geometric and weighted sums land in the ring ==")
tail = geom_sum(GammaCell(1, None, 1, 0), 1)
print(f"  sum of q^-g over g > 1: {tail.render()}")
both = geom_sum(GammaCell(0, 5, 2, 0), 2)
print(f"  sum over 0 < g < 5, g even, of q^-g: {both.render()}")
weighted = weighted_sum(GammaCell(-1, None, 1, 0), [0, 1], 1)
print(f"  sum of tau * q^-tau over tau >= 0: {weighted.render()}")
print(f"  at q = 2 that classical series is {weighted.eval_at(Prime(2))}")
partial = sum(Fraction(t, 2**t) for t in range(25))
print(f"  partial sums approach it: {float(partial):.6f}")
