"""Haar measures of valuative cells, exactly.

A cell fixes where ord(t - c) may live (an interval and a congruence) and
what the angular component of t - c must be.  Its measure is a geometric
sum in the ring of the previous demo, and never depends on the center:
Haar measure is translation invariant.
"""

from fractions import Fraction

from padicint import (
    AngularResidue,
    KCell,
    Prime,
    kcell_measure,
    kcells_disjoint,
    partition_unit_ball,
)

p3 = Prime(3)

print("== a single ball ==")
cell = KCell(Fraction(0), 2, 4, 1, 0, 1, AngularResidue(1, 2), p3)
mu = kcell_measure(cell)
print("  points with ord(t) = 3 and ac_1(t) = 2 (a ball like 54 + 81 Z_3):")
print(f"  measure = {mu.render()} = {mu.eval_at(p3)} at q = 3")

print("\n== translation invariance ==")
for center in [Fraction(0), Fraction(17), Fraction(-5, 7), Fraction(10**9)]:
    moved = KCell(center, 2, 4, 1, 0, 1, AngularResidue(1, 2), p3)
    print(f"  center {str(center):>12}: measure {kcell_measure(moved).render()}")

print("\n== partitioning the unit ball ==")
print("Cells over all residues k mod N and all units xi mod p^M, plus the")
print("origin, tile Z_p; their measures must add up to exactly 1.")
for (M, N) in [(1, 1), (1, 2), (2, 3)]:
    cells = partition_unit_ball(M, N, p3)
    total = sum((kcell_measure(c).eval_at(p3) for c in cells), Fraction(0))
    disjoint = all(
        kcells_disjoint(cells[i], cells[j])
        for i in range(len(cells))
        for j in range(i + 1, len(cells))
    )
    print(f"  M={M} N={N}: {len(cells):3d} cells, pairwise disjoint: {disjoint}, total measure {total}")

print("\n== a counting cross-check ==")
print("Counting residues mod 3^D inside the first cell reproduces its")
print("measure exactly once D resolves every membership test:")
D = cell.upper + cell.ac_depth + 1
count = sum(1 for r in range(3**D) if cell.contains_value(Fraction(r)))
print(f"  {count} of 3^{D} residues lie in the cell: {Fraction(count, 3**D)} = {mu.eval_at(p3)}")
