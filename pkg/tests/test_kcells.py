import random
from fractions import Fraction

import pytest

from padicint import (
    AngularResidue,
    AqElem,
    InfiniteMeasure,
    KCell,
    PAdicPoint,
    Prime,
    kcell_contains,
    kcell_measure,
    kcells_disjoint,
    partition_unit_ball,
    rational_ord,
)

P2, P3, P5 = Prime(2), Prime(3), Prime(5)


def mk(center, lower, upper, mod, res, M, xi, prime):
    return KCell(Fraction(center), lower, upper, mod, res, M, AngularResidue(M, xi), prime)


def test_membership_examples():
    cell = mk(0, -1, None, 1, 0, 1, 1, P2)
    assert kcell_contains(PAdicPoint(Fraction(3), P2), cell)
    assert not kcell_contains(PAdicPoint(Fraction(0), P2), cell)
    cell = mk(0, 2, 4, 1, 0, 1, 2, P3)
    assert kcell_contains(PAdicPoint(Fraction(54), P3), cell)  # 54 = 2 * 27


def test_membership_prime_mismatch():
    cell = mk(0, -1, None, 1, 0, 1, 1, P2)
    with pytest.raises(ValueError):
        kcell_contains(PAdicPoint(Fraction(3), P3), cell)


def test_degenerate_cell_is_its_center():
    cell = mk(Fraction(5, 3), None, None, 1, 0, 1, 0, P2)
    assert cell.contains_value(Fraction(5, 3))
    assert not cell.contains_value(Fraction(4, 3))
    assert kcell_measure(cell).is_zero()


def test_measure_examples():
    cell = mk(0, -1, None, 1, 0, 1, 1, P2)
    mu = kcell_measure(cell)
    assert mu == AqElem.q_power(-1) * AqElem.geom(1)
    assert mu.eval_at(P2) == 1
    cell = mk(0, 2, 4, 1, 0, 1, 2, P3)
    mu = kcell_measure(cell)
    assert mu == AqElem.q_power(-4)
    assert mu.eval_at(P3) == Fraction(1, 81)


def test_infinite_measure():
    with pytest.raises(InfiniteMeasure):
        kcell_measure(mk(0, None, 3, 1, 0, 1, 1, P2))


def test_measure_is_translation_invariant():
    rng = random.Random(41)
    for prime in (P2, P3):
        p = prime.p
        for _ in range(50):
            mod = rng.randint(1, 3)
            M = rng.randint(1, 2)
            units = [r for r in range(1, p**M) if r % p != 0]
            lower = rng.randint(-4, 4)
            upper = lower + rng.randint(1, 6) if rng.random() < 0.6 else None
            base = mk(0, lower, upper, mod, rng.randrange(mod), M, rng.choice(units), prime)
            reference = kcell_measure(base)
            for _ in range(100):
                center = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 1000))
                moved = KCell(
                    center, base.lower, base.upper, base.mod, base.res,
                    base.ac_depth, base.ac_value, prime,
                )
                assert kcell_measure(moved) == reference


def test_partition_examples():
    cells = partition_unit_ball(1, 1, P3)
    assert len(cells) == 2
    assert sum((kcell_measure(c).eval_at(P3) for c in cells), Fraction(0)) == 1
    cells = partition_unit_ball(1, 2, P2)
    assert len(cells) == 2
    measures = sorted(kcell_measure(c).eval_at(P2) for c in cells)
    assert sum(measures, Fraction(0)) == 1
    cells = partition_unit_ball(2, 1, P2)
    assert sorted(c.ac_value.r for c in cells) == [1, 3]


def test_partition_normalization_and_disjointness():
    for prime in (P2, P3, P5):
        for M in (1, 2):
            for N in (1, 2, 3):
                cells = partition_unit_ball(M, N, prime)
                total = sum((kcell_measure(c).eval_at(prime) for c in cells), Fraction(0))
                assert total == 1
                for i in range(len(cells)):
                    for j in range(i + 1, len(cells)):
                        assert kcells_disjoint(cells[i], cells[j])


def test_partition_covers_unit_ball_minus_origin():
    for prime in (P2, P3):
        cells = partition_unit_ball(2, 2, prime)
        for t in list(range(1, 40)) + [Fraction(5, 7), Fraction(9, 11)]:
            if rational_ord(Fraction(t), prime.p) < 0:
                continue
            hits = [c for c in cells if c.contains_value(Fraction(t))]
            assert len(hits) == 1
        assert not any(c.contains_value(Fraction(0)) for c in cells)


def test_disjointness_examples():
    a = mk(0, -1, None, 2, 0, 1, 1, P3)
    b = mk(0, -1, None, 2, 1, 1, 1, P3)
    assert kcells_disjoint(a, b)
    a = mk(0, -1, None, 1, 0, 1, 1, P3)
    b = mk(0, -1, None, 1, 0, 1, 2, P3)
    assert kcells_disjoint(a, b)
    a = mk(0, 5, None, 1, 0, 1, 1, P2)
    b = mk(1, 5, None, 1, 0, 1, 1, P2)
    assert kcells_disjoint(a, b)


def test_disjointness_degenerate_cases():
    point = mk(3, None, None, 1, 0, 1, 0, P2)
    same_point = mk(3, None, None, 2, 1, 2, 0, P2)
    other_point = mk(5, None, None, 1, 0, 1, 0, P2)
    assert not kcells_disjoint(point, same_point)
    assert kcells_disjoint(point, other_point)
    ball = mk(0, -1, None, 1, 0, 1, 1, P2)
    assert not kcells_disjoint(point, ball)  # 3 is a unit
    assert kcells_disjoint(mk(0, None, None, 1, 0, 1, 0, P2), ball)  # 0 excluded


def _random_cell(rng, prime):
    p = prime.p
    mod = rng.randint(1, 3)
    M = rng.randint(1, 2)
    units = [r for r in range(1, p**M) if r % p != 0]
    lower = rng.randint(-3, 4)
    upper = lower + rng.randint(1, 5) if rng.random() < 0.75 else None
    center = Fraction(rng.randint(-6, 6), rng.choice([1, 1, 1, 1 + p]))
    return mk(center, lower, upper, mod, rng.randrange(mod), M, rng.choice(units), prime)


def test_disjointness_never_contradicts_a_witness():
    # whenever a common rational point is found by sampling, the decision
    # procedure must report overlap
    rng = random.Random(43)
    for prime in (P2, P3):
        p = prime.p
        sample = [Fraction(n, d) for n in range(-40, 41) for d in (1, p, p * p, 3 if p != 3 else 5)]
        for _ in range(150):
            c1, c2 = _random_cell(rng, prime), _random_cell(rng, prime)
            witness = next(
                (t for t in sample if c1.contains_value(t) and c2.contains_value(t)),
                None,
            )
            if witness is not None:
                assert not kcells_disjoint(c1, c2), (c1, c2, witness)


def test_disjointness_of_separated_annuli():
    # cells around distinct centers whose valuation ranges both exceed the
    # distance of the centers cannot meet
    rng = random.Random(47)
    for prime in (P2, P3):
        for _ in range(100):
            d = rng.randint(-2, 3)
            c2 = Fraction(prime.p) ** d * rng.choice([1, 2 if prime.p != 2 else 1, -1])
            lo = d + rng.randint(1, 3)
            a = mk(0, lo, lo + 3, 1, 0, 1, 1, prime)
            b = KCell(c2, lo, lo + 3, 1, 0, 1, AngularResidue(1, 1), prime)
            assert kcells_disjoint(a, b)


def test_counting_oracle_exact():
    # the fraction of residues mod p^D inside a bounded cell equals the
    # measure exactly once D resolves every membership test
    rng = random.Random(53)
    for prime in (P2, P3):
        p = prime.p
        for _ in range(25):
            mod = rng.randint(1, 3)
            M = rng.randint(1, 2)
            units = [r for r in range(1, p**M) if r % p != 0]
            lower = rng.randint(-1, 3)
            upper = lower + rng.randint(1, 4)
            center = Fraction(rng.randint(0, 12), rng.choice([1, 1, 1 + p]))
            cell = mk(center, lower, upper, mod, rng.randrange(mod), M, rng.choice(units), prime)
            D = upper + M + 1
            count = sum(1 for r in range(p**D) if cell.contains_value(Fraction(r)))
            assert Fraction(count, p**D) == kcell_measure(cell).eval_at(prime)


def test_json_round_trip():
    cell = mk(Fraction(7, 3), -1, 4, 2, 1, 2, 5, P3)
    data = cell.to_json()
    assert data["center"] == "7/3"
    assert KCell.from_json(data) == cell
