from fractions import Fraction

import pytest

from padicint import (
    BudgetExceeded,
    Polynomial,
    Prime,
    RationalFunctionT,
    SeriesTable,
    UNDETERMINED,
    count_Nm,
    fit_rational,
    measure_identity_check,
    poincare_report,
    series_table,
)

P2, P3 = Prime(2), Prime(3)
X = Polynomial.variable(0, 1)
X2 = X * X
X3 = X2 * X
XY = Polynomial(2, {(1, 1): 1})
X2PY2 = Polynomial(2, {(2, 0): 1, (0, 2): 1})
X2MY2 = Polynomial(2, {(2, 0): 1, (0, 2): -1})

CORPUS_1 = [X, X2, X3]
CORPUS_2 = [XY, X2PY2, X2MY2]


def test_count_examples():
    assert count_Nm(X, P2, 3) == 1
    assert count_Nm(X, P3, 5) == 1
    assert count_Nm(X2, P3, 2) == 3  # x in {0, 3, 6} mod 9
    assert count_Nm(XY, P2, 2) == 8
    assert count_Nm(X, P2, 0) == 1


def test_count_budget():
    with pytest.raises(BudgetExceeded):
        count_Nm(XY, P3, 9, budget=10**5)


def test_series_table_matches_direct_enumeration():
    for f in CORPUS_1:
        for prime in (P2, P3):
            table = series_table(f, prime, 7)
            for m in range(8):
                assert table.counts[m] == count_Nm(f, prime, m)
    for f in CORPUS_2:
        for prime in (P2, P3):
            table = series_table(f, prime, 4)
            for m in range(5):
                assert table.counts[m] == count_Nm(f, prime, m)


def test_lifting_bound_enforced():
    for f in CORPUS_1 + CORPUS_2:
        for prime in (P2, P3):
            table = series_table(f, prime, 6)
            p_n = prime.p**f.nvars
            for m in range(6):
                assert table.counts[m + 1] <= p_n * table.counts[m]
    with pytest.raises(ValueError):
        SeriesTable(P2, X, [1, 5])
    with pytest.raises(ValueError):
        SeriesTable(P2, X, [2, 1])


def test_measure_identity_examples():
    assert measure_identity_check(X2, P3, 1)
    assert measure_identity_check(X, P2, 4)
    assert measure_identity_check(XY, P2, 2)


def test_measure_identity_corpus():
    for f in CORPUS_1 + CORPUS_2:
        for prime in (P2, P3):
            for m in range(0, 4):
                assert measure_identity_check(f, prime, m)


def test_fit_constant_ones():
    table = SeriesTable(P2, X, [1] * 10)
    fit = fit_rational(table, guard=5)
    assert isinstance(fit, RationalFunctionT)
    assert fit.num == [Fraction(1)]
    assert fit.den == [Fraction(1), Fraction(-1)]
    assert fit.shape == [(0, 1)]


def test_fit_x_squared_at_3():
    table = series_table(X2, P3, 9)
    assert table.counts == [1, 1, 3, 3, 9, 9, 27, 27, 81, 81]
    fit = fit_rational(table, guard=5)
    assert isinstance(fit, RationalFunctionT)
    assert fit.num == [Fraction(1), Fraction(1)]
    assert fit.den == [Fraction(1), Fraction(0), Fraction(-3)]
    # denominator 1 - 3 T^2 = 1 - p^(-(-1)) T^2: the exponent is negative
    assert fit.shape == [(-1, 2)]
    assert fit.reproduces(table.counts)


def test_fit_insufficient_data():
    table = SeriesTable(P2, X, [1, 1, 1])
    assert fit_rational(table, guard=3) is UNDETERMINED


def test_fit_rejects_unverified_recurrences():
    # a sequence that looks geometric early but breaks inside the guard
    counts = [1, 2, 4, 8, 16, 32, 64, 128, 199, 398, 796, 1592]
    table = SeriesTable(P2, XY, counts)
    fit = fit_rational(table, guard=5)
    assert fit is UNDETERMINED


def test_fit_reproduces_all_entries():
    for f, prime, mmax in [
        (X, P2, 11),
        (X, P3, 11),
        (X2, P2, 11),
        (X2, P3, 11),
        (X3, P2, 11),
        (X3, P3, 11),
        (XY, P2, 10),
        (X2PY2, P2, 10),
        (X2PY2, P3, 10),
        (X2MY2, P2, 10),
    ]:
        table = series_table(f, prime, mmax)
        fit = fit_rational(table, guard=5)
        assert isinstance(fit, RationalFunctionT), (f.render(), prime)
        assert fit.reproduces(table.counts)
        assert fit.shape is not None


def test_fit_order_cap_via_guard():
    # ten entries with a five-entry guard cap the tested order at two, so a
    # genuine order-three recurrence is reported as undetermined, not guessed
    table = series_table(X3, P2, 9)
    assert fit_rational(table, guard=5) is UNDETERMINED
    assert isinstance(fit_rational(series_table(X3, P2, 10), guard=5), RationalFunctionT)


def test_fit_stability_under_extension():
    for f, prime, m1 in [(X, P2, 9), (X2, P3, 9), (X3, P2, 10), (XY, P2, 8)]:
        t1 = series_table(f, prime, m1)
        t2 = series_table(f, prime, m1 + 2)
        fit1 = fit_rational(t1, guard=5)
        fit2 = fit_rational(t2, guard=5)
        assert isinstance(fit1, RationalFunctionT)
        assert fit1.num == fit2.num and fit1.den == fit2.den


def test_report_for_x():
    rep = poincare_report(X, P2, 8)
    assert rep.table.counts == [1] * 9
    assert isinstance(rep.rational, RationalFunctionT)
    assert rep.rational.render_num() == "1"
    assert rep.rational.render_den() == "(1 - T)"
    assert all(ok for _, ok in rep.checks)
    data = rep.to_json()
    assert data["counts"] == [1] * 9
    assert data["guard"] == 5
    assert data["rational"] == {"num": "1", "den": "(1 - T)"}


def test_report_for_x_squared():
    rep = poincare_report(X2, P3, 11)
    assert isinstance(rep.rational, RationalFunctionT)
    assert rep.rational.render_num() == "1 + T"
    assert rep.rational.render_den() == "(1 - 3*T^2)"
    assert rep.rational.shape == [(-1, 2)]
    assert all(ok for _, ok in rep.checks)


def test_report_for_xy():
    rep = poincare_report(XY, P2, 9, check_mmax=4)
    assert rep.table.counts[:3] == [1, 3, 8]
    assert isinstance(rep.rational, RationalFunctionT)
    assert rep.rational.reproduces(rep.table.counts)
    assert [m for m, _ in rep.checks] == [0, 1, 2, 3, 4]
    assert all(ok for _, ok in rep.checks)
