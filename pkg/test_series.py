from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padroes132.error_handler import (
    ContractionError, SeriesDivisionError, ShiftDivisionError, SqrtSeriesError
)
from padroes132.series import (
    Poly, QSeries, RationalFunction, catalan_series, first_mismatch, format_coefficient, motzkin_series,
    parse_coefficient, series_arithmetic, shift_div, solve_fixed_point, sqrt_series
)

MOTZKIN = [1, 1, 2, 4, 9, 21, 51, 127, 323, 835, 2188, 5798, 15511, 41835, 113634, 310572, 853467]
CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]

coefficients = st.lists(st.integers(min_value=-20, max_value=20), min_size=6, max_size=6)


def test_motzkin_and_catalan_fixed_points():
    assert motzkin_series(16).as_integers() == MOTZKIN
    assert catalan_series(10).as_integers() == CATALAN


def test_coefficients_are_exact_strings():
    assert format_coefficient(Fraction(1, 2)) == "1/2"
    assert format_coefficient(Fraction(-6, 3)) == "-2"
    assert parse_coefficient("3/4") == Fraction(3, 4)
    half = QSeries.constant(Fraction(1, 2), 2)
    assert half.as_strings() == ["1/2", "0", "0"]


def test_geometric_series_by_division():
    """1/(1-2x) = Σ 2^n x^n."""
    s = 1 / QSeries.from_poly(Poly.of(1, -2), 8)
    assert s.as_integers() == [2 ** n for n in range(9)]


def test_order_is_minimum_of_operands():
    a = QSeries.from_sequence([1, 1, 1, 1, 1])
    b = QSeries.from_sequence([1, 2, 3])
    assert (a + b).order == 2
    assert (a * b).order == 2
    assert a.truncate(10).order == 4


def test_division_by_zero_constant_term():
    with pytest.raises(SeriesDivisionError):
        QSeries.from_sequence([1, 1]) / QSeries.x_power(1, 3)
    with pytest.raises(SeriesDivisionError):
        RationalFunction(Poly.of(1), Poly.of(0, 1))


def test_shift_div():
    s = QSeries.from_sequence([0, 0, 3, 4, 5])
    assert shift_div(s, 2).as_integers() == [3, 4, 5]
    assert s.shift_div(2).order == 2
    with pytest.raises(ShiftDivisionError):
        shift_div(QSeries.from_sequence([0, 1, 2]), 2)


def test_sqrt_of_square_and_errors():
    """√(1-4x) pela recorrência dá os coeficientes -2·Catalan(n-1)."""
    root = sqrt_series(QSeries.from_poly(Poly.of(1, -4), 8))
    expected = [1] + [-2 * c for c in CATALAN[:8]]
    assert root.as_integers() == expected
    with pytest.raises(SqrtSeriesError):
        sqrt_series(QSeries.constant(4, 3))


def test_fixed_point_rejects_non_contraction():
    with pytest.raises(ContractionError):
        solve_fixed_point(lambda s: 1 + s, 5)


def test_first_mismatch():
    assert first_mismatch([1, 2, 3], [1, 2, 3]) is None
    assert first_mismatch([1, 2, 3, 4], [1, 2, 5, 4]) == 2
    assert first_mismatch([1, 2, 3, 4], [1, 2, 5, 4], upto=1) is None
    assert QSeries.from_sequence([1, 1, 2]).agrees_with([1, 1, 2, 5])


def test_rational_function_expansion():
    """(1-3x)(1-x)/(1-5x+6x²-x³) = 1,1,2,5,14,42,131."""
    rf = RationalFunction(Poly.of(1, -3) * Poly.of(1, -1), Poly.of(1, -5, 6, -1))
    assert rf.expand(6).as_integers() == [1, 1, 2, 5, 14, 42, 131]


@settings(max_examples=30, deadline=None)
@given(coefficients, coefficients, coefficients)
def test_ring_axioms(a, b, c):
    a, b, c = (QSeries.from_sequence(v) for v in (a, b, c))
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert series_arithmetic(a, b, "sub") + b == a


@settings(max_examples=30, deadline=None)
@given(coefficients)
def test_division_inverts_multiplication(values):
    values[0] = values[0] or 1
    a = QSeries.from_sequence(values)
    b = QSeries.from_sequence([1, 3, -1, 0, 2, 5])
    assert (a * b) / b == a


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=-5, max_value=5), min_size=5, max_size=5))
def test_sqrt_squares_back(tail):
    a = QSeries.from_sequence([1] + tail)
    root = sqrt_series(a)
    assert root * root == a
