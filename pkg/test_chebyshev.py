import pytest

from padroes132.chebyshev import (
    UExpr, check_rescaling, inv_u_squared, r_series, rescaling_error, sqrt_x, t_param, u, v, v_poly
)
from padroes132.error_handler import HalfPowerError
from padroes132.series import Poly, QSeries


def test_v_recurrence():
    """V_2 = 1-x, V_3 = 1-2x, V_4 = 1-3x+x²."""
    assert v_poly(0).poly == Poly.of(1)
    assert v_poly(2).poly == Poly.of(1, -1)
    assert v_poly(3).poly == Poly.of(1, -2)
    assert v_poly(4).poly == Poly.of(1, -3, 1)
    assert v_poly(6).poly == Poly.of(1, -5, 6, -1)
    for k in range(9):
        assert v_poly(k).poly.degree == k // 2


def test_rescaling_matches_trigonometric_definition():
    assert check_rescaling(max_k=8)
    assert rescaling_error(5, 0.04) < 1e-10


@pytest.mark.parametrize("k", range(2, 9))
def test_r_satisfies_continued_fraction(k):
    """R_k·(1 - x·R_{k-1}) = 1, exato até a ordem 16."""
    rk = r_series(k, 16)
    identity = rk * (1 - r_series(k - 1, 16).mul_x(1))
    assert identity == QSeries.constant(1, 16)
    assert rk == r_series(k, 16, route="continued_fraction")


def test_small_r_values():
    assert r_series(1, 5).as_integers() == [1, 0, 0, 0, 0, 0]
    assert r_series(2, 5).as_integers() == [1] * 6
    assert r_series(3, 5).as_integers() == [1, 1, 2, 4, 8, 16]


def test_r_converges_to_catalan():
    """R_k concorda com Catalan até n = k-1."""
    assert r_series(7, 6).as_integers() == [1, 1, 2, 5, 14, 42, 132]


def test_inverse_u_squared():
    """1/U_3² = x³/(1-2x)²."""
    assert inv_u_squared(3, 5).as_integers() == [0, 0, 0, 1, 4, 12]
    assert (1 / u(3) ** 2).to_series(5) == inv_u_squared(3, 5)


def test_half_powers_cancel_or_fail():
    assert (sqrt_x() * sqrt_x()).to_series(3).as_integers() == [0, 1, 0, 0]
    assert (2 * t_param() * sqrt_x()).to_series(2).as_integers() == [1, 0, 0]
    with pytest.raises(HalfPowerError):
        (u(1) * v(2)).to_series(3)


def test_u_expression_arithmetic():
    """U_2/U_1 = x^{-1/2}V_2, multiplicado por √x dá 1 - x."""
    expr = u(2) / u(1) * sqrt_x()
    assert expr.to_series(3).as_integers() == [1, -1, 0, 0]
    assert UExpr().to_series(2).as_integers() == [0, 0, 0]
    assert (UExpr.const(3) - 1).to_series(1).as_integers() == [2, 0]
