"""
Polinômios de Chebyshev de segunda espécie no argumento t = 1/(2√x).

Toda expressão em U_k(t) é reescrita com os polinômios reescalados
V_k(x) = x^{k/2}·U_k(1/(2√x)), que satisfazem V_0 = V_1 = 1 e
V_k = V_{k-1} - x·V_{k-2}. Assim U_k(t) = x^{-k/2}·V_k(x) e as formas
fechadas viram séries racionais; a camada UExpr controla as meias
potências de x e recusa qualquer resíduo fracionário.
"""
import functools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np
from scipy.special import eval_chebyu

from padroes132.error_handler import HalfPowerError, SeriesError
from padroes132.series import DEFAULT_ORDER, Poly, QSeries, RationalFunction

log = logging.getLogger(__name__)

SAMPLE_POINTS = (0.01, 0.04, 0.09)


@dataclass(frozen=True)
class VPoly:
    k: int
    poly: Poly

    def __str__(self):
        return f"V_{self.k} = {self.poly}"


@functools.lru_cache(maxsize=None)
def _v(k: int) -> Poly:
    # V_{-1} = 0 estende a recorrência (R_0 = V_{-1}/V_0 = 0)
    if k == -1:
        return Poly()
    if k in (0, 1):
        return Poly.of(1)
    return _v(k - 1) - Poly.x() * _v(k - 2)


def v_poly(k: int) -> VPoly:
    """
    Polinômio V_k pela recorrência de três termos.

    Args:
        k (int): Índice, k >= 0

    Returns:
        VPoly: grau floor(k/2), V_k(0) = 1
    """
    if k < 0:
        raise ValueError(f"v_poly exige k >= 0, recebido {k}")
    return VPoly(k, _v(k))


def r_series(k: int, order: int = DEFAULT_ORDER, route: str = "ratio") -> QSeries:
    """
    R_k(x) = U_{k-1}(t)/(√x·U_k(t)) = V_{k-1}/V_k.

    Args:
        k (int): k >= 1
        order (int): Ordem de truncamento
        route (str): "ratio" (quociente de polinômios) ou "continued_fraction"
            (R_1 = 1, R_k = 1/(1 - x·R_{k-1}))
    """
    if k < 1:
        raise ValueError(f"r_series exige k >= 1, recebido {k}")
    if route == "ratio":
        return RationalFunction(_v(k - 1), _v(k)).expand(order)
    if route == "continued_fraction":
        r = QSeries.constant(1, order)
        for _ in range(2, k + 1):
            r = 1 / (1 - r.mul_x(1))
        return r
    raise ValueError(f"Rota desconhecida para R_k: {route}")


def inv_u_squared(k: int, order: int = DEFAULT_ORDER) -> QSeries:
    """1/U_k²(1/(2√x)) = x^k / V_k² como série."""
    if k < 1:
        raise ValueError(f"inv_u_squared exige k >= 1, recebido {k}")
    return RationalFunction(Poly.monomial(k), _v(k) ** 2).expand(order)


@dataclass(frozen=True)
class UTerm:
    """
    Monômio coeff · x^{half_power/2} · Π V_j^{e_j}.

    `v_powers` é uma tupla ordenada de pares (j, e_j) com e_j != 0.
    """
    coeff: Fraction
    half_power: int = 0
    v_powers: Tuple[Tuple[int, int], ...] = ()

    def __mul__(self, other: "UTerm") -> "UTerm":
        powers: Dict[int, int] = dict(self.v_powers)
        for j, e in other.v_powers:
            powers[j] = powers.get(j, 0) + e
        return UTerm(self.coeff * other.coeff, self.half_power + other.half_power,
                     tuple(sorted((j, e) for j, e in powers.items() if e != 0)))

    def inverse(self) -> "UTerm":
        if self.coeff == 0:
            raise SeriesError("Inversão de termo nulo")
        return UTerm(1 / self.coeff, -self.half_power, tuple((j, -e) for j, e in self.v_powers))

    def to_series(self, order: int) -> QSeries:
        if self.coeff == 0:
            return QSeries.zero(order)
        if self.half_power % 2:
            raise HalfPowerError(f"Resíduo de meia potência x^({self.half_power}/2) na conversão", details=str(self))
        power = self.half_power // 2
        if power < 0:
            raise SeriesError(f"Termo com potência negativa x^{power} não é série de potências", details=str(self))
        numerator = Poly.monomial(power, self.coeff)
        denominator = Poly.of(1)
        for j, e in self.v_powers:
            if e > 0:
                numerator = numerator * _v(j) ** e
            else:
                denominator = denominator * _v(j) ** (-e)
        return RationalFunction(numerator, denominator).expand(order)

    def __str__(self):
        vs = "·".join(f"V_{j}^{e}" for j, e in self.v_powers)
        return f"{self.coeff}·x^({self.half_power}/2){'·' + vs if vs else ''}"


@dataclass(frozen=True)
class UExpr:
    """Soma de UTerm; fechada para +, -, * e divisão por um único termo."""
    terms: Tuple[UTerm, ...] = field(default_factory=tuple)

    @classmethod
    def const(cls, value) -> "UExpr":
        return cls((UTerm(Fraction(value)),))

    def _coerce(self, other) -> "UExpr":
        if isinstance(other, UExpr):
            return other
        if isinstance(other, (int, Fraction)):
            return UExpr.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return UExpr(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return UExpr(tuple(UTerm(-t.coeff, t.half_power, t.v_powers) for t in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return UExpr(tuple(a * b for a in self.terms for b in other.terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other.terms) != 1:
            raise SeriesError("Divisão de UExpr só é definida por um único termo")
        return self * UExpr((other.terms[0].inverse(),))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, exponent: int):
        result = UExpr.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def to_series(self, order: int = DEFAULT_ORDER) -> QSeries:
        """
        Expande a soma como série racional.

        Raises:
            HalfPowerError: algum termo conserva potência fracionária de x
        """
        total = QSeries.zero(order)
        for term in self.terms:
            total = total + term.to_series(order)
        return total


def u(k: int) -> UExpr:
    """U_k(t) = x^{-k/2} V_k."""
    return UExpr((UTerm(Fraction(1), -k, ((k, 1),)),))


def v(k: int) -> UExpr:
    """V_k(x) como fator polinomial (ex: 1 - x = V_2)."""
    return UExpr((UTerm(Fraction(1), 0, ((k, 1),)),))


def sqrt_x() -> UExpr:
    return UExpr((UTerm(Fraction(1), 1),))


def t_param() -> UExpr:
    """t = 1/(2√x)."""
    return UExpr((UTerm(Fraction(1, 2), -1),))


def u_float(k: int, t: float) -> float:
    """U_k(t) em ponto flutuante pela recorrência U_k = 2t·U_{k-1} - U_{k-2}."""
    prev, cur = 1.0, 2.0 * t
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * t * cur - prev
    return cur


def rescaling_error(k: int, x: float) -> float:
    """
    |V_k(x) - x^{k/2}·U_k(1/(2√x))|, com U_k pela recorrência e pelo scipy.

    Devolve o maior dos dois desvios.
    """
    t = 1.0 / (2.0 * np.sqrt(x))
    scale = x ** (k / 2.0)
    vk = _v(k)(float(x))
    by_recurrence = abs(vk - scale * u_float(k, t))
    by_scipy = abs(vk - scale * float(eval_chebyu(k, t)))
    return max(by_recurrence, by_scipy)


def check_rescaling(max_k: int = 8, points=SAMPLE_POINTS, tolerance: float = 1e-9) -> bool:
    """Confere V_k contra a definição trigonométrica nos pontos de amostra."""
    worst = max(rescaling_error(k, x) for k in range(max_k + 1) for x in points)
    log.debug(f"Maior desvio do reescalonamento V_k: {worst:.3e}")
    return worst < tolerance
