"""
Séries formais de potências truncadas com coeficientes racionais exatos.

Toda função geradora do projeto (F, G, H, Φ, Motzkin e as formas fechadas)
circula como QSeries: N+1 coeficientes Fraction, truncada em x^{N+1}.
Nenhuma operação deste módulo usa ponto flutuante.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

from padroes132.error_handler import (
    SeriesError, SeriesDivisionError, ShiftDivisionError, SqrtSeriesError, ContractionError
)

log = logging.getLogger(__name__)

Rational = Fraction
Number = Union[int, Fraction]

DEFAULT_ORDER = 16


def format_coefficient(value: Number) -> str:
    """Serializa um coeficiente como inteiro decimal ou "p/q" (nunca float)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_coefficient(text: str) -> Fraction:
    return Fraction(text)


@dataclass(frozen=True)
class Poly:
    """Polinômio em x; coeffs[i] é o coeficiente de x^i, sem zeros finais."""
    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def of(cls, *coeffs: Number) -> "Poly":
        return cls(tuple(coeffs))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, power: int, coeff: Number = 1) -> "Poly":
        return cls((0,) * power + (coeff,))

    @property
    def degree(self) -> int:
        """Grau; -1 para o polinômio nulo."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        size = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self[i] + other[i] for i in range(size)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

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
        if self.is_zero or other.is_zero:
            return Poly()
        res = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                res[i + j] += a * b
        return Poly(tuple(res))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("Expoente negativo em polinômio")
        result = Poly((1,))
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __call__(self, x):
        """Avalia pelo esquema de Horner (aceita float ou Fraction)."""
        result = 0
        for c in reversed(self.coeffs):
            result = result * x + (float(c) if isinstance(x, float) else c)
        return result

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            coef = format_coefficient(c)
            terms.append(coef if i == 0 else f"{coef}*x^{i}")
        return " + ".join(terms)


@dataclass(frozen=True)
class QSeries:
    """
    Série truncada c_0 + c_1 x + ... + c_N x^N (mod x^{N+1}).

    Resultados aritméticos carregam order = mínimo das ordens dos operandos.
    """
    order: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 0:
            raise SeriesError(f"Ordem de truncamento negativa: {self.order}")
        coeffs = [Fraction(c) for c in self.coeffs[:self.order + 1]]
        coeffs.extend([Fraction(0)] * (self.order + 1 - len(coeffs)))
        object.__setattr__(self, "coeffs", tuple(coeffs))

    # -- construtores -------------------------------------------------------
    @classmethod
    def from_sequence(cls, values: Iterable[Number], order: Optional[int] = None) -> "QSeries":
        values = tuple(values)
        if order is None:
            order = len(values) - 1
        return cls(order, values)

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "QSeries":
        return cls(order, ())

    @classmethod
    def constant(cls, value: Number, order: int = DEFAULT_ORDER) -> "QSeries":
        return cls(order, (value,))

    @classmethod
    def x_power(cls, m: int, order: int = DEFAULT_ORDER, coeff: Number = 1) -> "QSeries":
        return cls(order, (0,) * m + (coeff,))

    @classmethod
    def from_poly(cls, poly: Poly, order: int = DEFAULT_ORDER) -> "QSeries":
        return cls(order, poly.coeffs)

    # -- acesso -------------------------------------------------------------
    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "QSeries":
        """Reduz a ordem (nunca aumenta: coeficientes além de N são desconhecidos)."""
        return QSeries(min(order, self.order), self.coeffs)

    def as_strings(self):
        return [format_coefficient(c) for c in self.coeffs]

    def as_integers(self):
        """Coeficientes como int; falha se algum não for inteiro."""
        out = []
        for n, c in enumerate(self.coeffs):
            if c.denominator != 1:
                raise SeriesError(f"Coeficiente não inteiro em x^{n}: {format_coefficient(c)}")
            out.append(c.numerator)
        return out

    # -- aritmética ---------------------------------------------------------
    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return QSeries.constant(other, self.order)
        if isinstance(other, Poly):
            return QSeries.from_poly(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        return QSeries(order, tuple(self.coeffs[i] + other.coeffs[i] for i in range(order + 1)))

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries(self.order, tuple(c * other for c in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        res = [Fraction(0)] * (order + 1)
        for i in range(order + 1):
            if a[i] == 0:
                continue
            ai = a[i]
            for j in range(order + 1 - i):
                if b[j]:
                    res[i + j] += ai * b[j]
        return QSeries(order, tuple(res))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise SeriesDivisionError("Divisão de série por zero")
            return QSeries(self.order, tuple(c / other for c in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def inverse(self) -> "QSeries":
        """1/a por recorrência nos coeficientes; exige a_0 != 0."""
        a = self.coeffs
        if a[0] == 0:
            raise SeriesDivisionError("Divisão por série com termo constante nulo")
        inv0 = 1 / a[0]
        res = [inv0]
        for n in range(1, self.order + 1):
            acc = Fraction(0)
            for i in range(1, n + 1):
                if a[i]:
                    acc += a[i] * res[n - i]
            res.append(-acc * inv0)
        return QSeries(self.order, tuple(res))

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QSeries.constant(1, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def mul_x(self, m: int) -> "QSeries":
        """Multiplica por x^m mantendo a ordem."""
        if m < 0:
            raise ValueError("Use shift_div para dividir por potências de x")
        return QSeries(self.order, (0,) * m + self.coeffs)

    def shift_div(self, m: int) -> "QSeries":
        return shift_div(self, m)

    def agrees_with(self, other: Union["QSeries", Sequence[Number]], upto: Optional[int] = None) -> bool:
        return first_mismatch(self, other, upto) is None

    def __str__(self):
        return ", ".join(self.as_strings())


def series_arithmetic(a: QSeries, b: QSeries, op: str) -> QSeries:
    """
    Aplica add/sub/mul/div a duas séries truncadas.

    Raises:
        SeriesDivisionError: em div, se b tem termo constante nulo
    """
    operations = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
    }
    if op not in operations:
        raise ValueError(f"Operação desconhecida: {op}")
    return operations[op]()


def shift_div(a: QSeries, m: int) -> QSeries:
    """
    Divide por x^m: result[n] = a[n+m], ordem N-m.

    Raises:
        ShiftDivisionError: algum dos m primeiros coeficientes não é nulo
    """
    if m <= 0:
        raise ValueError(f"shift_div exige m positivo, recebido {m}")
    if m > a.order:
        raise ShiftDivisionError(f"Não é possível dividir por x^{m} uma série de ordem {a.order}")
    for n in range(m):
        if a.coeffs[n] != 0:
            raise ShiftDivisionError(
                f"Coeficiente de x^{n} não nulo ({format_coefficient(a.coeffs[n])}) ao dividir por x^{m}")
    return QSeries(a.order - m, a.coeffs[m:])


def sqrt_series(a: QSeries) -> QSeries:
    """
    Raiz quadrada com termo constante 1, pela recorrência
    b_n = (a_n - sum_{i=1}^{n-1} b_i b_{n-i}) / 2.

    Raises:
        SqrtSeriesError: termo constante diferente de 1
    """
    if a.coeffs[0] != 1:
        raise SqrtSeriesError(f"Raiz de série com termo constante {format_coefficient(a.coeffs[0])} (esperado 1)")
    b = [Fraction(1)]
    for n in range(1, a.order + 1):
        acc = sum((b[i] * b[n - i] for i in range(1, n)), Fraction(0))
        b.append((a.coeffs[n] - acc) / 2)
    return QSeries(a.order, tuple(b))


def solve_fixed_point(update: Callable[[QSeries], QSeries], order: int = DEFAULT_ORDER) -> QSeries:
    """
    Resolve s = update(s) por iteração a partir da série nula.

    Para uma contração x-ádica, cada iteração fixa pelo menos mais um
    coeficiente; em até N+1 passos a série estabiliza. Ao final, a
    equação é conferida exatamente até a ordem do resultado.

    Args:
        update (callable): Mapa série -> série
        order (int): Ordem de truncamento N

    Returns:
        QSeries: Ponto fixo módulo x^{N+1}

    Raises:
        ContractionError: coeficiente já estabilizado mudou, ou resíduo não nulo
    """
    current = QSeries.zero(order)
    for step in range(1, order + 3):
        nxt = update(current)
        common = min(nxt.order, current.order)
        changed = [i for i in range(common + 1) if nxt.coeffs[i] != current.coeffs[i]]
        if changed and changed[0] < step - 1:
            raise ContractionError(
                f"Atualização não é contração: coeficiente x^{changed[0]} mudou no passo {step}")
        current = nxt.truncate(common)
        if not changed:
            log.debug(f"Ponto fixo estabilizado em {step} passos (ordem {current.order})")
            break

    residual = update(current)
    if first_mismatch(residual, current) is not None:
        raise ContractionError("Resíduo não nulo: o ponto fixo não satisfaz a equação")
    return current.truncate(residual.order)


def motzkin_series(order: int = DEFAULT_ORDER) -> QSeries:
    """Números de Motzkin via M = 1 + xM + x²M²."""
    return solve_fixed_point(lambda m: 1 + m.mul_x(1) + (m * m).mul_x(2), order)


def catalan_series(order: int = DEFAULT_ORDER) -> QSeries:
    """Números de Catalan via C = 1 + xC²."""
    return solve_fixed_point(lambda c: 1 + (c * c).mul_x(1), order)


@dataclass(frozen=True)
class RationalFunction:
    """Quociente P/Q de polinômios com Q(0) != 0, expandido sob demanda."""
    numerator: Poly
    denominator: Poly

    def __post_init__(self):
        if self.denominator[0] == 0:
            raise SeriesDivisionError(f"Denominador com termo constante nulo: {self.denominator}")

    def expand(self, order: int = DEFAULT_ORDER) -> QSeries:
        return QSeries.from_poly(self.numerator, order) / QSeries.from_poly(self.denominator, order)

    def __str__(self):
        return f"({self.numerator}) / ({self.denominator})"


def first_mismatch(a: Union[QSeries, Sequence[Number]], b: Union[QSeries, Sequence[Number]],
                   upto: Optional[int] = None) -> Optional[int]:
    """Primeiro n <= upto em que as sequências diferem; None se concordam."""
    a = list(a.coeffs if isinstance(a, QSeries) else a)
    b = list(b.coeffs if isinstance(b, QSeries) else b)
    limit = min(len(a), len(b)) - 1
    if upto is not None:
        limit = min(limit, upto)
    for n in range(limit + 1):
        if Fraction(a[n]) != Fraction(b[n]):
            return n
    return None
