"""
Formas fechadas das funções geradoras F, G, H e Φ e os dois motores de
recursão (avoidância pela decomposição canônica e contenção única).

Cada construtor recebe um Params e a ordem de truncamento e devolve uma
QSeries. Os construtores validam as hipóteses da família e levantam
CatalogError quando os parâmetros ficam fora delas.
"""
import functools
import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from padroes132.chebyshev import UExpr, inv_u_squared, r_series, sqrt_x, t_param, u, v
from padroes132.enumeration import count_series, mixed_avoid_contain_series
from padroes132.error_handler import CatalogError, DecompositionError
from padroes132.pattern_core import (
    EMPTY_PATTERN, GeneralizedPattern, canonical_decomposition, parse_pattern
)
from padroes132.series import (
    DEFAULT_ORDER, QSeries, Poly, RationalFunction, catalan_series, motzkin_series, shift_div,
    solve_fixed_point, sqrt_series
)

log = logging.getLogger(__name__)

DEFAULT_HORIZON = 12
CHAIN_TAUS = ("12", "1-2", "21", "2-1")


@dataclass(frozen=True)
class Params:
    """Parâmetros de uma instância de família (k, d e padrões auxiliares)."""
    k: Optional[int] = None
    d: Optional[int] = None
    tau: Optional[str] = None
    tau1: Optional[str] = None
    tau2: Optional[str] = None

    def label(self) -> str:
        parts = []
        for name in ("k", "d", "tau", "tau1", "tau2"):
            value = getattr(self, name)
            if value is not None:
                parts.append(f"{name}={value!r}" if isinstance(value, str) else f"{name}={value}")
        return " ".join(parts)


def _require(condition: bool, message: str, entry_id: str):
    if not condition:
        raise CatalogError(f"Parâmetros fora das hipóteses de {entry_id}: {message}", entry_id=entry_id)


def _pattern_or_empty(text: Optional[str]) -> GeneralizedPattern:
    return parse_pattern(text) if text else EMPTY_PATTERN


def _name(pat: GeneralizedPattern) -> str:
    return str(pat) or "∅"


def _shift(pat: GeneralizedPattern, offset: int) -> Tuple[Tuple[int, ...], Tuple[bool, ...]]:
    return tuple(letter + offset for letter in pat.letters), pat.adjacency


def _concat(*parts: Tuple[Tuple[int, ...], Tuple[bool, ...]]) -> GeneralizedPattern:
    """Junta fragmentos (letras, adjacência) separando-os por traços."""
    letters = []
    adjacency = []
    for part_letters, part_adjacency in parts:
        if not part_letters:
            continue
        if letters:
            adjacency.append(False)
        letters.extend(part_letters)
        adjacency.extend(part_adjacency)
    return GeneralizedPattern(tuple(letters), tuple(adjacency))


def _letters(*values: int):
    return tuple(values), ()


# ---------------------------------------------------------------------------
# Construtores de padrões das famílias
# ---------------------------------------------------------------------------

def increasing_pattern(k: int) -> GeneralizedPattern:
    """[k] = 12...k sem traços."""
    return GeneralizedPattern.consecutive(range(1, k + 1))


def decreasing_pattern(k: int) -> GeneralizedPattern:
    """<k> = k...21 sem traços."""
    return GeneralizedPattern.consecutive(range(k, 0, -1))


def chain_pattern(tau: str, k: int) -> GeneralizedPattern:
    """τ-3-4-...-k com τ de duas letras."""
    base = parse_pattern(tau)
    return _concat((base.letters, base.adjacency), *(_letters(j) for j in range(3, k + 1)))


def tail_pattern(tau1: str, k: int) -> GeneralizedPattern:
    """τ'-(d+1)(d+2)...k, com d = |τ'|."""
    prime = parse_pattern(tau1)
    d = prime.k
    run = tuple(range(d + 1, k + 1))
    return _concat((prime.letters, prime.adjacency), (run, (True,) * (len(run) - 1)))


def double_run_pattern(tau: Optional[str], k: int) -> GeneralizedPattern:
    """τ-3-...-(k-2)-(k-1)k; para k=3 o prefixo é a letra 1 (1-23)."""
    prefix = GeneralizedPattern((1,)) if k == 3 else chain_pattern(tau, k - 2)
    return _concat((prefix.letters, prefix.adjacency), ((k - 1, k), (True,)))


def two_layer_pattern(tau1: Optional[str], tau2: Optional[str]) -> GeneralizedPattern:
    """τ'-k-τ''-d com as letras de τ' acima de d e as de τ'' abaixo de d."""
    prime = _pattern_or_empty(tau1)
    second = _pattern_or_empty(tau2)
    d = second.k + 1
    k = prime.k + second.k + 2
    return _concat(_shift(prime, d), _letters(k), (second.letters, second.adjacency), _letters(d))


def two_layer_literal_pattern(k: int, d: int) -> GeneralizedPattern:
    """(d+1)(d+2)-(d+3)-...-k-12-3-...-d."""
    upper = chain_pattern("12", k - d)
    lower = chain_pattern("12", d)
    return _concat(_shift(upper, d), (lower.letters, lower.adjacency))


def gdd1_pattern(d: int, k: int) -> GeneralizedPattern:
    """12...d-(d+1)-...-k."""
    head = increasing_pattern(d)
    return _concat((head.letters, head.adjacency), *(_letters(j) for j in range(d + 1, k + 1)))


@functools.lru_cache(maxsize=None)
def wedge_patterns() -> Tuple[GeneralizedPattern, ...]:
    """
    Padrões com F = R_k: os dois exemplos de nove letras e a família
    τ'-k-τ''-d com τ', τ'' cadeias 12-3-...-p (ou vazias, ou "1") para k <= 6.
    """
    def chain(length: int) -> str:
        if length == 0:
            return ""
        if length == 1:
            return "1"
        return str(chain_pattern("12", length))

    patterns = [parse_pattern("6-4-5-7-8-3-9-12"), parse_pattern("45-6-3-7-8-12-9")]
    for k in range(2, 7):
        for p in range(0, k - 1):
            patterns.append(two_layer_pattern(chain(p), chain(k - 2 - p)))
    return tuple(patterns)


def is_increasing_run(pat: GeneralizedPattern) -> bool:
    return pat.k >= 1 and pat.is_consecutive and pat.letters == tuple(range(1, pat.k + 1))


def is_decreasing_run(pat: GeneralizedPattern) -> bool:
    return pat.k >= 1 and pat.is_consecutive and pat.letters == tuple(range(pat.k, 0, -1))


def tail_split(pat: GeneralizedPattern) -> Optional[Tuple[GeneralizedPattern, int, int]]:
    """
    Reconhece a forma τ'-(d+1)(d+2)...k.

    Returns:
        tuple: (τ', d, k) ou None se o padrão não tem essa forma
    """
    k = pat.k
    if k < 2:
        return None
    start = k - 1
    while start > 0 and pat.adjacency[start - 1] and pat.letters[start - 1] == pat.letters[start] - 1:
        start -= 1
    d = start
    if d < 1 or pat.letters[start] != d + 1 or pat.letters[-1] != k:
        return None
    if pat.adjacency[start - 1]:
        return None
    return pat.segment(0, d), d, k


# ---------------------------------------------------------------------------
# Família F (avoidância)
# ---------------------------------------------------------------------------

def all_adjacent(k: int, order: int = DEFAULT_ORDER) -> QSeries:
    """F = Σ_{j=0}^{k-1} (xF)^j, comum a [k] e <k>."""
    def update(f: QSeries) -> QSeries:
        xf = f.mul_x(1)
        total = QSeries.constant(1, f.order)
        power = QSeries.constant(1, f.order)
        for _ in range(1, k):
            power = power * xf
            total = total + power
        return total
    return solve_fixed_point(update, order)


def tail_adjacent(f_prime: QSeries, d: int, k: int, order: int = DEFAULT_ORDER) -> QSeries:
    """F = Σ_{j=0}^{k-d-1} (xF)^j + x^{k-d} F^{k-d} F_{τ'}."""
    run = k - d

    def update(f: QSeries) -> QSeries:
        xf = f.mul_x(1)
        total = QSeries.constant(1, f.order)
        power = QSeries.constant(1, f.order)
        for _ in range(1, run):
            power = power * xf
            total = total + power
        return total + (power * xf) * f_prime
    return solve_fixed_point(update, order)


def double_run_radical(r: QSeries, order: int) -> QSeries:
    """(1 - x - √(1 - 2x + x² - 4x²R)) / (2x²R)."""
    work = order + 2
    r = r.truncate(work) if r.order >= work else r
    one_minus_x = QSeries.from_poly(Poly.of(1, -1), r.order)
    radicand = one_minus_x * one_minus_x - (r * 4).mul_x(2)
    numerator = one_minus_x - sqrt_series(radicand)
    return (shift_div(numerator, 2) / (r.truncate(r.order - 2) * 2)).truncate(order)


def small_f(tau: str, order: int = DEFAULT_ORDER) -> QSeries:
    """Formas fechadas dos padrões consecutivos de três letras."""
    work = order + 2
    if tau in ("123", "321"):
        radicand = QSeries.from_poly(Poly.of(1, -2, -3), work)
        return (shift_div(QSeries.from_poly(Poly.of(1, -1), work) - sqrt_series(radicand), 2) / 2).truncate(order)
    if tau == "132":
        radicand = QSeries.from_poly(Poly.of(1, -4), work)
        return (shift_div(1 - sqrt_series(radicand), 1) / 2).truncate(order)
    if tau in ("213", "312"):
        radicand = QSeries.from_poly(Poly.of(1, 0, 1) ** 2 - Poly.of(0, 4), work)
        numerator = QSeries.from_poly(Poly.of(1, 0, -1), work) - sqrt_series(radicand)
        return (shift_div(numerator, 1) / QSeries.from_poly(Poly.of(2, -2), work)).truncate(order)
    if tau == "231":
        return RationalFunction(Poly.of(1, -1), Poly.of(1, -2)).expand(order)
    raise CatalogError(f"Padrão sem forma fechada de três letras: {tau}", entry_id="F.small")


def directed_animals(order: int = DEFAULT_ORDER) -> QSeries:
    """1/(1 - x·M(x))."""
    return 1 / (1 - motzkin_series(order).mul_x(1))


def animals_radical(order: int = DEFAULT_ORDER) -> QSeries:
    """Expressão literal ½·√((1+x)/(1-3x)); termo constante 1/2."""
    ratio = RationalFunction(Poly.of(1, 1), Poly.of(1, -3)).expand(order)
    return sqrt_series(ratio) * Fraction(1, 2)


def two_layer_closed(f_prime: QSeries, f_second: QSeries) -> QSeries:
    """(1 - xF' - xF'') / ((1 - xF')(1 - xF'') - x)."""
    a = 1 - f_prime.mul_x(1)
    b = 1 - f_second.mul_x(1)
    x = QSeries.x_power(1, a.order)
    return (a + b - 1) / (a * b - x)


def two_layer_literal(k: int, d: int, order: int = DEFAULT_ORDER) -> QSeries:
    """1/(1 - x(1 - xR_{k-d}R_d)/(1 - x(R_{k-d} + R_d)))."""
    ra = r_series(k - d, order)
    rb = r_series(d, order)
    inner = (1 - (ra * rb).mul_x(1)) / (1 - (ra + rb).mul_x(1))
    return 1 / (1 - inner.mul_x(1))


# ---------------------------------------------------------------------------
# Famílias G, H, Φ
# ---------------------------------------------------------------------------

def con11(k: int, order: int = DEFAULT_ORDER) -> QSeries:
    """G = Σ_{j=1}^{k-1} j x^j G F^{j-1} + x^k F^k, com F = F_[k]."""
    f = all_adjacent(k, order)
    powers = [QSeries.constant(1, order)]
    for _ in range(k):
        powers.append(powers[-1] * f)
    forcing = powers[k].mul_x(k)

    def update(g: QSeries) -> QSeries:
        total = forcing
        for j in range(1, k):
            total = total + (g * powers[j - 1] * j).mul_x(j)
        return total
    return solve_fixed_point(update, order)


def small_g(tau: str, order: int = DEFAULT_ORDER) -> QSeries:
    """G_12 = G_21 = x²/(1-x)³ e G_123 = G_321 = x³M³/(1 - x - 2x²M)."""
    if tau in ("12", "21"):
        return RationalFunction(Poly.monomial(2), Poly.of(1, -1) ** 3).expand(order)
    if tau in ("123", "321"):
        m = motzkin_series(order)
        return (m ** 3).mul_x(3) / (1 - QSeries.x_power(1, order) - (m * 2).mul_x(2))
    raise CatalogError(f"Padrão sem forma fechada de contenção: {tau}", entry_id="G.small")


def cd2(k: int, order: int = DEFAULT_ORDER) -> QSeries:
    """1/((1-x)·U_k²) = x^k/(V_2·V_k²)."""
    return (1 / (v(2) * u(k) ** 2)).to_series(order)


def gdd1(d: int, k: int, order: int = DEFAULT_ORDER) -> QSeries:
    """U_d²/U_k² · G_[d]."""
    return (u(d) ** 2 / u(k) ** 2).to_series(order) * con11(d, order)


def h1(k: int, order: int = DEFAULT_ORDER) -> QSeries:
    """x/U_k² · Σ_{j=1}^{k-2} U_j²."""
    inner = sum((u(j) ** 2 for j in range(1, k - 1)), UExpr())
    return (sqrt_x() ** 2 * inner / u(k) ** 2).to_series(order)


def h21(k: int, order: int = DEFAULT_ORDER) -> QSeries:
    """x/U_k² · (Σ_{j=1}^{k-2} U_j² - 1)."""
    inner = sum((u(j) ** 2 for j in range(1, k - 1)), UExpr()) - 1
    return (sqrt_x() ** 2 * inner / u(k) ** 2).to_series(order)


def phi12k(k: int, order: int = DEFAULT_ORDER) -> QSeries:
    """1/(U_2U_k²)·[1 + Σ_{i=2}^{k-1} 2√x/(U_iU_{i+1})·(Σ_{j=1}^{i} U_j² - 1)]."""
    bracket = UExpr.const(1)
    for i in range(2, k):
        squares = sum((u(j) ** 2 for j in range(1, i + 1)), UExpr())
        bracket = bracket + 2 * sqrt_x() / (u(i) * u(i + 1)) * (squares - 1)
    return (bracket / (u(2) * u(k) ** 2)).to_series(order)


def phi21k(k: int, order: int = DEFAULT_ORDER) -> QSeries:
    """1/(4t³U_k²)·[U_2²/U_3 + Σ_{i=3}^{k-1} (Σ_{j=1}^{i} U_j² - 2)/(U_iU_{i+1})]."""
    bracket = u(2) ** 2 / u(3)
    for i in range(3, k):
        squares = sum((u(j) ** 2 for j in range(1, i + 1)), UExpr())
        bracket = bracket + (squares - 2) / (u(i) * u(i + 1))
    return (bracket / (4 * t_param() ** 3 * u(k) ** 2)).to_series(order)


def phi21(order: int = DEFAULT_ORDER) -> QSeries:
    """x³/(1-x)²."""
    return RationalFunction(Poly.monomial(3), Poly.of(1, -1) ** 2).expand(order)


def mixed21_literal(order: int = DEFAULT_ORDER) -> QSeries:
    """Expressão literal x²·F_21·(F_21 - 1) com F_21 = 1/(1-x)."""
    f21 = RationalFunction(Poly.of(1), Poly.of(1, -1)).expand(order)
    return (f21 * (f21 - 1)).mul_x(2)


# ---------------------------------------------------------------------------
# Séries de enumeração usadas como último recurso pelos motores
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def enumerated_series(family: str, pat: GeneralizedPattern, horizon: int) -> QSeries:
    """Série de contagem válida até o horizonte do oráculo."""
    log.warning(f"Sem forma fechada para {family}_{_name(pat)}: usando enumeração até n={horizon}")
    return count_series(family, pat, horizon).to_series()


@functools.lru_cache(maxsize=None)
def mixed_series(avoid: GeneralizedPattern, contain_once: GeneralizedPattern, horizon: int) -> QSeries:
    """G_α^β por enumeração: evita β e contém α exatamente uma vez."""
    log.debug(f"Série mista (evita '{avoid}', contém '{contain_once}' uma vez) até n={horizon}")
    return mixed_avoid_contain_series(avoid, contain_once, horizon).to_series()


class FEngine:
    """
    Motor de avoidância: F_τ = 1 + x Σ_{j=0}^{r} (F_{π^j} - F_{π^{j-1}}) F_{σ^j}.

    Sub-padrões sem decomposição caem, nesta ordem, em: padrão vazio
    (F_∅ = 0), blocos monótonos sem traço, padrões consecutivos de três
    letras, forma τ'-(d+1)...k e, por fim, enumeração até o horizonte.
    """

    def __init__(self, order: int = DEFAULT_ORDER, horizon: int = DEFAULT_HORIZON):
        self.order = order
        self.horizon = horizon
        self._cache: Dict[GeneralizedPattern, QSeries] = {}
        self._lock = threading.RLock()

    def f(self, pat: GeneralizedPattern) -> QSeries:
        with self._lock:
            if pat in self._cache:
                return self._cache[pat]
            result = self._resolve(pat)
            self._cache[pat] = result
            log.debug(f"F_{_name(pat)} resolvida até ordem {result.order}")
            return result

    def _resolve(self, pat: GeneralizedPattern) -> QSeries:
        if pat.is_empty:
            return QSeries.zero(self.order)
        try:
            decomposition = canonical_decomposition(pat)
        except DecompositionError:
            decomposition = None
        if decomposition is not None:
            return self._recurse(decomposition)
        if is_increasing_run(pat) or is_decreasing_run(pat):
            return all_adjacent(pat.k, self.order)
        if pat.k == 3 and pat.is_consecutive:
            return small_f("".join(str(v) for v in pat.letters), self.order)
        split = tail_split(pat)
        if split is not None:
            prime, d, k = split
            return tail_adjacent(self.f(prime), d, k, self.order)
        return enumerated_series("F", pat, self.horizon).truncate(self.order)

    def _recurse(self, decomposition) -> QSeries:
        tau = decomposition.pattern
        r = decomposition.r
        prefixes = [decomposition.prefix(j) for j in range(-1, r + 1)]
        suffixes = [decomposition.suffix(j) for j in range(0, r + 1)]
        known = {p: self.f(p) for p in set(prefixes) | set(suffixes) if p != tau}

        def series_of(p: GeneralizedPattern, current: QSeries) -> QSeries:
            return current if p == tau else known[p]

        def update(current: QSeries) -> QSeries:
            total = QSeries.zero(current.order)
            for j in range(r + 1):
                pi_j = series_of(prefixes[j + 1], current)
                pi_prev = series_of(prefixes[j], current)
                total = total + (pi_j - pi_prev) * series_of(suffixes[j], current)
            return 1 + total.mul_x(1)

        return solve_fixed_point(update, self.order)


def theorem1_f_engine(pat: GeneralizedPattern, order: int = DEFAULT_ORDER,
                      horizon: int = DEFAULT_HORIZON, engine: Optional[FEngine] = None) -> QSeries:
    """
    Avalia F_τ pela recursão da decomposição canônica.

    Raises:
        DecompositionError: a decomposição não se aplica ao padrão
    """
    canonical_decomposition(pat)
    engine = engine or FEngine(order, horizon)
    return engine.f(pat)


class GEngine:
    """
    Motor de contenção única.

    r = 0: G_τ = x F_τ G_{π^0} / (1 - x F_{π^0});
    r >= 1: (1 - x F_{π^0} - x F_{σ^r}) G_τ = x Σ_j G_{π^{j-1}}^{π^j} G_{σ^j}^{σ^{j-1}},
    com as séries mistas obtidas por enumeração.
    """

    def __init__(self, order: int = DEFAULT_ORDER, horizon: int = DEFAULT_HORIZON,
                 f_engine: Optional[FEngine] = None):
        self.order = order
        self.horizon = horizon
        self.f_engine = f_engine or FEngine(order, horizon)
        self._cache: Dict[GeneralizedPattern, QSeries] = {}
        self._lock = threading.RLock()

    def g(self, pat: GeneralizedPattern) -> QSeries:
        with self._lock:
            if pat not in self._cache:
                self._cache[pat] = self._resolve(pat)
            return self._cache[pat]

    def _resolve(self, pat: GeneralizedPattern) -> QSeries:
        if pat.is_empty:
            # toda permutação contém o padrão vazio exatamente uma vez
            return catalan_series(self.order)
        if is_increasing_run(pat) or is_decreasing_run(pat):
            return con11(pat.k, self.order)
        try:
            decomposition = canonical_decomposition(pat)
        except DecompositionError:
            return enumerated_series("G", pat, self.horizon).truncate(self.order)
        return self.contain1(decomposition)

    def contain1(self, decomposition) -> QSeries:
        tau = decomposition.pattern
        f = self.f_engine.f
        pi0 = decomposition.prefix(0)
        if decomposition.r == 0:
            numerator = (f(tau) * self.g(pi0)).mul_x(1)
            return numerator / (1 - f(pi0).mul_x(1))

        r = decomposition.r
        total = QSeries.zero(self.order)
        for j in range(1, r + 1):
            left = mixed_series(decomposition.prefix(j), decomposition.prefix(j - 1), self.horizon)
            right = mixed_series(decomposition.suffix(j - 1), decomposition.suffix(j), self.horizon)
            total = total + left * right
        denominator = 1 - f(pi0).mul_x(1) - f(decomposition.suffix(r)).mul_x(1)
        log.info(f"G_{tau} com r={r}: termos mistos por enumeração, válido até n={self.horizon}")
        return total.mul_x(1) / denominator


def contain1_g_engine(pat: GeneralizedPattern, order: int = DEFAULT_ORDER,
                      horizon: int = DEFAULT_HORIZON, engine: Optional[GEngine] = None) -> QSeries:
    """
    Avalia G_τ pela recursão de contenção única (resultado consultivo).

    Raises:
        DecompositionError: a decomposição não se aplica ao padrão
    """
    decomposition = canonical_decomposition(pat)
    engine = engine or GEngine(order, horizon)
    return engine.contain1(decomposition)


# ---------------------------------------------------------------------------
# Despacho por id de entrada
# ---------------------------------------------------------------------------

def _chain(p: Params, order: int) -> QSeries:
    _require(p.tau in CHAIN_TAUS and p.k is not None and p.k >= 2, "τ ∈ {12, 1-2, 21, 2-1} e k >= 2", "F.chain")
    return r_series(p.k, order)


def _all_adj(p: Params, order: int) -> QSeries:
    _require(p.k is not None and p.k >= 1, "k >= 1", "F.all_adj")
    return all_adjacent(p.k, order)


def _tail_adj(p: Params, order: int, horizon: int = DEFAULT_HORIZON) -> QSeries:
    _require(bool(p.tau1) and p.k is not None, "τ' não vazio e k informado", "F.tail_adj")
    prime = parse_pattern(p.tau1)
    _require(p.k > prime.k, "k > d = |τ'|", "F.tail_adj")
    return tail_adjacent(FEngine(order, horizon).f(prime), prime.k, p.k, order)


def _double_run(p: Params, order: int) -> QSeries:
    _require(p.k is not None and p.k >= 3, "k >= 3", "F.double_run")
    _require(p.k == 3 or p.tau in CHAIN_TAUS, "τ ∈ {12, 1-2, 21, 2-1} para k >= 4", "F.double_run")
    return double_run_radical(r_series(max(p.k - 2, 1), order + 2), order)


def _double_run_example(p: Params, order: int) -> QSeries:
    _require(p.tau in CHAIN_TAUS, "τ ∈ {12, 1-2, 21, 2-1}", "F.double_run_example")
    work = order + 2
    radicand = QSeries.from_poly(Poly.of(1, -4, 2, 0, 1), work)
    numerator = QSeries.from_poly(Poly.of(1, -2, 1), work) - sqrt_series(radicand)
    return (shift_div(numerator, 2) / 2).truncate(order)


def _two_layer(p: Params, order: int, horizon: int = DEFAULT_HORIZON) -> QSeries:
    engine = FEngine(order, horizon)
    prime = _pattern_or_empty(p.tau1)
    second = _pattern_or_empty(p.tau2)
    return two_layer_closed(engine.f(prime), engine.f(second))


def _wedge(p: Params, order: int) -> QSeries:
    _require(p.tau is not None, "padrão informado", "F.wedge")
    pat = parse_pattern(p.tau)
    _require(pat in wedge_patterns(), f"'{pat}' não é um padrão cunha do catálogo", "F.wedge")
    return r_series(pat.k, order)


def _small(p: Params, order: int) -> QSeries:
    return small_f(p.tau, order)


def _two_layer_literal(p: Params, order: int) -> QSeries:
    _require(p.k is not None and p.d is not None and p.d >= 2 and p.k - p.d >= 2, "d >= 2 e k - d >= 2",
             "F.two_layer_literal")
    return two_layer_literal(p.k, p.d, order)


def _fixed(entry_id: str, allowed: Tuple[str, ...], series: Callable[[int], QSeries]):
    """Construtor de entrada com padrão fixo: τ, se informado, precisa estar em `allowed`."""
    patterns = tuple(parse_pattern(text) for text in allowed)

    def builder(p: Params, order: int) -> QSeries:
        if p.tau is not None:
            _require(parse_pattern(p.tau) in patterns, f"τ ∈ {{{', '.join(allowed)}}}", entry_id)
        return series(order)
    return builder


def _cd2(p: Params, order: int) -> QSeries:
    _require(p.k is not None and p.k >= 2, "k >= 2", "G.cd2")
    return cd2(p.k, order)


def _gdd1(p: Params, order: int) -> QSeries:
    _require(p.k is not None and p.d is not None and p.k >= p.d >= 1, "k >= d >= 1", "G.gdd1")
    return gdd1(p.d, p.k, order)


def _g21(p: Params, order: int) -> QSeries:
    _require(p.k is not None and p.k >= 3, "k >= 3", "G.g21")
    return inv_u_squared(p.k, order)


def _con11(p: Params, order: int) -> QSeries:
    _require(p.k is not None and p.k >= 1, "k >= 1", "G.con11")
    return con11(p.k, order)


def _contain1(p: Params, order: int, horizon: int = DEFAULT_HORIZON) -> QSeries:
    _require(p.tau is not None, "padrão informado", "G.contain1")
    return contain1_g_engine(parse_pattern(p.tau), order, horizon)


def _h1(p: Params, order: int) -> QSeries:
    _require(p.k is not None and p.k >= 2, "k >= 2", "H.h1")
    return h1(p.k, order)


def _h21(p: Params, order: int) -> QSeries:
    _require(p.k is not None and p.k >= 3, "k >= 3", "H.h21")
    return h21(p.k, order)


def _phi12k(p: Params, order: int) -> QSeries:
    _require(p.k is not None and p.k >= 2, "k >= 2", "PHI.12k")
    return phi12k(p.k, order)


def _phi21k(p: Params, order: int) -> QSeries:
    _require(p.k is not None and p.k >= 3, "k >= 3", "PHI.21k")
    return phi21k(p.k, order)


ANIMAL_PATTERNS = ("123-4", "321-4")

BUILDERS: Dict[str, Callable[..., QSeries]] = {
    "F.chain": _chain,
    "F.all_adj_inc": _all_adj,
    "F.all_adj_dec": _all_adj,
    "F.tail_adj": _tail_adj,
    "F.double_run": _double_run,
    "F.double_run_example": _double_run_example,
    "F.two_layer": _two_layer,
    "F.wedge": _wedge,
    "F.small": _small,
    "F.directed_animals": _fixed("F.directed_animals", ANIMAL_PATTERNS, directed_animals),
    "F.animals_radical": _fixed("F.animals_radical", ANIMAL_PATTERNS, animals_radical),
    "F.two_layer_literal": _two_layer_literal,
    "G.cd2": _cd2,
    "G.gdd1": _gdd1,
    "G.g21": _g21,
    "G.con11": _con11,
    "G.con11_dec": _con11,
    "G.small": lambda p, order: small_g(p.tau, order),
    "G.contain1": _contain1,
    "G.mixed21_literal": _fixed("G.mixed21_literal", ("21-3",), mixed21_literal),
    "H.h1": _h1,
    "H.h21": _h21,
    "PHI.12k": _phi12k,
    "PHI.21k": _phi21k,
    "PHI.21": _fixed("PHI.21", ("21",), phi21),
}

# construtores que dependem do horizonte do oráculo (usam os motores)
HORIZON_AWARE = ("F.tail_adj", "F.two_layer", "G.contain1")


def build(entry_id: str, params: Params, order: int = DEFAULT_ORDER, horizon: int = DEFAULT_HORIZON) -> QSeries:
    """Constrói a série de uma entrada pelo id."""
    if entry_id not in BUILDERS:
        raise CatalogError(f"Entrada desconhecida: {entry_id}", entry_id=entry_id)
    builder = BUILDERS[entry_id]
    if entry_id in HORIZON_AWARE:
        return builder(params, order, horizon)
    return builder(params, order)


def _family_series(prefix: str, entry_id: str, params: Params, order: int, horizon: int) -> QSeries:
    if not entry_id.startswith(prefix + "."):
        raise CatalogError(f"Entrada {entry_id} não pertence à família {prefix}", entry_id=entry_id)
    return build(entry_id, params, order, horizon)


def f_series(entry_id: str, params: Params, order: int = DEFAULT_ORDER, horizon: int = DEFAULT_HORIZON) -> QSeries:
    return _family_series("F", entry_id, params, order, horizon)


def g_series(entry_id: str, params: Params, order: int = DEFAULT_ORDER, horizon: int = DEFAULT_HORIZON) -> QSeries:
    return _family_series("G", entry_id, params, order, horizon)


def h_series(entry_id: str, params: Params, order: int = DEFAULT_ORDER, horizon: int = DEFAULT_HORIZON) -> QSeries:
    return _family_series("H", entry_id, params, order, horizon)


def phi_series(entry_id: str, params: Params, order: int = DEFAULT_ORDER,
               horizon: int = DEFAULT_HORIZON) -> QSeries:
    return _family_series("PHI", entry_id, params, order, horizon)
