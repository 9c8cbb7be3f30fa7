"""
Catálogo de formas fechadas: uma entrada por fórmula, com as instâncias
conferidas contra a enumeração e o status esperado vindo do livro de errata.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from padroes132.closed_forms import (
    CHAIN_TAUS, DEFAULT_HORIZON, Params, build, chain_pattern, decreasing_pattern, double_run_pattern,
    gdd1_pattern, increasing_pattern, tail_pattern, two_layer_pattern, two_layer_literal_pattern,
    wedge_patterns
)
from padroes132.config import EXPECTED_MATCH
from padroes132.error_handler import CatalogError
from padroes132.pattern_core import GeneralizedPattern, is_decomposable, parse_pattern
from padroes132.series import DEFAULT_ORDER, QSeries

log = logging.getLogger(__name__)

ENGINE_AVOIDANCE = "avoidance"


@dataclass(frozen=True)
class CatalogInstance:
    params: Params
    max_n: int


@dataclass(frozen=True)
class CatalogEntry:
    """
    Uma forma fechada do catálogo.

    Attributes:
        id (str): Id estável (ex: "F.chain"), usado pela CLI e pelos relatórios
        family (str): F, G, H, PHI ou MIXED
        formula (str): Fórmula em texto curto
        pattern_for (callable): Params -> GeneralizedPattern
        instances (tuple): Instâncias verificadas, cada uma com seu n máximo
        engine (str, optional): Motor de recursão aplicável ("avoidance")
        aux_pattern_for (callable, optional): Padrão de contenção (só MIXED)
        engine_only (bool): A "forma fechada" é o próprio motor de recursão
    """
    id: str
    family: str
    formula: str
    pattern_for: Callable[[Params], GeneralizedPattern]
    instances: Tuple[CatalogInstance, ...]
    engine: Optional[str] = None
    aux_pattern_for: Optional[Callable[[Params], GeneralizedPattern]] = None
    engine_only: bool = False

    def __post_init__(self):
        if not self.instances:
            raise CatalogError(f"Entrada {self.id} sem limite de verificação", entry_id=self.id)

    @property
    def default_params(self) -> Params:
        return self.instances[0].params

    def pattern(self, params: Optional[Params] = None) -> GeneralizedPattern:
        return self.pattern_for(params or self.default_params)

    def build(self, params: Optional[Params] = None, order: int = DEFAULT_ORDER,
              horizon: int = DEFAULT_HORIZON) -> QSeries:
        return build(self.id, params or self.default_params, order, horizon)

    def engine_applies(self, params: Params) -> bool:
        return self.engine == ENGINE_AVOIDANCE and is_decomposable(self.pattern(params))

    def contain1_applies(self, params: Params) -> bool:
        """Recursão de contenção única como conferência consultiva de uma entrada G."""
        return self.family == "G" and not self.engine_only and is_decomposable(self.pattern(params))


def _p(**kwargs) -> Params:
    return Params(**kwargs)


def _instances(params_list, max_n: int) -> Tuple[CatalogInstance, ...]:
    return tuple(CatalogInstance(p, max_n) for p in params_list)


def _from_tau(p: Params) -> GeneralizedPattern:
    return parse_pattern(p.tau)


def wedge_catalog() -> List[GeneralizedPattern]:
    """Padrões cunha verificados (F = R_k)."""
    return list(wedge_patterns())


def _build_entries() -> Dict[str, CatalogEntry]:
    wedge_instances = tuple(
        CatalogInstance(Params(tau=str(w)), 10 if w.k > 6 else 12) for w in wedge_catalog()
    )
    entries = [
        CatalogEntry(
            "F.chain", "F", "F_{τ-3-...-k} = R_k, τ ∈ {12, 1-2, 21, 2-1}",
            lambda p: chain_pattern(p.tau, p.k),
            _instances([_p(tau=t, k=k) for t in CHAIN_TAUS for k in (3, 4, 5)], 12),
            engine=ENGINE_AVOIDANCE),
        CatalogEntry(
            "F.all_adj_inc", "F", "F_[k] = Σ_{j<k} (xF_[k])^j",
            lambda p: increasing_pattern(p.k),
            _instances([_p(k=k) for k in (1, 2, 3, 4)], 12)),
        CatalogEntry(
            "F.all_adj_dec", "F", "F_<k> = Σ_{j<k} (xF_<k>)^j",
            lambda p: decreasing_pattern(p.k),
            _instances([_p(k=k) for k in (2, 3, 4)], 12)),
        CatalogEntry(
            "F.tail_adj", "F", "F = Σ_{j<k-d} (xF)^j + x^{k-d} F^{k-d} F_{τ'}, τ = τ'-(d+1)...k",
            lambda p: tail_pattern(p.tau1, p.k),
            _instances([_p(tau1="1", k=3), _p(tau1="12", k=4), _p(tau1="21", k=4),
                        _p(tau1="1-2", k=4), _p(tau1="12", k=5)], 12)),
        CatalogEntry(
            "F.double_run", "F", "(1 - x - √(1 - 2x + x² - 4x²R_{k-2})) / (2x²R_{k-2})",
            lambda p: double_run_pattern(p.tau, p.k),
            _instances([_p(k=3)] + [_p(tau=t, k=4) for t in CHAIN_TAUS] + [_p(tau="12", k=5),
                                                                          _p(tau="21", k=5)], 12)),
        CatalogEntry(
            "F.double_run_example", "F", "(1 - 2x + x² - √(1 - 4x + 2x² + x⁴)) / (2x²)",
            lambda p: double_run_pattern(p.tau, 4),
            _instances([_p(tau=t) for t in CHAIN_TAUS], 12)),
        CatalogEntry(
            "F.two_layer", "F", "F_{τ'-k-τ''-d} = 1/(1 - x(1 - xF'F'')/(1 - x(F' + F'')))",
            lambda p: two_layer_pattern(p.tau1, p.tau2),
            _instances([_p(tau1="12", tau2="12"), _p(tau1="", tau2=""), _p(tau1="1", tau2=""),
                        _p(tau1="", tau2="1"), _p(tau1="1", tau2="1"), _p(tau1="12", tau2="1"),
                        _p(tau1="21", tau2="12"), _p(tau1="12", tau2="21"), _p(tau1="1-2", tau2="12")], 12),
            engine=ENGINE_AVOIDANCE),
        CatalogEntry(
            "F.wedge", "F", "F_τ = R_k para padrões cunha generalizados",
            _from_tau, wedge_instances, engine=ENGINE_AVOIDANCE),
        CatalogEntry(
            "F.small", "F", "padrões consecutivos de três letras (123, 321, 132, 213, 312, 231)",
            _from_tau,
            _instances([_p(tau=t) for t in ("123", "321", "132", "213", "312", "231")], 12)),
        CatalogEntry(
            "F.directed_animals", "F", "F_{123-4} = F_{321-4} = 1/(1 - xM(x))",
            _from_tau, _instances([_p(tau="123-4"), _p(tau="321-4")], 12), engine=ENGINE_AVOIDANCE),
        CatalogEntry(
            "F.animals_radical", "F", "½·√((1+x)/(1-3x)) como F_{123-4}",
            _from_tau, _instances([_p(tau="123-4")], 12)),
        CatalogEntry(
            "F.two_layer_literal", "F", "1/(1 - x(1 - xR_{k-d}R_d)/(1 - x(R_{k-d} + R_d)))",
            lambda p: two_layer_literal_pattern(p.k, p.d),
            _instances([_p(k=6, d=3), _p(k=7, d=3)], 10)),
        CatalogEntry(
            "G.cd2", "G", "G_{12-3-...-k} = 1/((1-x)U_k²)",
            lambda p: chain_pattern("12", p.k),
            _instances([_p(k=k) for k in (2, 3, 4, 5)], 10)),
        CatalogEntry(
            "G.gdd1", "G", "G_{12...d-(d+1)-...-k} = U_d²/U_k² · G_[d]",
            lambda p: gdd1_pattern(p.d, p.k),
            _instances([_p(d=2, k=3), _p(d=2, k=4), _p(d=1, k=2)], 10)),
        CatalogEntry(
            "G.g21", "G", "G_{21-3-...-k} = 1/U_k²",
            lambda p: chain_pattern("21", p.k),
            _instances([_p(k=3), _p(k=4)], 10)),
        CatalogEntry(
            "G.con11", "G", "G_[k] = Σ_{j<k} j x^j G_[k] F_[k]^{j-1} + x^k F_[k]^k",
            lambda p: increasing_pattern(p.k),
            _instances([_p(k=k) for k in (1, 2, 3)], 10)),
        CatalogEntry(
            "G.con11_dec", "G", "a mesma equação para <k>",
            lambda p: decreasing_pattern(p.k),
            _instances([_p(k=k) for k in (2, 3)], 10)),
        CatalogEntry(
            "G.small", "G", "G_12 = G_21 = x²/(1-x)³; G_123 = G_321 = x³M³/(1 - x - 2x²M)",
            _from_tau, _instances([_p(tau=t) for t in ("12", "21", "123", "321")], 10)),
        CatalogEntry(
            "G.contain1", "G", "recursão de contenção única pela decomposição canônica",
            _from_tau,
            _instances([_p(tau=t) for t in ("12-3", "12-3-4", "21-3", "21-3-4", "2-1", "3-1-2")], 10),
            engine_only=True),
        CatalogEntry(
            "G.mixed21_literal", "MIXED", "x²F_21(F_21 - 1): evita 21-3 e contém 21 uma vez",
            lambda p: parse_pattern("21-3"), _instances([_p()], 10),
            aux_pattern_for=lambda p: parse_pattern("21")),
        CatalogEntry(
            "H.h1", "H", "H_{12-3-...-k} = x/U_k² · Σ_{j=1}^{k-2} U_j²",
            lambda p: chain_pattern("12", p.k),
            _instances([_p(k=k) for k in (2, 3, 4)], 10)),
        CatalogEntry(
            "H.h21", "H", "H_{21-3-...-k} = x/U_k² · (Σ_{j=1}^{k-2} U_j² - 1)",
            lambda p: chain_pattern("21", p.k),
            _instances([_p(k=k) for k in (3, 4)], 10)),
        CatalogEntry(
            "PHI.12k", "PHI", "Φ_{12-3-...-k}, com Φ_12 = x³/(1-x)³",
            lambda p: chain_pattern("12", p.k),
            _instances([_p(k=k) for k in (2, 3, 4)], 10)),
        CatalogEntry(
            "PHI.21k", "PHI", "Φ_{21-3-...-k}, com Φ_{21-3} = 2x⁴(1-x)²/(1-2x)³",
            lambda p: chain_pattern("21", p.k),
            _instances([_p(k=k) for k in (3, 4)], 10)),
        CatalogEntry(
            "PHI.21", "PHI", "Φ_21 = x³/(1-x)²",
            lambda p: parse_pattern("21"), _instances([_p()], 10)),
    ]
    return {entry.id: entry for entry in entries}


CATALOG: Dict[str, CatalogEntry] = _build_entries()


def get_entry(entry_id: str) -> CatalogEntry:
    """
    Raises:
        CatalogError: id inexistente
    """
    if entry_id not in CATALOG:
        raise CatalogError(f"Entrada desconhecida: {entry_id}", entry_id=entry_id)
    return CATALOG[entry_id]


def entry_ids() -> List[str]:
    return sorted(CATALOG)


def expected_status(entry_id: str, pattern: GeneralizedPattern, ledger: Dict[str, str]) -> str:
    """Status pinado: seção "id:padrão" tem precedência sobre a seção "id"."""
    return ledger.get(f"{entry_id}:{pattern}", ledger.get(entry_id, EXPECTED_MATCH))


def find_instances(entry: CatalogEntry, pattern_text: Optional[str] = None) -> List[CatalogInstance]:
    """
    Instâncias da entrada, opcionalmente filtradas pelo padrão.

    Um padrão fora das instâncias registradas vira instância ad hoc
    (quando a entrada é parametrizada pelo próprio padrão).

    Raises:
        CatalogError: o padrão não corresponde à entrada
    """
    if pattern_text is None:
        return list(entry.instances)
    target = parse_pattern(pattern_text)
    matches = [inst for inst in entry.instances if entry.pattern(inst.params) == target]
    if matches:
        return matches
    if entry.pattern_for is _from_tau:
        bound = max(inst.max_n for inst in entry.instances)
        log.info(f"Padrão '{target}' fora das instâncias de {entry.id}; verificando como instância ad hoc")
        return [CatalogInstance(Params(tau=str(target)), bound)]
    raise CatalogError(f"Padrão '{target}' não corresponde a nenhuma instância de {entry.id}", entry_id=entry.id)


def find_by_pattern(family: str, pat: GeneralizedPattern) -> Optional[Tuple[CatalogEntry, Params]]:
    """Primeira entrada da família cujo padrão coincide (ignora errata literal e motores)."""
    for entry_id in entry_ids():
        entry = CATALOG[entry_id]
        if entry.family != family or entry_id in LITERAL_ERRATA or entry.engine_only:
            continue
        for inst in entry.instances:
            if entry.pattern(inst.params) == pat:
                return entry, inst.params
    return None


# entradas que guardam a expressão literal com discrepância conhecida
LITERAL_ERRATA = ("F.animals_radical", "F.two_layer_literal", "G.mixed21_literal")
