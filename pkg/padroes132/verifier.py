"""
Harness de verificação: confronta cada instância do catálogo com a
enumeração (e com o motor de recursão, quando ele se aplica) e monta o
relatório com o status observado contra o status pinado no livro de errata.
"""
import functools
import logging
import time
import traceback
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import pandas as pd
from tqdm import tqdm

from padroes132.catalog import CATALOG, CatalogEntry, CatalogInstance, expected_status, find_instances, get_entry
from padroes132.closed_forms import FEngine, GEngine, contain1_g_engine, theorem1_f_engine
from padroes132.config import DOCUMENTED_ERRATUM, EXPECTED_MATCH, Settings, load_errata
from padroes132.enumeration import count_series, cross_check_exactly_one, mixed_avoid_contain_series
from padroes132.error_handler import HorizonError
from padroes132.series import QSeries, first_mismatch, format_coefficient

log = logging.getLogger(__name__)


@dataclass
class VerifyRow:
    """Resultado de uma instância verificada."""
    entry_id: str
    pattern: str
    family: str
    params: str
    max_n: int
    closed_form_coeffs: List[str]
    enumeration_coeffs: List[str]
    engine_coeffs: Optional[List[str]]
    match: bool
    first_mismatch_n: Optional[int]
    expected_status: str
    observed_status: str
    engine_match: Optional[bool] = None

    @property
    def as_expected(self) -> bool:
        return self.observed_status == self.expected_status

    @property
    def sort_key(self) -> Tuple[str, str, str]:
        return self.entry_id, self.pattern, self.params

    def to_dict(self) -> dict:
        data = asdict(self)
        if data["engine_coeffs"] is None:
            del data["engine_coeffs"]
        if data["first_mismatch_n"] is None:
            del data["first_mismatch_n"]
        if data["engine_match"] is None:
            del data["engine_match"]
        return data


@dataclass
class VerifyReport:
    """
    Relatório completo de uma execução.

    Attributes:
        entries (list): Linhas ordenadas por (entry_id, padrão, parâmetros)
        oracle_checks (dict): n -> gerador estrutural concorda com o filtro de S_n
        failures (dict): Instâncias que levantaram exceção, com a mensagem
    """
    entries: List[VerifyRow] = field(default_factory=list)
    oracle_checks: Dict[int, bool] = field(default_factory=dict)
    failures: Dict[str, str] = field(default_factory=dict)

    @property
    def unexpected(self) -> List[VerifyRow]:
        return [row for row in self.entries if not row.as_expected]

    @property
    def all_as_expected(self) -> bool:
        return not self.unexpected and not self.failures and all(self.oracle_checks.values())

    def to_dict(self) -> dict:
        return {
            "entries": [row.to_dict() for row in self.entries],
            "oracle_checks": {str(n): ok for n, ok in sorted(self.oracle_checks.items())},
            "failures": dict(sorted(self.failures.items())),
            "all_as_expected": self.all_as_expected,
        }

    def to_frame(self) -> pd.DataFrame:
        columns = ["entry_id", "pattern", "family", "params", "max_n", "match", "first_mismatch_n",
                   "expected_status", "observed_status", "closed_form_coeffs", "enumeration_coeffs",
                   "engine_coeffs", "engine_match"]
        rows = []
        for row in self.entries:
            data = asdict(row)
            for key in ("closed_form_coeffs", "enumeration_coeffs", "engine_coeffs"):
                data[key] = ",".join(data[key]) if data[key] is not None else ""
            data["first_mismatch_n"] = "" if row.first_mismatch_n is None else row.first_mismatch_n
            data["engine_match"] = "" if row.engine_match is None else row.engine_match
            rows.append(data)
        return pd.DataFrame(rows, columns=columns)


@functools.lru_cache(maxsize=None)
def _cross_check(n: int) -> bool:
    return cross_check_exactly_one(n)


def _strings(series: QSeries, max_n: int) -> List[str]:
    return [format_coefficient(c) for c in series.coeffs[:max_n + 1]]


class Verifier:
    """
    Executa a verificação das entradas do catálogo em paralelo.
    """

    def __init__(self, settings: Optional[Settings] = None, ledger: Optional[Dict[str, str]] = None,
                 order: Optional[int] = None, max_n: Optional[int] = None,
                 max_workers: Optional[int] = None, progress: bool = False):
        """
        Inicializa o verificador.

        Args:
            settings (Settings, optional): Configuração (padrões de Settings se None)
            ledger (dict, optional): Livro de errata já carregado; se None, lê
                settings.errata_path
            order (int, optional): Ordem das séries de forma fechada
            max_n (int, optional): Teto para o n máximo de cada instância; None
                usa o limite registrado na própria instância
            max_workers (int, optional): Threads do pool
            progress (bool): Mostra barra de progresso (tqdm) no stderr
        """
        self.settings = settings or Settings()
        self.ledger = ledger if ledger is not None else load_errata(self.settings.errata_path)
        self.order = order if order is not None else self.settings.order
        self.max_n = max_n
        self.max_workers = max_workers or self.settings.max_workers
        self.progress = progress

    # -- planejamento -------------------------------------------------------
    def effective_max_n(self, entry: CatalogEntry, instance: CatalogInstance) -> int:
        """
        n máximo efetivo da instância.

        Raises:
            HorizonError: n acima do horizonte do oráculo ou da ordem das séries
        """
        horizon = self.settings.horizon_for(entry.family)
        max_n = instance.max_n if self.max_n is None else min(self.max_n, instance.max_n)
        if self.max_n is not None and self.max_n > horizon:
            raise HorizonError(f"max-n {self.max_n} acima do horizonte do oráculo para {entry.family}",
                               n=self.max_n, horizon=horizon)
        if max_n > horizon:
            raise HorizonError(f"{entry.id}: n={max_n} acima do horizonte {horizon}", n=max_n, horizon=horizon)
        if self.order < max_n:
            raise HorizonError(f"Ordem {self.order} menor que max-n {max_n}", n=max_n, horizon=self.order)
        return max_n

    def plan(self, entry_ids: Optional[Iterable[str]] = None,
             pattern: Optional[str] = None) -> List[Tuple[CatalogEntry, CatalogInstance, int]]:
        """
        Lista as instâncias a verificar com seu n máximo efetivo.

        Args:
            entry_ids (iterable, optional): Ids selecionados; None seleciona todos
            pattern (str, optional): Restringe às instâncias deste padrão
        """
        ids = sorted(entry_ids) if entry_ids else sorted(CATALOG)
        planned = []
        for entry_id in ids:
            entry = get_entry(entry_id)
            for instance in find_instances(entry, pattern):
                planned.append((entry, instance, self.effective_max_n(entry, instance)))
        return planned

    # -- verificação --------------------------------------------------------
    def verify_instance(self, entry: CatalogEntry, instance: CatalogInstance, max_n: int) -> VerifyRow:
        """
        Verifica uma instância: forma fechada, motor (se aplicável) e enumeração.

        Returns:
            VerifyRow: Linha do relatório
        """
        params = instance.params
        pat = entry.pattern(params)
        start = time.time()

        closed = entry.build(params, self.order, horizon=max_n)
        if entry.family == "MIXED":
            truth = mixed_avoid_contain_series(pat, entry.aux_pattern_for(params), max_n).counts
        else:
            truth = count_series(entry.family, pat, max_n).counts

        engine = None
        engine_match = None
        mismatches = [first_mismatch(closed, truth, max_n)]
        if entry.engine_applies(params):
            engine = theorem1_f_engine(pat, self.order, max_n, engine=FEngine(self.order, max_n))
            mismatches.append(first_mismatch(engine, truth, max_n))
            engine_match = mismatches[-1] is None
        elif entry.contain1_applies(params):
            # consultivo: não entra no status observado
            engine = contain1_g_engine(pat, self.order, max_n, engine=GEngine(self.order, max_n))
            engine_match = first_mismatch(engine, truth, max_n) is None

        mismatches = [n for n in mismatches if n is not None]
        first = min(mismatches) if mismatches else None
        observed = EXPECTED_MATCH if first is None else DOCUMENTED_ERRATUM

        row = VerifyRow(
            entry_id=entry.id,
            pattern=str(pat),
            family=entry.family,
            params=params.label(),
            max_n=max_n,
            closed_form_coeffs=_strings(closed, max_n),
            enumeration_coeffs=[str(c) for c in truth],
            engine_coeffs=_strings(engine, max_n) if engine is not None else None,
            match=first is None,
            first_mismatch_n=first,
            expected_status=expected_status(entry.id, pat, self.ledger),
            observed_status=observed,
            engine_match=engine_match,
        )
        log.debug(f"{entry.id} '{pat}' verificada em {time.time() - start:.2f}s")
        return row

    def _oracle_checks(self, planned) -> Dict[int, bool]:
        bounds = [max_n for entry, _, max_n in planned if entry.family in ("H", "PHI")]
        if not bounds:
            return {}
        upto = min(self.settings.cross_check_bound, max(bounds))
        return {n: _cross_check(n) for n in range(upto + 1)}

    def run(self, entry_ids: Optional[Iterable[str]] = None, pattern: Optional[str] = None) -> VerifyReport:
        """
        Verifica as entradas selecionadas em um pool de threads.

        Args:
            entry_ids (iterable, optional): Ids selecionados; None seleciona todos
            pattern (str, optional): Restringe às instâncias deste padrão

        Returns:
            VerifyReport: Relatório ordenado por (entry_id, padrão, parâmetros)
        """
        planned = self.plan(entry_ids, pattern)
        total = len(planned)
        report = VerifyReport()
        log.info(f"Verificando {total} instâncias com {self.max_workers} workers (ordem {self.order})")
        start = time.time()

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            futures = {executor.submit(self.verify_instance, entry, instance, max_n):
                       f"{entry.id}[{instance.params.label()}]"
                       for entry, instance, max_n in planned}

            processed = 0
            with tqdm(total=total, disable=not self.progress, desc="verify", unit="inst") as bar:
                for future in as_completed(futures):
                    key = futures[future]
                    processed += 1
                    bar.update(1)
                    try:
                        row = future.result()
                        report.entries.append(row)
                        message = (f"{row.entry_id} '{row.pattern}': {row.observed_status} "
                                   f"({processed}/{total})")
                        if not row.as_expected:
                            log.error(f"Status inesperado em {message}; esperado {row.expected_status}")
                        elif row.observed_status == DOCUMENTED_ERRATUM:
                            log.warning(f"Errata confirmada em {message}, primeira divergência em "
                                        f"n={row.first_mismatch_n}")
                        else:
                            log.info(message)
                    except Exception as exc:
                        report.failures[key] = f"{exc.__class__.__name__}: {exc}"
                        log.error(f"Erro ao verificar {key}: {exc} ({processed}/{total})")
                        log.debug(traceback.format_exc())

        report.entries.sort(key=lambda row: row.sort_key)
        report.oracle_checks = self._oracle_checks(planned)

        log.info(f"Verificação concluída em {time.time() - start:.1f}s. Instâncias: {len(report.entries)}, "
                 f"inesperadas: {len(report.unexpected)}, falhas: {len(report.failures)}")
        return report
