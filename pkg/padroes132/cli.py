"""
Linha de comando: séries, contagens, verificação do catálogo e listagem.

Códigos de saída: 0 quando tudo confere com o livro de errata, 1 quando
algum status observado difere do esperado, 2 para erros de uso.
"""
import argparse
import json
import logging
import sys
import time
from typing import List, Optional, Tuple

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from padroes132 import __version__
from padroes132.catalog import CATALOG, entry_ids, find_by_pattern, get_entry
from padroes132.closed_forms import FEngine, Params
from padroes132.config import configurar_logging, load_references, load_settings
from padroes132.enumeration import count_at, count_series
from padroes132.error_handler import ErrorHandler, HorizonError
from padroes132.pattern_core import parse_pattern
from padroes132.report_exporter import ReportExporter, render_series
from padroes132.verifier import Verifier

log = logging.getLogger(__name__)

SERIES_FAMILIES = ("F", "G", "H", "PHI")


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"esperado inteiro >= 0, recebido {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padroes132",
        description="Funções geradoras de permutações que evitam 1-3-2 e padrões generalizados")
    parser.add_argument("--config", help="Arquivo de configuração (.ini)")
    parser.add_argument("--log-level", help="Nível de log (DEBUG, INFO, WARNING, ...)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    series = sub.add_parser("series", help="Expande a série de uma entrada ou padrão")
    source = series.add_mutually_exclusive_group(required=True)
    source.add_argument("--entry", help="Id da entrada do catálogo (ex: G.g21)")
    source.add_argument("--pattern", help="Padrão generalizado (ex: 1-23)")
    series.add_argument("--family", choices=SERIES_FAMILIES, default="F")
    series.add_argument("--k", type=int)
    series.add_argument("--d", type=int)
    series.add_argument("--tau")
    series.add_argument("--tau1")
    series.add_argument("--tau2")
    series.add_argument("--order", type=_non_negative)
    series.add_argument("--format", choices=("tsv", "json"), default="tsv")
    series.add_argument("--report", help="Também grava a série neste arquivo")

    count = sub.add_parser("count", help="Conta por enumeração para um único n")
    count.add_argument("--family", choices=SERIES_FAMILIES, required=True)
    count.add_argument("--pattern", required=True)
    count.add_argument("--n", type=_non_negative, required=True)
    count.add_argument("--force", action="store_true", help="Permite n acima do horizonte do oráculo")
    count.add_argument("--format", choices=("text", "json"), default="text")

    verify = sub.add_parser("verify", help="Confere o catálogo contra a enumeração")
    selection = verify.add_mutually_exclusive_group(required=True)
    selection.add_argument("--all", action="store_true")
    selection.add_argument("--entry")
    verify.add_argument("--pattern", help="Restringe a entrada a um padrão")
    verify.add_argument("--order", type=_non_negative)
    verify.add_argument("--max-n", type=_non_negative)
    verify.add_argument("--report", help="Arquivo do relatório")
    verify.add_argument("--format", choices=("json", "tsv"), default="json")
    verify.add_argument("--workers", type=int)
    verify.add_argument("--progress", action="store_true")

    sub.add_parser("catalog", help="Lista as entradas do catálogo")
    return parser


def _params_from(args) -> Optional[Params]:
    values = {name: getattr(args, name) for name in ("k", "d", "tau", "tau1", "tau2")}
    if all(value is None for value in values.values()):
        return None
    return Params(**values)


def resolve_series(args, settings) -> Tuple[str, str, List[str], str]:
    """
    Escolhe a fonte da série pedida.

    Com --entry usa a forma fechada da entrada. Com --pattern usa, nesta
    ordem, uma instância do catálogo com o mesmo padrão, o motor de
    avoidância (família F) ou a enumeração até o horizonte do oráculo.

    Returns:
        tuple: (família, padrão, coeficientes, fonte)
    """
    order = args.order if args.order is not None else settings.order
    if args.entry:
        entry = get_entry(args.entry)
        params = _params_from(args) or entry.default_params
        horizon = settings.horizon_for(entry.family)
        series = entry.build(params, order, horizon)
        return entry.family, str(entry.pattern(params)), series.as_strings(), entry.id

    pat = parse_pattern(args.pattern)
    found = find_by_pattern(args.family, pat)
    if found is not None:
        entry, params = found
        series = entry.build(params, order, settings.horizon_for(args.family))
        return args.family, str(pat), series.as_strings(), entry.id

    horizon = settings.horizon_for(args.family)
    if args.family == "F":
        series = FEngine(order, horizon).f(pat)
        if series.order < order:
            log.warning(f"F_{pat} depende de enumeração: série válida só até n={series.order}")
        return "F", str(pat), series.as_strings(), "engine"

    if order > horizon:
        raise HorizonError(f"Sem forma fechada para {args.family}_{pat}; ordem {order} acima do horizonte",
                           n=order, horizon=horizon)
    table = count_series(args.family, pat, order)
    return args.family, str(pat), [str(c) for c in table.counts], "enumeration"


def cmd_series(args, settings) -> int:
    family, pattern, coefficients, source = resolve_series(args, settings)
    sys.stdout.write(render_series(family, pattern, coefficients, source, args.format))
    if args.report:
        ReportExporter(settings.report_dir).write_series(args.report, family, pattern, coefficients, source,
                                                         args.format)
    return 0


def cmd_count(args, settings) -> int:
    pat = parse_pattern(args.pattern)
    horizon = settings.horizon_for(args.family)
    if args.n > horizon and not args.force:
        raise HorizonError(f"n={args.n} acima do horizonte {horizon} de {args.family} (use --force)",
                           n=args.n, horizon=horizon)
    start = time.time()
    value = count_at(args.family, pat, args.n)
    elapsed = time.time() - start
    log.info(f"count {args.family}_{pat}(n={args.n}) = {value} em {elapsed:.3f}s")
    if args.format == "json":
        document = {"family": args.family, "pattern": str(pat), "n": args.n, "count": str(value),
                    "seconds": round(elapsed, 3)}
        sys.stdout.write(json.dumps(document, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(f"{value}\n")
    return 0


def cmd_verify(args, settings) -> int:
    verifier = Verifier(settings, order=args.order, max_n=args.max_n,
                        max_workers=args.workers, progress=args.progress)
    report = verifier.run([args.entry] if args.entry else None, args.pattern)
    path = ReportExporter(settings.report_dir).write_report(report, args.report, args.format)

    errata = sum(1 for row in report.entries if row.observed_status == "documented-erratum")
    sys.stdout.write(f"{len(report.entries)} instâncias, {errata} errata, "
                     f"{len(report.unexpected)} inesperadas, {len(report.failures)} falhas -> {path}\n")
    return 0 if report.all_as_expected else 1


def cmd_catalog(args, settings) -> int:
    references = load_references(settings.references_path)
    table = Table(title="Catálogo de formas fechadas")
    table.add_column("id", style="cyan", no_wrap=True)
    table.add_column("família")
    table.add_column("referência", no_wrap=True)
    table.add_column("fórmula")
    table.add_column("padrão inicial")
    table.add_column("instâncias", justify="right")
    for entry_id in entry_ids():
        entry = CATALOG[entry_id]
        table.add_row(entry.id, entry.family, escape(references.get(entry.id, "-")), escape(entry.formula),
                      str(entry.pattern()), str(len(entry.instances)))
    Console().print(table)
    return 0


COMMANDS = {
    "series": cmd_series,
    "count": cmd_count,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    settings = load_settings(args.config)
    configurar_logging(args.log_level or settings.log_level, settings.log_file)
    handler = ErrorHandler("padroes132")

    try:
        return COMMANDS[args.command](args, settings)
    except Exception as e:
        return handler.exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
