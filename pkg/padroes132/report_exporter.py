import io
import json
import logging
import os
from pathlib import Path
from typing import List, Optional

import jsonschema
import pandas as pd

from padroes132.error_handler import ReportError, with_error_handling
from padroes132.verifier import VerifyReport

log = logging.getLogger(__name__)

FORMATS = ("tsv", "json")

_COEFFS = {"type": "array", "items": {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["entries", "oracle_checks", "failures", "all_as_expected"],
    "properties": {
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["entry_id", "pattern", "family", "params", "max_n", "closed_form_coeffs",
                             "enumeration_coeffs", "match", "expected_status", "observed_status"],
                "properties": {
                    "entry_id": {"type": "string"},
                    "pattern": {"type": "string"},
                    "family": {"enum": ["F", "G", "H", "PHI", "MIXED"]},
                    "params": {"type": "string"},
                    "max_n": {"type": "integer", "minimum": 0},
                    "closed_form_coeffs": _COEFFS,
                    "enumeration_coeffs": _COEFFS,
                    "engine_coeffs": _COEFFS,
                    "match": {"type": "boolean"},
                    "engine_match": {"type": "boolean"},
                    "first_mismatch_n": {"type": "integer", "minimum": 0},
                    "expected_status": {"enum": ["expected-match", "documented-erratum"]},
                    "observed_status": {"enum": ["expected-match", "documented-erratum"]},
                },
                "additionalProperties": False,
            },
        },
        "oracle_checks": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "failures": {"type": "object", "additionalProperties": {"type": "string"}},
        "all_as_expected": {"type": "boolean"},
    },
}


def _check_format(fmt: str):
    if fmt not in FORMATS:
        raise ReportError(f"Formato desconhecido: {fmt}", format=fmt)


def series_document(family: str, pattern: str, coefficients: List[str], source: str) -> dict:
    return {
        "family": family,
        "pattern": pattern,
        "order": len(coefficients) - 1,
        "coefficients": list(coefficients),
        "source": source,
    }


def dumps_json(document: dict) -> str:
    """JSON canônico: chaves ordenadas, indentação 2 e quebra de linha final."""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _frame_to_tsv(df: pd.DataFrame) -> str:
    buffer = io.StringIO()
    df.to_csv(buffer, sep="\t", index=False, lineterminator="\n")
    return buffer.getvalue()


def render_series(family: str, pattern: str, coefficients: List[str], source: str, fmt: str = "tsv") -> str:
    """
    Texto de uma série (ou tabela de contagens) em TSV ou JSON.

    O TSV tem cabeçalho `n<TAB>coeff` e um coeficiente por linha.
    """
    _check_format(fmt)
    if fmt == "json":
        return dumps_json(series_document(family, pattern, coefficients, source))
    return _frame_to_tsv(pd.DataFrame({"n": range(len(coefficients)), "coeff": coefficients}))


def render_report(report: VerifyReport, fmt: str = "json") -> str:
    """
    Texto do relatório; o JSON é validado contra REPORT_SCHEMA.

    Raises:
        ReportError: formato desconhecido ou documento fora do esquema
    """
    _check_format(fmt)
    if fmt == "tsv":
        return _frame_to_tsv(report.to_frame())
    document = report.to_dict()
    try:
        jsonschema.validate(document, REPORT_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ReportError(f"Relatório fora do esquema: {e.message}", format=fmt, details=str(e)) from e
    return dumps_json(document)


class ReportExporter:
    """
    Grava séries e relatórios de verificação em disco.
    """

    def __init__(self, report_dir: str = "reports"):
        self.report_dir = Path(report_dir)

    def default_path(self, fmt: str) -> Path:
        return self.report_dir / f"verify.{fmt}"

    @with_error_handling(error_type=ReportError)
    def write_report(self, report: VerifyReport, path: Optional[str] = None, fmt: str = "json") -> str:
        """
        Grava o relatório em UTF-8.

        Args:
            report (VerifyReport): Relatório da verificação
            path (str, optional): Destino; se None, usa reports/verify.<fmt>
            fmt (str): "json" ou "tsv"

        Returns:
            str: Caminho do arquivo gravado

        Raises:
            ReportError: Em caso de falha na gravação
        """
        text = render_report(report, fmt)
        target = Path(path) if path else self.default_path(fmt)
        if str(target.parent) not in ("", "."):
            os.makedirs(target.parent, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        log.info(f"Relatório gravado: {len(report.entries)} linhas em {target}")
        return str(target)

    @with_error_handling(error_type=ReportError)
    def write_series(self, path: str, family: str, pattern: str, coefficients: List[str], source: str,
                     fmt: str = "tsv") -> str:
        target = Path(path)
        if str(target.parent) not in ("", "."):
            os.makedirs(target.parent, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as f:
            f.write(render_series(family, pattern, coefficients, source, fmt))
        log.info(f"Série {family}_{pattern} gravada em {target}")
        return str(target)


def load_report(path: str) -> dict:
    """Lê um relatório JSON e valida o esquema."""
    with open(path, encoding="utf-8") as f:
        document = json.load(f)
    jsonschema.validate(document, REPORT_SCHEMA)
    return document
