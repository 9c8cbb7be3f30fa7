import json
from pathlib import Path

import pytest

from padroes132 import cli

ROOT = Path(__file__).parent


@pytest.fixture(autouse=True)
def repo_cwd(monkeypatch):
    """Roda a partir da raiz (config/ relativo) sem instalar handlers de log."""
    monkeypatch.chdir(ROOT)
    monkeypatch.setenv("COLUMNS", "200")
    monkeypatch.setattr(cli, "configurar_logging", lambda *args, **kwargs: None)


def coefficients(tsv):
    lines = tsv.strip().splitlines()
    assert lines[0] == "n\tcoeff"
    return [int(line.split("\t")[1]) for line in lines[1:]]


def test_series_by_pattern(capsys):
    assert cli.main(["series", "--family", "F", "--pattern", "1-23", "--order", "7"]) == 0
    assert coefficients(capsys.readouterr().out) == [1, 1, 2, 4, 9, 21, 51, 127]


def test_series_by_entry(capsys):
    assert cli.main(["series", "--entry", "G.g21", "--k", "3", "--order", "5"]) == 0
    assert coefficients(capsys.readouterr().out) == [0, 0, 0, 1, 4, 12]


def test_series_json_document(capsys):
    assert cli.main(["series", "--entry", "F.two_layer", "--tau1", "12", "--tau2", "12",
                     "--order", "6", "--format", "json"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["pattern"] == "45-6-12-3"
    assert document["source"] == "F.two_layer"
    assert document["coefficients"] == ["1", "1", "2", "5", "14", "42", "131"]


def test_series_without_closed_form_uses_engine(capsys):
    """12-3-4-5-6 não tem instância no catálogo; o motor de recursão dá R_6."""
    assert cli.main(["series", "--family", "F", "--pattern", "12-3-4-5-6", "--order", "6",
                     "--format", "json"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["source"] == "engine"
    assert document["coefficients"] == ["1", "1", "2", "5", "14", "42", "131"]


def test_series_report_matches_stdout(capsys, tmp_path):
    target = tmp_path / "series" / "g21.tsv"
    assert cli.main(["series", "--entry", "G.g21", "--k", "3", "--order", "5", "--report", str(target)]) == 0
    out = capsys.readouterr().out
    assert coefficients(out) == [0, 0, 0, 1, 4, 12]
    assert target.read_text(encoding="utf-8") == out


@pytest.mark.parametrize("argv", [
    ["series", "--family", "F", "--pattern", "1-1"],
    ["series", "--entry", "F.nao_existe"],
    ["series", "--family", "F", "--pattern", "12-3", "--entry", "F.chain"],
    ["count", "--family", "F", "--pattern", "12", "--n", "13"],
    ["count", "--family", "H", "--pattern", "12", "--n", "-1"],
    ["verify", "--entry", "F.nao_existe"],
    ["series", "--entry", "F.wedge", "--tau", "123", "--order", "6"],
    ["series", "--entry", "F.directed_animals", "--tau", "1-2"],
    [],
])
def test_usage_errors_exit_with_two(argv):
    assert cli.main(argv) == 2


@pytest.mark.parametrize("family, pattern, n, expected", [
    ("H", "12-3", 3, 1),
    ("F", "45-6-12-3", 6, 131),
    ("F", "12", 0, 1),
    ("G", "21-3", 4, 4),
    ("PHI", "21-3", 4, 2),
])
def test_count(capsys, family, pattern, n, expected):
    assert cli.main(["count", "--family", family, "--pattern", pattern, "--n", str(n)]) == 0
    assert capsys.readouterr().out == f"{expected}\n"


def test_count_json(capsys):
    assert cli.main(["count", "--family", "G", "--pattern", "12", "--n", "4", "--format", "json"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["count"] == "6"
    assert document["n"] == 4


def test_verify_confirms_erratum(capsys, tmp_path):
    report = tmp_path / "verify.json"
    argv = ["verify", "--entry", "G.contain1", "--pattern", "21-3", "--max-n", "6", "--report", str(report)]
    assert cli.main(argv) == 0
    assert "1 errata" in capsys.readouterr().out
    document = json.loads(report.read_text(encoding="utf-8"))
    [row] = document["entries"]
    assert row["first_mismatch_n"] == 4
    assert row["observed_status"] == "documented-erratum"
    assert document["all_as_expected"] is True


def test_verify_without_ledger_exits_with_one(tmp_path):
    config = tmp_path / "config.ini"
    config.write_text(f"[VERIFY]\nerrata_path = {tmp_path / 'ausente.ini'}\n", encoding="utf-8")
    argv = ["--config", str(config), "verify", "--entry", "G.contain1", "--pattern", "21-3",
            "--max-n", "5", "--report", str(tmp_path / "r.json")]
    assert cli.main(argv) == 1


def test_verify_tsv_report(tmp_path):
    report = tmp_path / "verify.tsv"
    assert cli.main(["verify", "--entry", "G.g21", "--max-n", "6", "--report", str(report),
                     "--format", "tsv"]) == 0
    lines = report.read_text(encoding="utf-8").splitlines()
    assert lines[0].split("\t")[:3] == ["entry_id", "pattern", "family"]
    assert len(lines) == 3


def test_catalog_listing(capsys):
    assert cli.main(["catalog"]) == 0
    out = capsys.readouterr().out
    assert "F.chain" in out
    assert "G.contain1" in out


def test_catalog_lists_references(capsys):
    references = cli.load_references("config/referencias.ini")
    assert set(references) == set(cli.CATALOG)
    assert cli.main(["catalog"]) == 0
    out = capsys.readouterr().out
    for reference in references.values():
        assert reference in out


def test_catalog_keeps_bracketed_formulas(capsys):
    assert cli.main(["catalog"]) == 0
    assert "G_[k] = Σ_{j<k}" in capsys.readouterr().out
