import json
from pathlib import Path

import pytest

from padroes132.catalog import CATALOG, expected_status, find_instances, get_entry, wedge_catalog
from padroes132.chebyshev import r_series
from padroes132.config import DOCUMENTED_ERRATUM, EXPECTED_MATCH, Settings, load_errata
from padroes132.enumeration import count_series
from padroes132.error_handler import CatalogError, HorizonError, ReportError
from padroes132.pattern_core import parse_pattern
from padroes132.report_exporter import ReportExporter, dumps_json, load_report, render_report, render_series
from padroes132.verifier import Verifier

ROOT = Path(__file__).parent
ERRATA = str(ROOT / "config" / "errata.ini")


@pytest.fixture(scope="module")
def ledger():
    return load_errata(ERRATA)


def make_verifier(ledger, max_n=8, workers=2):
    return Verifier(Settings(errata_path=ERRATA), ledger=ledger, order=16, max_n=max_n, max_workers=workers)


def test_catalog_has_every_family_and_bounds():
    assert len(CATALOG) >= 25
    assert {entry.family for entry in CATALOG.values()} == {"F", "G", "H", "PHI", "MIXED"}
    assert all(entry.instances for entry in CATALOG.values())
    with pytest.raises(CatalogError):
        get_entry("F.inexistente")


def test_wedge_catalog_members():
    patterns = [str(p) for p in wedge_catalog()]
    assert len(patterns) == 17
    assert "45-6-3-7-8-12-9" in patterns
    assert "6-4-5-7-8-3-9-12" in patterns
    assert "45-6-12-3" in patterns
    assert "1-3-2" not in patterns


@pytest.mark.parametrize("pat", [p for p in wedge_catalog() if p.k <= 6])
def test_wedge_members_count_as_r_k(pat):
    assert list(count_series("F", pat, 8).counts) == r_series(pat.k, 8).as_integers()


def test_errata_ledger_precedence(ledger):
    assert ledger["F.animals_radical"] == DOCUMENTED_ERRATUM
    assert expected_status("G.contain1", parse_pattern("21-3"), ledger) == DOCUMENTED_ERRATUM
    assert expected_status("G.contain1", parse_pattern("12-3"), ledger) == EXPECTED_MATCH
    assert expected_status("F.nao_registrada", parse_pattern("1"), {}) == EXPECTED_MATCH


def test_find_instances_filters_by_pattern():
    entry = get_entry("G.contain1")
    assert len(find_instances(entry)) == 6
    assert [i.params.tau for i in find_instances(entry, "21-3")] == ["21-3"]
    with pytest.raises(CatalogError):
        find_instances(get_entry("G.cd2"), "21-3")


def test_chain_entry_all_match(ledger):
    report = make_verifier(ledger, max_n=10).run(["F.chain"])
    assert len(report.entries) == 12
    assert all(row.match for row in report.entries)
    assert all(row.engine_coeffs == row.enumeration_coeffs for row in report.entries)
    assert report.all_as_expected


def test_contain1_erratum_is_detected(ledger):
    report = make_verifier(ledger).run(["G.contain1"], pattern="21-3")
    [row] = report.entries
    assert not row.match
    assert row.first_mismatch_n == 4
    assert row.closed_form_coeffs[4] == "5"
    assert row.enumeration_coeffs[4] == "4"
    assert row.observed_status == row.expected_status == DOCUMENTED_ERRATUM
    assert report.all_as_expected


@pytest.mark.parametrize("tau, first_n", [("2-1", 3), ("3-1-2", 4)])
def test_contain1_with_several_maxima_is_pinned(ledger, tau, first_n):
    """Com r >= 1 a recursão mista diverge cedo; o livro de errata registra a divergência."""
    report = make_verifier(ledger).run(["G.contain1"], pattern=tau)
    [row] = report.entries
    assert row.first_mismatch_n == first_n
    assert row.expected_status == DOCUMENTED_ERRATUM
    assert report.all_as_expected


def test_contain1_two_one_coefficients(ledger):
    [row] = make_verifier(ledger, max_n=5).run(["G.contain1"], pattern="2-1").entries
    assert row.closed_form_coeffs == ["0", "0", "1", "2", "3", "4"]
    assert row.enumeration_coeffs == ["0", "0", "1", "1", "1", "1"]


def test_literal_errata(ledger):
    report = make_verifier(ledger).run(["F.animals_radical", "F.two_layer_literal", "G.mixed21_literal"])
    mismatches = {(row.entry_id, row.pattern): row.first_mismatch_n for row in report.entries}
    assert mismatches[("F.animals_radical", "123-4")] == 0
    assert mismatches[("F.two_layer_literal", "45-6-12-3")] == 6
    assert mismatches[("F.two_layer_literal", "45-6-7-12-3")] == 7
    assert mismatches[("G.mixed21_literal", "21-3")] == 2
    assert report.all_as_expected


def test_g_engine_is_advisory(ledger):
    rows = make_verifier(ledger).run(["G.cd2", "G.g21"]).entries
    checked = [row for row in rows if row.entry_id == "G.cd2" and row.engine_coeffs is not None]
    assert len(checked) == 3
    assert all(row.engine_coeffs == row.enumeration_coeffs and row.engine_match for row in checked)

    [g21] = [row for row in rows if row.pattern == "21-3"]
    assert g21.engine_match is False
    assert g21.match
    assert g21.observed_status == g21.expected_status == EXPECTED_MATCH


def test_engine_match_only_where_an_engine_ran(ledger):
    report = make_verifier(ledger).run(["F.chain", "H.h1"])
    assert all(row.engine_match for row in report.entries if row.family == "F")
    h_rows = [row.to_dict() for row in report.entries if row.family == "H"]
    assert h_rows and all("engine_match" not in data for data in h_rows)


def test_unexpected_status_fails_the_run():
    """Sem o livro de errata, a divergência de 21-3 vira status inesperado."""
    report = make_verifier({}).run(["G.contain1"], pattern="21-3")
    assert len(report.unexpected) == 1
    assert not report.all_as_expected


def test_horizon_is_enforced(ledger):
    with pytest.raises(HorizonError):
        make_verifier(ledger, max_n=13).plan(["F.chain"])
    with pytest.raises(HorizonError):
        Verifier(Settings(errata_path=ERRATA), ledger=ledger, order=5, max_n=8).plan(["G.cd2"])


@pytest.mark.timeout(240)
def test_full_catalog_run_is_deterministic(ledger, tmp_path):
    first = make_verifier(ledger, workers=4).run()
    second = make_verifier(ledger, workers=1).run()
    assert first.all_as_expected, [(r.entry_id, r.pattern) for r in first.unexpected] or first.failures
    assert first.oracle_checks and all(first.oracle_checks.values())
    assert render_report(first) == render_report(second)
    assert sum(row.observed_status == DOCUMENTED_ERRATUM for row in first.entries) == 8

    path = ReportExporter(str(tmp_path)).write_report(first, fmt="json")
    document = load_report(path)
    assert dumps_json(document) == Path(path).read_text(encoding="utf-8")
    assert Path(path).read_text(encoding="utf-8").endswith("}\n")


def test_report_tsv_and_series_rendering(ledger):
    report = make_verifier(ledger).run(["G.g21"])
    tsv = render_report(report, "tsv").splitlines()
    assert tsv[0].startswith("entry_id\tpattern\tfamily")
    assert len(tsv) == 3

    text = render_series("G", "21-3", ["0", "0", "0", "1"], "G.g21", "tsv")
    assert text.splitlines() == ["n\tcoeff", "0\t0", "1\t0", "2\t0", "3\t1"]
    document = json.loads(render_series("G", "21-3", ["0", "1/2"], "G.g21", "json"))
    assert document == {"family": "G", "pattern": "21-3", "order": 1, "coefficients": ["0", "1/2"],
                        "source": "G.g21"}
    with pytest.raises(ReportError):
        render_series("G", "21-3", ["0"], "G.g21", "xml")


@pytest.mark.timeout(240)
def test_full_catalog_at_instance_bounds(ledger):
    report = Verifier(Settings(errata_path=ERRATA), ledger=ledger, order=16).run()
    assert report.all_as_expected, [(r.entry_id, r.pattern) for r in report.unexpected] or report.failures
    assert max(row.max_n for row in report.entries if row.family == "F") == 12
    assert {row.max_n for row in report.entries if row.family in ("G", "MIXED", "H", "PHI")} == {10}
