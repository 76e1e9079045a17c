"""One test per acceptance criterion; each prints a `criterion N: pass|fail` line."""

import json
from pathlib import Path

import pytest

from qgalilei.freealg import freealg_report, verify_flow_lemma
from qgalilei.hopf import check_hopf_axioms, check_pairing_diagonal, check_printed_antipode, hopf_data
from qgalilei.induction import check_casimir, check_classical_limit, check_relations_on_module
from qgalilei.lattice import LatticeParams, check_unitarity, dispersion_study, gaussian_packet, taylor_error
from qgalilei.opcalc import check_duality

from conftest import run_cli

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def announce(capsys, request):
    def _announce(n, ok):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'pass' if ok else 'fail'}")
        assert ok, f"criterion {n} failed"

    return _announce


def _failures(report):
    return [r.to_line() for r in report.records if not r.ok]


def test_criterion_01_engine(announce):
    report = freealg_report(random_triples=500, max_degree=4, seed=0)
    names = {r.check for r in report.records}
    expected = {f"{kind}[{p}]" for kind in ("jacobi", "associativity") for p in ("uq_kmph", "uq_iphn", "fq")}
    assoc_cases = [r.cases for r in report.records if r.check.startswith("associativity")]
    announce(1, report.passed and expected <= names and min(assoc_cases) >= 500)


def test_criterion_02_hopf(announce):
    ok = all(check_hopf_axioms(hopf_data(p), 3).passed for p in ("uq_kmph", "uq_iphn", "fq"))
    printed = check_printed_antipode()
    announce(2, ok and printed.status == "xfail")


def test_criterion_03_pairing_diagonal(announce):
    report = check_pairing_diagonal(4)
    announce(3, report.passed and sum(r.cases for r in report.records) > 0)


def test_criterion_04_duality(announce):
    report = check_duality(4)
    announce(4, report.passed and not _failures(report))


def test_criterion_05_flow_lemma(announce):
    announce(5, verify_flow_lemma(6).passed)


def test_criterion_06_induced_representation(announce):
    rel = check_relations_on_module(degree_cap=8)
    cas = check_casimir(degree_cap=6)
    bracket_cases = [r.cases for r in rel.records if r.check.startswith("module [")]
    central = [r for r in cas.records if "central" in r.check]
    announce(6, rel.passed and cas.passed and min(bracket_cases) == 45 and central and central[0].ok)


def test_criterion_07_classical_limit(announce):
    report = check_classical_limit(degree_cap=6)
    announce(7, report.passed and len(report.records) == 2)


def test_criterion_08_dispersion(announce):
    k = 1.0
    spacings = [0.3, 0.15, 0.075, 0.0375, 0.01875]
    rows = dispersion_study(spacings, k)
    taylor_ok = all(abs(r.abs_err / taylor_error(k, r.a) - 1) <= 0.05 for r in rows if k * r.a <= 0.3)
    ratios = [r.ratio for r in rows if r.ratio is not None]
    ratio_ok = len(rows) >= 4 and all(abs(q - 4.0) <= 0.05 for q in ratios)
    announce(8, taylor_ok and ratio_ok)


def test_criterion_09_unitarity(announce):
    p = LatticeParams(a=0.1, sites=256)
    unitary = gaussian_packet(p, k0=1.0)
    drift = check_unitarity(unitary, 1e3) / unitary.norm()
    real = gaussian_packet(p, k0=1.0, beta=1.0)
    real_drift = check_unitarity(real, 1e3) / real.norm()
    announce(9, drift <= 1e-12 and real_drift > 1e-3)


def test_criterion_10_cli_goldens(announce):
    cases = json.loads((GOLDEN / "cases.json").read_text())
    ok = len(cases) >= 10
    for case in cases:
        code, out, err = run_cli(case["argv"])
        err_file = GOLDEN / f"{case['name']}.err"
        ok &= code == case["code"]
        ok &= out == (GOLDEN / f"{case['name']}.out").read_text()
        ok &= err == (err_file.read_text() if err_file.exists() else "")
    verify = run_cli(["verify", "--suite", "all", "--degree", "4"])
    announce(10, ok and verify[0] == 0)
