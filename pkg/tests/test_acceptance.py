"""Acceptance criteria, one test each.

Every test prints a single ``ACCEPTANCE <k> <title>: PASS|FAIL`` line (shown
even without ``-s``) followed by the measured values, then asserts.
"""

import subprocess
import sys
import time

import pytest

from rabiahm import checks


def report(capsys, number, title, results):
    failed = [c for c in results if not c.passed]
    status = "FAIL" if failed else "PASS"
    detail = "; ".join(c.line()[len("CHECK "):] for c in (failed or results))
    with capsys.disabled():
        print(f"\nACCEPTANCE {number} {title}: {status} [{detail}]")
    assert not failed, "\n".join(c.line() for c in failed)


def test_criterion_1_algebraic_identities(capsys):
    report(capsys, 1, "algebraic identity suite", checks.algebraic_suite(checks.default_params(), budget=10.0))


def test_criterion_2_spectral_suite(capsys):
    report(capsys, 2, "closed-form spectra", checks.spectral_suite(checks.default_params(), budget=10.0))


def test_criterion_3_oracle_equivalence(capsys):
    report(capsys, 3, "analytic vs propagated survival", checks.oracle_suite(checks.default_params(), budget=60.0))


def test_criterion_4_number_state_six(capsys):
    report(capsys, 4, "number state n=6 frequencies and floor", checks.fig2_suite())


def test_criterion_5_coherent_two(capsys):
    report(capsys, 5, "coherent alpha=2 band power near 2 omega", checks.fig4_suite())


def test_criterion_6_coherent_eight(capsys):
    report(capsys, 6, "coherent alpha=8 revivals and quiet window", checks.fig5_suite())


def test_criterion_7_symmetries(capsys):
    report(capsys, 7, "symmetry suite", checks.symmetry_suite(checks.default_params()))


def test_criterion_8_verify_command(capsys):
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "rabiahm", "verify"], capture_output=True, text=True)
    elapsed = time.perf_counter() - start
    results = [
        checks.Check("verify.exit_code", float(proc.returncode), 0.0, "<="),
        checks.Check("verify.wall_clock_s", elapsed, 180.0),
    ]
    report(capsys, 8, "verify command end to end", results)
