"""Terminal reporting for the acceptance suite.

Prints one pass/fail line per acceptance criterion at the end of the
run, independent of output capture.
"""

import re

import pytest

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    match = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if match is None:
        return
    key = int(match.group(1))
    if report.when == "call":
        _ACCEPTANCE[key] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _ACCEPTANCE[key] = report.outcome  # fixture error counts as failure


_TITLES = {
    1: "virial identity",
    2: "mass formula cross-check",
    3: "endpoint dichotomy",
    4: "critical-mass decay slope",
    5: "moderate-speed mass lower bound",
    6: "scaling invariance of the critical norm",
    7: "soliton propagation and scheme order",
    8: "conservation across the suite",
    9: "gauge equivalence round trip",
    10: "scattering signature dichotomy",
    11: "inequality probes",
    12: "determinism of experiment outputs",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        outcome = _ACCEPTANCE[key]
        word = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(
            f"criterion {key:02d} ({_TITLES.get(key, '?')}): {word}"
        )
