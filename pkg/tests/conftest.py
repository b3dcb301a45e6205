"""Shared test configuration: deterministic hypothesis runs and the
per-criterion summary for the acceptance suite."""

from __future__ import annotations

import re

from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

# one terminal line per acceptance criterion, in criterion order
_CRITERIA = {
    "c01": "renormalization sanity",
    "c02": "rwa splitting",
    "c03": "low-frequency bath orderings",
    "c04": "ohmic bath orderings",
    "c05": "low-Q robustness",
    "c06": "classification table",
    "c07": "factorization identity",
    "c08": "plancherel consistency",
    "c09": "oracle equivalence",
    "c10": "principal-value quadrature",
}

_results: dict[str, str] = {}
_PATTERN = re.compile(r"test_acceptance\.py::test_(c\d{2})")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m:
        return
    key = m.group(1)
    if report.when == "call":
        _results[key] = report.outcome
    elif report.outcome != "passed":
        # setup/teardown error counts as a failed criterion
        _results[key] = "failed"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results):
        outcome = _results[key]
        tag = "PASS" if outcome == "passed" else outcome.upper()
        name = _CRITERIA.get(key, "?")
        terminalreporter.write_line(f"[{tag}] criterion {key[1:]}: {name}")
