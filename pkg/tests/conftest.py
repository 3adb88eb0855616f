"""Shared pytest plumbing: a criterion log that prints one PASS/FAIL line
per acceptance check in the terminal summary."""

import pytest

_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion_log():
    """Record one acceptance-criterion verdict; echoed in the summary."""

    def _log(name: str, passed: bool, detail: str) -> None:
        _RESULTS.append((name, passed, detail))
        print(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} ({detail})")

    return _log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _RESULTS:
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}  ({detail})")
