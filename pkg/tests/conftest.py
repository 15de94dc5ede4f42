import re

_AC = re.compile(r"test_ac(\d+)_")
_outcomes: dict[int, list[bool]] = {}


def pytest_runtest_logreport(report):
    match = _AC.search(report.nodeid)
    if not match:
        return
    if report.when == "call" or report.failed:
        _outcomes.setdefault(int(match.group(1)), []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for ac in sorted(_outcomes):
        verdict = "PASS" if all(_outcomes[ac]) else "FAIL"
        terminalreporter.write_line(f"AC{ac} {verdict}")
