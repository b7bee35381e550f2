"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

_results: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        _results.setdefault(name, report.outcome)
        if report.failed:
            _results[name] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_results):
        n, title = name[len("test_criterion_") :].split("_", 1)
        verdict = "PASS" if _results[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {int(n):2d}  {verdict}  {title.replace('_', ' ')}")
