import sys


def pytest_terminal_summary(terminalreporter):
    """Re-emit the acceptance criterion verdict lines after the run.

    Their stdout is captured per-test; this keeps one PASS/FAIL line per
    criterion visible in the final report without needing ``-s``.
    """
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CRITERION_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
