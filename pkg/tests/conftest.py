import sys


def pytest_terminal_summary(terminalreporter, exitstatus):
    # one pass/fail line per acceptance criterion, collected by the
    # acceptance module as its tests run
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CRITERIA", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines):
            terminalreporter.write_line(lines[key])
