import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # one verdict line per acceptance criterion, emitted outside capture
    module = sys.modules.get("test_acceptance")
    criteria = getattr(module, "CRITERIA", None) if module else None
    if not criteria:
        return
    terminalreporter.write_line("")
    for number in sorted(criteria):
        terminalreporter.write_line(f"ACCEPTANCE {number}: {criteria[number]}")
