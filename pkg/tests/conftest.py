import sys


def pytest_terminal_summary(terminalreporter):
    for mod in list(sys.modules.values()):
        lines = getattr(mod, "ACCEPTANCE_LINES", None)
        if lines and getattr(mod, "__name__", "").endswith("test_acceptance"):
            terminalreporter.section("acceptance criteria")
            for line in lines:
                terminalreporter.write_line(line)
            return
