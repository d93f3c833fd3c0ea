import pytest

_REPORT = []


@pytest.fixture
def report():
    """Collect one verdict line per acceptance criterion."""
    def add(number, ok, text):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}"
        _REPORT.append(line)
        print(line)
        return ok
    return add


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_REPORT, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
