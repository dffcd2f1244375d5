import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    def report(number, name, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} [{number:2d}] {name}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
