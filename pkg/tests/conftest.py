import pytest

_LINES = []


@pytest.fixture
def criterion(request):
    """``report(ok, detail)`` records one PASS/FAIL line for an acceptance criterion."""
    number = request.node.get_closest_marker("acceptance").args[0]
    seen = []

    def report(ok, detail=""):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}".rstrip()
        seen.append(line)
        _LINES.append(line)
        print(line)
        return ok

    yield report
    if not seen:
        line = f"criterion {number}: FAIL (raised before its check)"
        _LINES.append(line)
        print(line)


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
