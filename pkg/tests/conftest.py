import pytest

_RESULTS = pytest.StashKey[list]()


@pytest.fixture
def record_criterion(request):
    """Record one acceptance criterion outcome; lines are echoed in the terminal summary."""
    results = request.config.stash.setdefault(_RESULTS, [])

    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        results.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(results):
        terminalreporter.write_line(line)
