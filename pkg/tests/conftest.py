import pytest

_CRITERIA = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if name.startswith("test_criterion_"):
        lines = [l for l in report.capstdout.splitlines() if l.startswith("criterion")]
        _CRITERIA.append((name, report.outcome, lines[-1] if lines else ""))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, line in _CRITERIA:
        if line:
            terminalreporter.write_line(line)
        else:
            terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def games():
    from negmomentum.dynamics import build_game

    return {seed: build_game(100, seed) for seed in (0, 1, 2)}
