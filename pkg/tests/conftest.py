import pytest

from bbo.harness import run_experiment

GRID_METHODS = ["gp-ei", "ref-gp-ei"]
GRID_PROBLEMS = ["sphere", "k-tablet", "rosenbrock", "branin", "shekel5", "hartmann6"]
GRID_TRIALS = 20

_verdicts: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def comparison_grid():
    """The 20-trial, B = 10d comparison of gp-ei and ref-gp-ei, run once per session."""
    return run_experiment(GRID_METHODS, GRID_PROBLEMS, GRID_TRIALS, "10d", base_seed=0)


@pytest.fixture
def verdict():
    """Record ``verdict(n, ok, detail)`` for the acceptance summary, then assert ``ok``."""

    def record(n: int, ok: bool, detail: str):
        _verdicts[n] = (bool(ok), detail)
        assert ok, f"criterion {n}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_verdicts):
        ok, detail = _verdicts[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
