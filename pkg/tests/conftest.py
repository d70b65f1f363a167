import numpy as np
import pytest

from cgim.generators import star
from cgim.graph import Graph


@pytest.fixture
def path3():
    return Graph.from_edges([(0, 1), (1, 2)])


@pytest.fixture
def star4():
    """Center 0 with leaves 1, 2, 3."""
    return Graph.from_edges(star(3))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


_VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record a one-line PASS/FAIL/SKIP result, then assert or skip."""

    def record(label: str, ok: bool | None, detail: str = "") -> None:
        word = "SKIP" if ok is None else "PASS" if ok else "FAIL"
        _VERDICTS.append(f"{word}  {label}" + (f"  [{detail}]" if detail else ""))
        print(_VERDICTS[-1])
        if ok is None:
            pytest.skip(detail)
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
