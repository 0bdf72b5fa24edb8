import random

import pytest

from balancedga.boolfn import TruthTable


class ScriptedSource:
    """Stand-in RandomSource that replays fixed draws."""

    def __init__(self, draws=(), ints=()):
        self._draws = iter(draws)
        self._ints = iter(ints)
        self.consumed = 0

    def random(self):
        self.consumed += 1
        return next(self._draws)

    def randrange(self, n):
        v = next(self._ints)
        assert 0 <= v < n
        return v


# Parent-choice draws: below 0.5 copies from x, otherwise from y.
X, Y = 0.25, 0.75


def bits(text):
    return [int(c) for c in text]


def random_table(rng: random.Random, n: int) -> TruthTable:
    return TruthTable(n, tuple(rng.getrandbits(1) for _ in range(1 << n)))


@pytest.fixture
def scripted():
    return ScriptedSource


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Call with (ok, detail); logs one PASS/FAIL line and asserts ``ok``."""

    def report(ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] {request.node.name}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, detail

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
