import json
import pathlib
import random
from fractions import Fraction

import pytest

from harmonicpack.params import builtin_shplus
from harmonicpack.weighting import WeightFunctionSet

DATA = pathlib.Path(__file__).parent / "data"

# one pass/fail line per acceptance criterion, printed in the terminal
# summary so they survive pytest's output capture
CRITERION_LINES: list = []


def record_criterion(num: int, passed: bool, detail: str = ""):
    mark = "PASS" if passed else "FAIL"
    CRITERION_LINES.append(f"criterion {num}: {mark}{' - ' + detail if detail else ''}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERION_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def table():
    return builtin_shplus()


@pytest.fixture(scope="session")
def wset(table):
    return WeightFunctionSet(table)


@pytest.fixture(scope="session")
def reference_table():
    with open(DATA / "certificate_reference.json", "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    return {(e["i"], e["j"]): e for e in raw["entries"]}


def grid_sizes(rng: random.Random, n: int, den: int = 10 ** 6):
    return [Fraction(rng.randint(1, den), den) for _ in range(n)]
