import random

import pytest

from helpfulness.core import CostModel, Problem
from helpfulness.foodworld import GoalSpec, WorldState

ORGANIZED = [["pan", "butter", "blueberries", "tray"]] + [
    [i] for i in ("dough", "sugar", "jelly", "chips", "chocolate", "milk", "flour", "eggs")
]
PIE = GoalSpec("blueberry-pie", ("pan", "butter", "dough", "blueberries", "sugar"))
FUDGE = GoalSpec("fudge", ("tray", "chocolate", "milk", "sugar"))
COOKIE = GoalSpec("sugar-cookie", ("tray", "dough", "sugar"))


@pytest.fixture
def organized():
    return WorldState.from_stacks(ORGANIZED)


def random_instance(rng: random.Random, max_items: int = 6, dish_sizes=(3, 4)) -> Problem:
    n = rng.randint(max(dish_sizes), max_items)
    items = [f"i{k}" for k in range(n)]
    rng.shuffle(items)
    stacks, i = [], 0
    while i < n:
        h = rng.randint(1, min(3, n - i))
        stacks.append(items[i : i + h])
        i += h
    size = rng.choice(dish_sizes)
    goal = GoalSpec("dish", tuple(rng.sample(items, size)))
    return Problem(WorldState.from_stacks(stacks), goal, CostModel())


def instance_suite(count: int, seed: int, **kw) -> list[Problem]:
    rng = random.Random(seed)
    return [random_instance(rng, **kw) for _ in range(count)]


_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::")[-1]
        _criteria.setdefault(name, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        number = int(name.split("_")[2])
        terminalreporter.write_line(f"criterion {number:2d}: {_criteria[name]}  ({name})")
