import math

from helpfulness.core import INFINITE, AgentId, CostModel, Problem
from helpfulness.foodworld import GoalSpec, WorldState
from helpfulness.heuristics import Agents, goal_progress, h_blocking, h_misplaced
from helpfulness.oracle import cost_to_go_table

from conftest import instance_suite

G = GoalSpec("g", ("a", "b", "c"))


def test_goal_progress_counts():
    s = WorldState.from_stacks([["a", "x", "b"], ["c"]])
    p = goal_progress(s, G)
    assert p.in_place == 1 and p.misplaced == ("b", "c")
    assert p.blockers == 1  # x sits on the base above unfinished work


def test_h_misplaced_values():
    s = WorldState.from_stacks([["a"], ["b"], ["c"]])
    assert h_misplaced(s, G) == 4
    assert h_misplaced(s, G, Agents.JOINT) == 2
    held = WorldState.from_stacks([["a"], ["c"]], held_by_human="b")
    assert h_misplaced(held, G) == 3
    assert h_misplaced(held, G, Agents.JOINT) == 2


def test_unreachable_goal_is_infinite():
    s = WorldState.from_stacks([["a"], ["b"]])
    for h in (h_misplaced, h_blocking):
        assert h(s, G) == INFINITE
        assert h(s, G, Agents.JOINT) == INFINITE
    robot_holds = WorldState.from_stacks([["a"], ["c"]], held_by_robot="b")
    assert h_blocking(robot_holds, G) == INFINITE
    assert h_blocking(robot_holds, G, Agents.JOINT) < INFINITE


def test_zero_at_goal():
    s = WorldState.from_stacks([["a", "b", "c"]])
    assert h_misplaced(s, G) == h_blocking(s, G) == 0
    assert h_blocking(s, G, Agents.JOINT) == 0


def test_weighted_scaling():
    s = WorldState.from_stacks([["a"], ["b"], ["c"]])
    m = CostModel.weighted(pick=2.0, place=3.0)
    assert h_misplaced(s, G, Agents.SOLO, m) == 8
    assert h_misplaced(s, G, Agents.JOINT, m) == 8


def _check_admissible(problem, heuristic):
    bad = []
    for agents in (Agents.SOLO, Agents.JOINT):
        table = cost_to_go_table(problem, agents)
        for state, true_cost in table.items():
            est = heuristic(state, problem.goal, agents, problem.cost_model)
            if true_cost == INFINITE:
                continue
            if est > true_cost + 1e-9:
                bad.append((agents, state, est, true_cost))
    return bad


def test_both_heuristics_admissible_on_small_instances():
    for problem in instance_suite(6, seed=11, max_items=5):
        for h in (h_misplaced, h_blocking):
            assert _check_admissible(problem, h) == []


def test_h_blocking_dominates_h_misplaced_on_solo():
    for problem in instance_suite(6, seed=5, max_items=5):
        table = cost_to_go_table(problem, Agents.SOLO)
        for state in table:
            a = h_misplaced(state, problem.goal)
            b = h_blocking(state, problem.goal)
            if not math.isinf(a):
                assert b >= a
