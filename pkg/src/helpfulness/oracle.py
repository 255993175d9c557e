"""Brute-force optimal costs by exhaustive uniform-cost search.

Kept deliberately separate from the A* planner: no heuristics, no pruning of
idle steps, and successors are enumerated straight from the legality rules.
"""

from __future__ import annotations

import heapq
import itertools

from helpfulness.core import INFINITE, AgentId, JointStep, Problem
from helpfulness.foodworld import apply_single, goal_satisfied, joint_legal, legal_actions
from helpfulness.heuristics import Agents

DEFAULT_MAX_ITEMS = 8


class OracleBoundExceeded(ValueError):
    """The instance is too large for exhaustive search."""


def oracle_cost(
    problem: Problem,
    agents: Agents = Agents.SOLO,
    agent: AgentId = AgentId.HUMAN,
    max_items: int = DEFAULT_MAX_ITEMS,
) -> float:
    start = problem.initial_state
    n_items = len(start.items())
    if n_items > max_items:
        raise OracleBoundExceeded(f"{n_items} items exceeds the oracle bound of {max_items}")
    model, goal = problem.cost_model, problem.goal
    if agents is Agents.SOLO:

        def moves(state):
            for action in legal_actions(state, agent):
                yield apply_single(state, action), model.action_cost(action)

    else:

        def moves(state):
            for h, r in itertools.product(legal_actions(state, AgentId.HUMAN), legal_actions(state, AgentId.ROBOT)):
                step = JointStep(h, r)
                if joint_legal(state, step):
                    yield apply_single(apply_single(state, h), r), model.step_cost(step)

    done = set()
    tie = itertools.count()
    frontier = [(0.0, next(tie), start)]
    while frontier:
        g, _, state = heapq.heappop(frontier)
        if state in done:
            continue
        if goal_satisfied(state, goal):
            return g
        done.add(state)
        for nxt, cost in moves(state):
            if nxt not in done:
                heapq.heappush(frontier, (g + cost, next(tie), nxt))
    return INFINITE


def reachable_states(problem: Problem, agents: Agents = Agents.JOINT, max_items: int = DEFAULT_MAX_ITEMS):
    """Every state reachable from the initial state (for exhaustive sweeps)."""
    start = problem.initial_state
    if len(start.items()) > max_items:
        raise OracleBoundExceeded(f"instance exceeds the oracle bound of {max_items} items")
    seen = {start}
    stack = [start]
    actors = (AgentId.HUMAN, AgentId.ROBOT) if agents is Agents.JOINT else (AgentId.HUMAN,)
    while stack:
        state = stack.pop()
        for actor in actors:
            for action in legal_actions(state, actor):
                nxt = apply_single(state, action)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return seen


def cost_to_go_table(
    problem: Problem,
    agents: Agents = Agents.SOLO,
    agent: AgentId = AgentId.HUMAN,
    max_items: int = DEFAULT_MAX_ITEMS,
) -> dict:
    """Exact optimal cost-to-go for every reachable state.

    Builds the full transition graph and runs Dijkstra backwards from all goal
    states. Unreachable-goal states map to INFINITE.
    """
    states = reachable_states(problem, Agents.JOINT, max_items)
    model, goal = problem.cost_model, problem.goal
    reverse: dict = {s: [] for s in states}
    for state in states:
        if agents is Agents.SOLO:
            for action in legal_actions(state, agent):
                reverse[apply_single(state, action)].append((state, model.action_cost(action)))
        else:
            for h, r in itertools.product(legal_actions(state, AgentId.HUMAN), legal_actions(state, AgentId.ROBOT)):
                step = JointStep(h, r)
                if joint_legal(state, step):
                    nxt = apply_single(apply_single(state, h), r)
                    reverse[nxt].append((state, model.step_cost(step)))
    dist = {s: INFINITE for s in states}
    tie = itertools.count()
    frontier = []
    for s in states:
        if goal_satisfied(s, goal):
            dist[s] = 0.0
            frontier.append((0.0, next(tie), s))
    heapq.heapify(frontier)
    while frontier:
        d, _, s = heapq.heappop(frontier)
        if d > dist[s]:
            continue
        for prev, cost in reverse[s]:
            if d + cost < dist[prev]:
                dist[prev] = d + cost
                heapq.heappush(frontier, (d + cost, next(tie), prev))
    return dist
