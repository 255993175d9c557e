"""Admissible cost-to-go estimates for Foodworld goals."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from helpfulness.core import INFINITE, AgentId, CostMode, CostModel
from helpfulness.foodworld import GoalSpec, WorldState


class Agents(enum.Enum):
    SOLO = "solo"
    JOINT = "joint"


@dataclass(frozen=True)
class GoalProgress:
    """How far a state is from a goal stack.

    ``in_place`` goal items already form the bottom of the goal stack;
    ``blockers`` are items that sit on top of unfinished goal work and must be
    lifted off.
    """

    in_place: int
    misplaced: tuple[str, ...]
    held_needed: dict
    blockers: int
    next_item_held: bool
    base_in_place: bool
    missing: bool


def goal_progress(state: WorldState, goal: GoalSpec) -> GoalProgress:
    required = goal.required_stack
    in_place = 0
    base_stack = state.stack(required[0])
    if base_stack is not None:
        while in_place < min(len(base_stack), len(required)) and base_stack[in_place] == required[in_place]:
            in_place += 1
    misplaced = required[in_place:]
    needed = set(misplaced)
    held_needed = {
        agent: state.held(agent)
        for agent in (AgentId.HUMAN, AgentId.ROBOT)
        if state.held(agent) in needed
    }
    blockers = 0
    for stack in state.stacks:
        if base_stack is not None and stack[0] == base_stack[0]:
            above = stack[in_place:]
            if misplaced or len(stack) > len(required):
                blockers += sum(1 for item in above if item not in needed)
            continue
        deepest = next((i for i, item in enumerate(stack) if item in needed), None)
        if deepest is not None:
            blockers += sum(1 for item in stack[deepest + 1 :] if item not in needed)
    next_held = bool(misplaced) and misplaced[0] in held_needed.values()
    missing = bool(set(required) - state.items())
    return GoalProgress(
        in_place, misplaced, held_needed, blockers, next_held, in_place > 0, missing
    )


def _solo_blocked(progress: GoalProgress, agent: AgentId) -> bool:
    return progress.missing or agent.other in progress.held_needed


def h_misplaced(
    state: WorldState,
    goal: GoalSpec,
    agents: Agents = Agents.SOLO,
    model: CostModel | None = None,
    agent: AgentId = AgentId.HUMAN,
) -> float:
    """Two actions per misplaced goal item, one fewer for each one in hand.

    The joint estimate halves the count since two agents act per step.
    """
    progress = goal_progress(state, goal)
    if progress.missing:
        return INFINITE
    n = len(progress.misplaced)
    if agents is Agents.SOLO:
        if _solo_blocked(progress, agent):
            return INFINITE
        actions = 2 * n - (1 if agent in progress.held_needed else 0)
        return _scale_solo(actions, model)
    actions = 2 * n - len(progress.held_needed)
    return _scale_joint(actions, math.ceil(actions / 2), model)


def h_blocking(
    state: WorldState,
    goal: GoalSpec,
    agents: Agents = Agents.SOLO,
    model: CostModel | None = None,
    agent: AgentId = AgentId.HUMAN,
) -> float:
    """Misplaced-item count plus items blocking them, and for joint search the
    number of steps needed to place goal items one at a time onto the base."""
    progress = goal_progress(state, goal)
    if progress.missing:
        return INFINITE
    n = len(progress.misplaced)
    held_goal = len(progress.held_needed)
    b = progress.blockers
    if agents is Agents.SOLO:
        if _solo_blocked(progress, agent):
            return INFINITE
        own_goal = 1 if agent in progress.held_needed else 0
        unheld = n - own_goal
        actions = 2 * unheld + own_goal + 2 * b
        holding_junk = state.held(agent) is not None and not own_goal
        if holding_junk and unheld + b > 0:
            actions += 1
        if n == 0 and b > 0:
            actions -= 1
        return _scale_solo(actions, model)
    unheld = n - held_goal
    actions = 2 * unheld + held_goal + 2 * b - min(2, b)
    steps = math.ceil(actions / 2)
    if n:
        placements = n if progress.next_item_held else n + 1
        steps = max(steps, placements)
    return _scale_joint(actions, steps, model)


def _scale_solo(actions: int, model: CostModel | None) -> float:
    actions = max(actions, 0)
    if model is None or model.mode is CostMode.STEP_COUNT:
        return float(actions)
    return actions * model.min_action_cost()


def _scale_joint(actions: int, steps: int, model: CostModel | None) -> float:
    actions, steps = max(actions, 0), max(steps, 0)
    if model is None or model.mode is CostMode.STEP_COUNT:
        return float(steps)
    if model.mode is CostMode.WEIGHTED_ACTIONS:
        return actions * model.min_action_cost()
    return steps * min(model.noop_weight, model.min_action_cost())
