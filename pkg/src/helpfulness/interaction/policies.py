"""Goal-directed human models and the responsive and risk-bounded robots."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Callable, Protocol

from helpfulness.core import INFINITE, NEW_STACK, ActionKind, AgentId, CostModel, JointStep, PrimitiveAction
from helpfulness.foodworld import (
    GoalSpec,
    WorldState,
    apply_joint,
    goal_satisfied,
    is_legal,
    joint_legal,
    legal_actions,
    release_held,
)
from helpfulness.interaction.recognition import Belief
from helpfulness.planner import (
    HeuristicBundle,
    helpfulness_heuristic_responsive,
    joint_cost,
    joint_plan_from,
    solo_plan_from,
)

NOOP_R = PrimitiveAction.noop(AgentId.ROBOT)
NOOP_H = PrimitiveAction.noop(AgentId.HUMAN)


class HumanPolicy(Protocol):
    def __call__(
        self, state: WorldState, goal: GoalSpec, last_robot_action: PrimitiveAction | None, model: CostModel
    ) -> PrimitiveAction:
        ...


def solo_human(state, goal, last_robot_action=None, model=CostModel()) -> PrimitiveAction:
    """Next action of an optimal solo plan from the current state."""
    plan = solo_plan_from(state, goal, model)
    return plan.steps[0] if plan.solved and plan.steps else NOOP_H


def adaptive_human(state, goal, last_robot_action=None, model=CostModel()) -> PrimitiveAction:
    """Works alone until the robot joins in.

    After a robot move the human plays its part of an optimal joint
    completion; while the robot sits on an item the human makes the best move
    assuming the robot keeps idling.
    """
    if last_robot_action is not None and not last_robot_action.is_noop:
        plan = joint_plan_from(state, goal, model)
        if plan.solved and plan.steps:
            return plan.steps[0].human_action
    if state.held_by_robot is not None:
        return _respond_to_idle_robot(state, goal, model)
    return solo_human(state, goal, last_robot_action, model)


def _respond_to_idle_robot(state: WorldState, goal: GoalSpec, model: CostModel) -> PrimitiveAction:
    # ties go to the human's own next solo move, then to waiting
    own = solo_plan_from(release_held(state, AgentId.ROBOT), goal, model)
    mine = own.steps[0] if own.solved and own.steps else None
    scored = []
    for action in legal_actions(state, AgentId.HUMAN):
        step = JointStep(action, NOOP_R)
        if joint_legal(state, step):
            rank = 0 if action == mine else (1 if action.is_noop else 2)
            scored.append((_step_value(state, step, goal, model), rank, action.sort_key(), action))
    best = min(scored, key=lambda t: t[:3])
    return NOOP_H if best[0] == INFINITE else best[3]


class CommittedHuman:
    """Follows one optimal solo plan and replans only when it stops being
    executable. Stateful: use one instance per episode."""

    def __init__(self):
        self._queue: list[PrimitiveAction] = []

    def __call__(self, state, goal, last_robot_action=None, model=CostModel()):
        if not self._queue or not is_legal(state, self._queue[0]):
            plan = solo_plan_from(state, goal, model)
            self._queue = list(plan.steps) if plan.solved else []
        return self._queue.pop(0) if self._queue else NOOP_H


@dataclass(frozen=True)
class StepContext:
    """What the robot knows when choosing its action."""

    elapsed: int
    last_robot_action: PrimitiveAction | None = None
    model: CostModel = CostModel()
    human_model: HumanPolicy = adaptive_human


def _step_value(state: WorldState, step: JointStep, goal: GoalSpec, model: CostModel) -> float:
    nxt = apply_joint(state, step)
    rest = 0.0 if goal_satisfied(nxt, goal) else joint_cost(nxt, goal, model)
    return model.step_cost(step) + rest


def best_responses(
    state: WorldState, goal: GoalSpec, human_action: PrimitiveAction, model: CostModel = CostModel()
) -> tuple[float, list[PrimitiveAction]]:
    """Robot actions minimizing the team's cost to ``goal`` given the human's action."""
    scored = []
    for action in legal_actions(state, AgentId.ROBOT):
        step = JointStep(human_action, action)
        if joint_legal(state, step):
            scored.append((_step_value(state, step, goal, model), action))
    if not scored:
        return INFINITE, []
    best = min(v for v, _ in scored)
    if best == INFINITE:
        return INFINITE, []
    return best, [a for v, a in scored if v == best]


def consistent_with(
    state: WorldState,
    action: PrimitiveAction,
    goal: GoalSpec,
    human_action: PrimitiveAction,
    model: CostModel = CostModel(),
) -> bool:
    """True when a non-idle robot ``action`` is a best response for ``goal``."""
    if action.is_noop:
        return False
    return action in best_responses(state, goal, human_action, model)[1]


def predicted_human(state: WorldState, goal: GoalSpec, ctx: StepContext) -> PrimitiveAction:
    return ctx.human_model(state, goal, ctx.last_robot_action, ctx.model)


def choose_assist(
    state: WorldState, goal: GoalSpec, ctx: StepContext, hb: HeuristicBundle | None = None
) -> PrimitiveAction | None:
    """Best robot action toward ``goal``; None when no joint completion exists.

    Idling wins whenever it is itself a best response, so the robot only moves
    when moving strictly helps. Remaining ties prefer the robot's move in an
    optimal joint plan, then the successor with the larger estimated
    helpfulness still to come.
    """
    human = predicted_human(state, goal, ctx)
    _, best = best_responses(state, goal, human, ctx.model)
    if not best:
        return None
    plan = joint_plan_from(state, goal, ctx.model)
    planned = plan.steps[0].robot_action if plan.solved and plan.steps else None

    def rank(action: PrimitiveAction):
        help_next = 0.0
        if hb is not None:
            nxt = apply_joint(state, JointStep(human, action))
            help_next = helpfulness_heuristic_responsive(nxt, goal, hb)
        return (not action.is_noop, action != planned, -help_next, action.sort_key())

    return min(best, key=rank)


def responsive_step(
    state: WorldState,
    belief: Belief,
    observe_budget: int,
    hb: HeuristicBundle | None = None,
    ctx: StepContext | None = None,
) -> PrimitiveAction:
    """Watch for ``observe_budget`` steps, then help with the inferred goal."""
    ctx = ctx or StepContext(elapsed=0)
    if ctx.elapsed < observe_budget:
        return NOOP_R
    action = choose_assist(state, belief.inferred_goal, ctx, hb)
    if action is None:
        warnings.warn(f"no joint completion for {belief.inferred_goal.dish_name}; robot idles", RuntimeWarning)
        return NOOP_R
    return action


class FailurePolicy(enum.Enum):
    HALT_ON_FAILURE = "halt"
    CONTINUE_AFTER_FAILURE = "continue"


@dataclass(frozen=True)
class RiskConfig:
    delta: float
    failure_policy: FailurePolicy = FailurePolicy.HALT_ON_FAILURE

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")


def destination(goal: GoalSpec, item: str) -> str:
    """Stack an item ends up on when building ``goal``: the dish base, or
    free table space for the base itself and for anything not in the dish."""
    stack = goal.required_stack
    return stack[0] if item in stack[1:] else NEW_STACK


def consistent_goals(
    state: WorldState, action: PrimitiveAction, belief: Belief, ctx: StepContext
) -> frozenset[str]:
    """Names of the goals under which ``action`` commits the robot correctly.

    A pick also has to send the item where the inferred goal would, so that
    the placement that follows adds no new exposure.
    """
    if action.is_noop:
        return frozenset(belief_names(belief))
    intended = destination(belief.inferred_goal, action.item) if action.kind is ActionKind.PICK else None
    names = set()
    for h in belief.hypotheses:
        if intended is not None and destination(h.goal, action.item) != intended:
            continue
        if consistent_with(state, action, h.goal, predicted_human(state, h.goal, ctx), ctx.model):
            names.add(h.goal.dish_name)
    return frozenset(names)


def belief_names(belief: Belief) -> list[str]:
    return [h.goal.dish_name for h in belief.hypotheses]


def commitment_risk(belief: Belief, safe: frozenset[str]) -> float:
    """Posterior mass outside ``safe``."""
    return max(0.0, 1.0 - sum(h.posterior for h in belief.hypotheses if h.goal.dish_name in safe))


def action_risk(
    state: WorldState,
    action: PrimitiveAction,
    belief: Belief,
    ctx: StepContext,
    committed: frozenset[str] | None = None,
) -> float:
    """Posterior probability that taking ``action`` leaves the robot with a
    wrong commitment, given the goals its earlier moves already ruled in."""
    if action.is_noop:
        return 0.0
    safe = consistent_goals(state, action, belief, ctx)
    if committed is not None:
        safe &= committed
    return commitment_risk(belief, safe)


def risk_bounded_step(
    state: WorldState,
    belief: Belief,
    config: RiskConfig,
    hb: HeuristicBundle | None = None,
    ctx: StepContext | None = None,
    committed: frozenset[str] | None = None,
    observe_budget: int = 0,
) -> tuple[PrimitiveAction, frozenset[str] | None]:
    """Responsive action if the chance of a wrong commitment stays within the
    bound, else NOOP.

    ``committed`` holds the goals consistent with every move made so far
    (None before the first). Returns the action and the updated set.
    """
    ctx = ctx or StepContext(elapsed=0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        action = responsive_step(state, belief, observe_budget, hb, ctx)
    if action.is_noop:
        return action, committed
    safe = consistent_goals(state, action, belief, ctx)
    if committed is not None:
        safe &= committed
    if commitment_risk(belief, safe) <= config.delta + 1e-12:
        return action, safe
    return NOOP_R, committed


RobotPolicy = Callable[[WorldState, Belief, StepContext, object], tuple[PrimitiveAction, object]]
