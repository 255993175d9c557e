"""Optimal solo and joint planning with A*, plus helpfulness-aware priorities.

Search runs over canonical world states with a closed set. Ties in the
priority key are broken by the cost-to-go estimate and then by the canonical
state ordering, so results are reproducible.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Sequence

from helpfulness.core import (
    INFINITE,
    AgentId,
    CostModel,
    JointPlan,
    JointStep,
    Plan,
    PlanProvenance,
    PrimitiveAction,
    Problem,
)
from helpfulness.foodworld import (
    GoalSpec,
    WorldState,
    apply_single,
    goal_satisfied,
    joint_successors,
    legal_actions,
)
from helpfulness.heuristics import Agents, h_blocking

StateHeuristic = Callable[[WorldState, GoalSpec], float]


@dataclass(frozen=True)
class SearchState:
    """A node of the joint search: world, path cost so far and back-pointer."""

    world: WorldState
    g_joint: float = 0.0
    parent: "SearchState | None" = field(default=None, repr=False, compare=False)
    via: JointStep | PrimitiveAction | None = field(default=None, compare=False)
    effort: int = field(default=0, compare=False)

    def path(self) -> list:
        steps, node = [], self
        while node.parent is not None:
            steps.append(node.via)
            node = node.parent
        return steps[::-1]


def astar(
    start: WorldState,
    is_goal: Callable[[WorldState], bool],
    successors: Callable[[WorldState], Iterable[tuple[object, WorldState, float]]],
    heuristic: Callable[[WorldState], float],
    priority: Callable[[SearchState, float], tuple] | None = None,
    max_expansions: int | None = None,
) -> SearchState | None:
    """Best-first search; returns the goal node or None when none is reachable.

    ``priority(node, h)`` builds the ordering key; the default is ``(g + h,)``.
    With an admissible heuristic and a key whose first element is ``g + h``
    the returned path is optimal. Equal keys prefer the smaller estimate, then
    fewer non-idle actions, so optimal plans avoid gratuitous moves.
    """
    h0 = heuristic(start)
    if h0 == INFINITE:
        return None
    root = SearchState(start)
    key = priority or (lambda node, h: (node.g_joint + h,))
    frontier = [(key(root, h0), h0, 0, start.sort_key(), 0, root)]
    best_g = {start: 0.0}
    counter = 1
    expansions = 0
    while frontier:
        node = heapq.heappop(frontier)[-1]
        if node.g_joint > best_g.get(node.world, INFINITE):
            continue
        if is_goal(node.world):
            return node
        expansions += 1
        if max_expansions is not None and expansions > max_expansions:
            raise RuntimeError(f"search exceeded {max_expansions} expansions")
        for label, nxt, cost in successors(node.world):
            g = node.g_joint + cost
            if g >= best_g.get(nxt, INFINITE):
                continue
            h = heuristic(nxt)
            if h == INFINITE:
                continue
            best_g[nxt] = g
            child = SearchState(nxt, g, node, label, node.effort + _effort(label))
            heapq.heappush(frontier, (key(child, h), h, child.effort, nxt.sort_key(), counter, child))
            counter += 1
    return None


def _effort(label: object) -> int:
    if isinstance(label, JointStep):
        return (not label.human_action.is_noop) + (not label.robot_action.is_noop)
    if isinstance(label, PrimitiveAction):
        return 0 if label.is_noop else 1
    return 1


def solo_successors(agent: AgentId, model: CostModel):
    def expand(state: WorldState):
        for action in legal_actions(state, agent):
            if not action.is_noop:
                yield action, apply_single(state, action), model.action_cost(action)

    return expand


def joint_successor_fn(model: CostModel, robot_can_act: bool = True):
    def expand(state: WorldState):
        for step, nxt in joint_successors(state):
            if robot_can_act or step.robot_action.is_noop:
                yield step, nxt, model.step_cost(step)

    return expand


def _held_out_of_reach(problem: Problem, acting) -> bool:
    """A dish item stuck in the hand of an agent that never acts."""
    needed = set(problem.goal.required_stack)
    state = problem.initial_state
    return any(state.held(a) in needed for a in AgentId if a not in acting)


def plan_single(
    problem: Problem,
    agent: AgentId = AgentId.HUMAN,
    heuristic: Callable[..., float] = h_blocking,
) -> Plan:
    """Minimum-cost plan for ``agent`` acting alone; infinite cost if none."""
    if problem.missing_items() or _held_out_of_reach(problem, (agent,)):
        return Plan.no_solution(agent)
    goal, model = problem.goal, problem.cost_model
    node = astar(
        problem.initial_state,
        lambda s: goal_satisfied(s, goal),
        solo_successors(agent, model),
        lambda s: heuristic(s, goal, Agents.SOLO, model, agent),
    )
    if node is None:
        return Plan.no_solution(agent)
    return Plan(agent, tuple(node.path()), node.g_joint)


def plan_joint(
    problem: Problem,
    heuristic: Callable[..., float] = h_blocking,
    mode: "PriorityMode | None" = None,
    bundle: "HeuristicBundle | None" = None,
    robot_can_act: bool = True,
) -> JointPlan:
    """Minimum-cost centralized plan for both agents; infinite cost if none.

    A non-default ``mode`` reorders the frontier with helpfulness estimates
    from ``bundle`` (defaults to :func:`default_bundle`). With
    ``robot_can_act`` false the robot may only idle.
    """
    acting = (AgentId.HUMAN, AgentId.ROBOT) if robot_can_act else (AgentId.HUMAN,)
    if problem.missing_items() or _held_out_of_reach(problem, acting):
        return JointPlan.no_solution()
    goal, model = problem.goal, problem.cost_model
    h = lambda s: heuristic(s, goal, Agents.JOINT, model)  # noqa: E731
    priority = None
    if mode is not None and mode.kind is not PriorityKind.COST_ONLY:
        hb = bundle or default_bundle(problem)
        priority = lambda node, hval: search_priority(node, goal, hb, mode, h_joint=hval)  # noqa: E731
    node = astar(
        problem.initial_state, lambda s: goal_satisfied(s, goal), joint_successor_fn(model, robot_can_act), h, priority
    )
    if node is None:
        return JointPlan.no_solution()
    return JointPlan(tuple(node.path()), node.g_joint, PlanProvenance.CENTRALIZED)


@lru_cache(maxsize=200_000)
def solo_cost(state: WorldState, goal: GoalSpec, model: CostModel = CostModel(), agent: AgentId = AgentId.HUMAN) -> float:
    """Optimal solo cost-to-go from ``state``, memoized by canonical state."""
    return plan_single(Problem(state, goal, model), agent).total_cost


@lru_cache(maxsize=200_000)
def joint_cost(state: WorldState, goal: GoalSpec, model: CostModel = CostModel()) -> float:
    """Optimal joint cost-to-go from ``state``, memoized by canonical state."""
    return plan_joint(Problem(state, goal, model)).total_cost


@lru_cache(maxsize=50_000)
def joint_plan_from(state: WorldState, goal: GoalSpec, model: CostModel = CostModel()) -> JointPlan:
    return plan_joint(Problem(state, goal, model))


@lru_cache(maxsize=50_000)
def solo_plan_from(state: WorldState, goal: GoalSpec, model: CostModel = CostModel(), agent: AgentId = AgentId.HUMAN) -> Plan:
    return plan_single(Problem(state, goal, model), agent)


def clear_caches() -> None:
    for fn in (solo_cost, joint_cost, joint_plan_from, solo_plan_from):
        fn.cache_clear()


# Solo reachability between two arbitrary states (the g_{A_H}(I, s) term).


def h_to_state(state: WorldState, target: WorldState, agent: AgentId = AgentId.HUMAN) -> float:
    """Admissible count of actions ``agent`` needs to turn ``state`` into ``target``."""
    other = agent.other
    if state.held(other) != target.held(other):
        return INFINITE
    here, there = _supports(state), _supports(target)
    if set(here) != set(there):
        return INFINITE
    settled: dict[str, bool] = {}

    def is_settled(item: str) -> bool:
        if item not in settled:
            below_here, below_there = here[item], there[item]
            ok = below_here == below_there and below_here not in ("<held>",)
            if ok and below_here != "<table>":
                ok = is_settled(below_here)
            settled[item] = ok
        return settled[item]

    total = 0
    for item in here:
        if item == state.held(other):
            continue
        if is_settled(item):
            continue
        held_now = here[item] == "<held>"
        held_then = there[item] == "<held>"
        if held_now and held_then:
            continue
        total += 1 if (held_now or held_then) else 2
    return float(total)


def _supports(state: WorldState) -> dict[str, str]:
    below = {}
    for stack in state.stacks:
        below[stack[0]] = "<table>"
        for lower, upper in zip(stack, stack[1:]):
            below[upper] = lower
    for item in (state.held_by_human, state.held_by_robot):
        if item is not None:
            below[item] = "<held>"
    return below


class SoloReachability:
    """Memoized optimal solo cost from a fixed start state to arbitrary states."""

    def __init__(self, start: WorldState, model: CostModel = CostModel(), agent: AgentId = AgentId.HUMAN):
        self.start = start
        self.model = model
        self.agent = agent
        self._memo: dict[WorldState, float] = {}

    def __call__(self, start: WorldState, target: WorldState) -> float:
        if start != self.start:
            raise ValueError("reachability solver is bound to a different start state")
        if target not in self._memo:
            scale = 1.0 if self.model.mode.value == "step_count" else self.model.min_action_cost()
            node = astar(
                start,
                lambda s: s == target,
                solo_successors(self.agent, self.model),
                lambda s: h_to_state(s, target, self.agent) * scale,
            )
            self._memo[target] = INFINITE if node is None else node.g_joint
        return self._memo[target]


# Helpfulness-aware priorities.


@dataclass(frozen=True)
class HeuristicBundle:
    h_human: StateHeuristic
    h_joint: StateHeuristic
    g_human_solver: Callable[[WorldState, WorldState], float]
    initial_state: WorldState
    alpha: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")


def default_bundle(problem: Problem, alpha: float = 1.0, exact: bool = False) -> HeuristicBundle:
    """Bundle of admissible heuristics, or exact memoized costs with ``exact``."""
    model = problem.cost_model
    if exact:
        h_human = lambda s, g: solo_cost(s, g, model)  # noqa: E731
        h_joint = lambda s, g: joint_cost(s, g, model)  # noqa: E731
    else:
        h_human = lambda s, g: h_blocking(s, g, Agents.SOLO, model)  # noqa: E731
        h_joint = lambda s, g: h_blocking(s, g, Agents.JOINT, model)  # noqa: E731
    return HeuristicBundle(
        h_human, h_joint, SoloReachability(problem.initial_state, model), problem.initial_state, alpha
    )


def _ext_sub(a: float, b: float) -> float:
    if a == b == INFINITE:
        return 0.0
    return a - b


def helpfulness_heuristic_joint(s: SearchState | WorldState, goal: GoalSpec, hb: HeuristicBundle) -> float:
    """Estimated helpfulness still to come: solo estimate minus joint estimate."""
    world = s.world if isinstance(s, SearchState) else s
    return _ext_sub(hb.h_human(world, goal), hb.h_joint(world, goal))


def helpfulness_heuristic_responsive(
    s: SearchState | WorldState, inferred_goal: GoalSpec, hb: HeuristicBundle
) -> float:
    """Like the joint estimate, for an inferred goal, with the joint share
    scaled by ``alpha``."""
    world = s.world if isinstance(s, SearchState) else s
    h_h, h_j = hb.h_human(world, inferred_goal), hb.h_joint(world, inferred_goal)
    if h_h == INFINITE and h_j == INFINITE:
        return 0.0 if hb.alpha == 1.0 else INFINITE
    if hb.alpha == 0.0:
        return h_h
    return h_h - hb.alpha * h_j


def helpfulness_so_far(s: SearchState, hb: HeuristicBundle) -> float:
    """Solo cost of reaching ``s`` minus the joint path cost that reached it."""
    return _ext_sub(hb.g_human_solver(hb.initial_state, s.world), s.g_joint)


class PriorityKind(enum.Enum):
    COST_ONLY = "cost_only"
    ASSISTIVE_TIEBREAK = "assistive"
    INDEPENDENT_TIEBREAK = "independent"
    ADVERSARIAL_TIEBREAK = "adversarial"
    LINEAR_COMBO = "linear"
    LEXICOGRAPHIC = "lexicographic"


@dataclass(frozen=True)
class PriorityMode:
    """How frontier states are ordered.

    ``weight`` applies to ``LINEAR_COMBO``; ``interaction`` picks the
    helpfulness key used by ``LEXICOGRAPHIC``.
    """

    kind: PriorityKind = PriorityKind.COST_ONLY
    weight: float = 1.0
    interaction: PriorityKind = PriorityKind.ASSISTIVE_TIEBREAK

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"weight must lie in [0, 1], got {self.weight}")
        if self.interaction not in _TIEBREAKS:
            raise ValueError("interaction must be an assistive, independent or adversarial tie-break")


def _assistive(f_help: float) -> float:
    return -f_help


_TIEBREAKS: dict[PriorityKind, Callable[[float], float]] = {
    PriorityKind.ASSISTIVE_TIEBREAK: _assistive,
    PriorityKind.INDEPENDENT_TIEBREAK: abs,
    PriorityKind.ADVERSARIAL_TIEBREAK: lambda f: f,
}


def search_priority(
    s: SearchState,
    goal: GoalSpec,
    hb: HeuristicBundle,
    mode: PriorityMode,
    h_joint: float | None = None,
) -> tuple:
    """Frontier ordering key for ``s``; smaller keys are expanded first."""
    h = hb.h_joint(s.world, goal) if h_joint is None else h_joint
    f_cost = s.g_joint + h
    if mode.kind is PriorityKind.COST_ONLY:
        return (f_cost,)
    if mode.kind is PriorityKind.LINEAR_COMBO and mode.weight == 1.0:
        return (f_cost,)
    f_help = helpfulness_so_far(s, hb) + helpfulness_heuristic_joint(s, goal, hb)
    if math.isnan(f_help):
        f_help = 0.0
    if mode.kind is PriorityKind.LINEAR_COMBO:
        return (mode.weight * f_cost - (1.0 - mode.weight) * f_help,)
    if mode.kind is PriorityKind.LEXICOGRAPHIC:
        return (f_cost, _TIEBREAKS[mode.interaction](f_help))
    return (f_cost, _TIEBREAKS[mode.kind](f_help))


def replay_single(state: WorldState, actions: Sequence[PrimitiveAction]) -> WorldState:
    for action in actions:
        state = apply_single(state, action)
    return state


def replay_joint(state: WorldState, steps: Sequence[JointStep]) -> WorldState:
    from helpfulness.foodworld import apply_joint

    for step in steps:
        state = apply_joint(state, step)
    return state
