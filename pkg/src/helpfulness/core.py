"""Domain-independent vocabulary: agents, actions, plans, costs and problems.

Costs are plain floats; ``INFINITE`` (``math.inf``) marks a plan that does not
exist. Helpfulness arithmetic on costs returns signed extended reals, so
``-math.inf`` can appear as a result but never as a cost.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping, Sequence, Union

if TYPE_CHECKING:
    from helpfulness.foodworld import GoalSpec, WorldState

INFINITE = math.inf
NEW_STACK = "<new>"


class UndefinedHelpfulness(ValueError):
    """Raised when a helpfulness quantity has no defined value."""


class _Undefined:
    """Sentinel reported in place of a ratio whose denominator vanishes."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDEFINED"

    __str__ = __repr__

    def __reduce__(self):
        return (_Undefined, ())


UNDEFINED = _Undefined()
MaybeReal = Union[float, _Undefined]


class AgentId(enum.Enum):
    HUMAN = "human"
    ROBOT = "robot"

    @property
    def other(self) -> "AgentId":
        return AgentId.ROBOT if self is AgentId.HUMAN else AgentId.HUMAN


class ActionKind(enum.Enum):
    PICK = "pick"
    PLACE = "place"
    NOOP = "noop"


@dataclass(frozen=True)
class PrimitiveAction:
    """One agent's action for one time step.

    Stacks are identified by their bottom item, which is stable while the stack
    exists. ``PLACE`` may target ``NEW_STACK`` to start a stack on free table.
    """

    kind: ActionKind
    actor: AgentId
    item: str | None = None
    stack: str | None = None

    def __post_init__(self):
        if self.kind is ActionKind.NOOP:
            if self.item is not None or self.stack is not None:
                raise ValueError("noop takes no item or stack")
        elif self.item is None or self.stack is None:
            raise ValueError(f"{self.kind.value} needs an item and a stack")

    @classmethod
    def pick(cls, actor: AgentId, item: str, stack: str) -> "PrimitiveAction":
        return cls(ActionKind.PICK, actor, item, stack)

    @classmethod
    def place(cls, actor: AgentId, item: str, stack: str = NEW_STACK) -> "PrimitiveAction":
        return cls(ActionKind.PLACE, actor, item, stack)

    @classmethod
    def noop(cls, actor: AgentId) -> "PrimitiveAction":
        return cls(ActionKind.NOOP, actor)

    @property
    def is_noop(self) -> bool:
        return self.kind is ActionKind.NOOP

    def sort_key(self) -> tuple:
        return (self.kind.value, self.item or "", self.stack or "")

    def __str__(self) -> str:
        if self.is_noop:
            return "noop"
        if self.kind is ActionKind.PICK:
            return f"pick({self.item} from {self.stack})"
        target = "new stack" if self.stack == NEW_STACK else self.stack
        return f"place({self.item} on {target})"


@dataclass(frozen=True)
class JointStep:
    human_action: PrimitiveAction
    robot_action: PrimitiveAction

    def __post_init__(self):
        if self.human_action.actor is not AgentId.HUMAN:
            raise ValueError("human_action must be performed by the human")
        if self.robot_action.actor is not AgentId.ROBOT:
            raise ValueError("robot_action must be performed by the robot")

    def action_of(self, agent: AgentId) -> PrimitiveAction:
        return self.human_action if agent is AgentId.HUMAN else self.robot_action

    def sort_key(self) -> tuple:
        return (self.human_action.sort_key(), self.robot_action.sort_key())

    def __str__(self) -> str:
        return f"H: {self.human_action} | R: {self.robot_action}"


class CostMode(enum.Enum):
    STEP_COUNT = "step_count"
    WEIGHTED_ACTIONS = "weighted_actions"
    HUMAN_ONLY = "human_only"


_WEIGHTABLE = frozenset(kind.value for kind in (ActionKind.PICK, ActionKind.PLACE))


@dataclass(frozen=True)
class CostModel:
    """How a plan's actions aggregate into a cost.

    ``weights`` maps ``"pick"``/``"place"`` to a per-action cost; no-ops cost
    ``noop_weight``. Both are ignored under ``STEP_COUNT``.
    """

    mode: CostMode = CostMode.STEP_COUNT
    weights: Mapping[str, float] = field(default_factory=dict)
    noop_weight: float = 0.0

    def __post_init__(self):
        weights = dict(self.weights)
        unknown = set(weights) - _WEIGHTABLE
        if unknown:
            raise ValueError(f"unknown action kind(s) in weights: {sorted(unknown)}")
        for name, value in list(weights.items()) + [("noop", self.noop_weight)]:
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"weight for {name} must be finite and >= 0, got {value}")
        object.__setattr__(self, "weights", tuple(sorted(weights.items())))

    @classmethod
    def step_count(cls) -> "CostModel":
        return cls()

    @classmethod
    def weighted(cls, pick: float = 1.0, place: float = 1.0, noop: float = 0.0) -> "CostModel":
        return cls(CostMode.WEIGHTED_ACTIONS, {"pick": pick, "place": place}, noop)

    @classmethod
    def human_only(cls, pick: float = 1.0, place: float = 1.0, noop: float = 0.0) -> "CostModel":
        return cls(CostMode.HUMAN_ONLY, {"pick": pick, "place": place}, noop)

    def weight(self, kind: ActionKind) -> float:
        if kind is ActionKind.NOOP:
            return self.noop_weight
        for name, value in self.weights:
            if name == kind.value:
                return value
        raise ValueError(f"cost model has no weight for action kind {kind.value!r}")

    def scaled(self, factor: float) -> "CostModel":
        if self.mode is CostMode.STEP_COUNT:
            raise ValueError("a step-count model has no weights to scale")
        return CostModel(
            self.mode, {k: v * factor for k, v in self.weights}, self.noop_weight * factor
        )

    def action_cost(self, action: PrimitiveAction) -> float:
        """Cost of a single action executed alone (a solo plan step)."""
        if self.mode is CostMode.STEP_COUNT:
            return 1.0
        if self.mode is CostMode.HUMAN_ONLY and action.actor is not AgentId.HUMAN:
            return 0.0
        return self.weight(action.kind)

    def step_cost(self, step: JointStep) -> float:
        if self.mode is CostMode.STEP_COUNT:
            return 1.0
        if self.mode is CostMode.HUMAN_ONLY:
            return self.weight(step.human_action.kind)
        return self.weight(step.human_action.kind) + self.weight(step.robot_action.kind)

    def min_action_cost(self) -> float:
        """Smallest cost any non-noop action can carry under this model."""
        if self.mode is CostMode.STEP_COUNT:
            return 1.0
        return min(self.weight(ActionKind.PICK), self.weight(ActionKind.PLACE))


class PlanProvenance(enum.Enum):
    SOLO = "solo"
    CENTRALIZED = "centralized"
    RESPONSIVE = "responsive"


@dataclass(frozen=True)
class Plan:
    """A single agent's plan. ``total_cost`` is INFINITE when no plan exists."""

    owner: AgentId
    steps: tuple[PrimitiveAction, ...]
    total_cost: float

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        for action in self.steps:
            if action.actor is not self.owner:
                raise ValueError(f"{action} is not performed by {self.owner.value}")
        if self.total_cost == INFINITE and self.steps:
            raise ValueError("an unsolvable plan carries no steps")

    @classmethod
    def build(cls, owner: AgentId, steps: Sequence[PrimitiveAction], model: CostModel) -> "Plan":
        plan = cls(owner, tuple(steps), 0.0)
        return cls(owner, plan.steps, cost_of_plan(plan, model))

    @classmethod
    def no_solution(cls, owner: AgentId) -> "Plan":
        return cls(owner, (), INFINITE)

    @property
    def solved(self) -> bool:
        return self.total_cost != INFINITE

    def check_cost(self, model: CostModel) -> None:
        if self.solved and not math.isclose(self.total_cost, cost_of_plan(self, model)):
            raise ValueError("stored plan cost disagrees with the cost model")

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class JointPlan:
    """Synchronized human-robot plan, or the realized trace of an episode.

    ``failed`` marks a trace truncated by a risk executive failure; such a
    trace need not reach the goal.
    """

    steps: tuple[JointStep, ...]
    total_cost: float
    provenance: PlanProvenance = PlanProvenance.CENTRALIZED
    failed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.provenance is PlanProvenance.SOLO:
            raise ValueError("a joint plan cannot have solo provenance")
        if self.total_cost == INFINITE and self.steps:
            raise ValueError("an unsolvable plan carries no steps")

    @classmethod
    def build(
        cls,
        steps: Sequence[JointStep],
        model: CostModel,
        provenance: PlanProvenance = PlanProvenance.CENTRALIZED,
        failed: bool = False,
    ) -> "JointPlan":
        plan = cls(tuple(steps), 0.0, provenance, failed)
        return cls(plan.steps, cost_of_plan(plan, model), provenance, failed)

    @classmethod
    def no_solution(cls) -> "JointPlan":
        return cls((), INFINITE)

    @property
    def solved(self) -> bool:
        return self.total_cost != INFINITE

    def check_cost(self, model: CostModel) -> None:
        if self.solved and not math.isclose(self.total_cost, cost_of_plan(self, model)):
            raise ValueError("stored plan cost disagrees with the cost model")

    def robot_only_noops(self) -> bool:
        return all(step.robot_action.is_noop for step in self.steps)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Problem:
    initial_state: "WorldState"
    goal: "GoalSpec"
    cost_model: CostModel = field(default_factory=CostModel)

    def missing_items(self) -> set[str]:
        return set(self.goal.required_stack) - self.initial_state.items()

    def with_state(self, state: "WorldState") -> "Problem":
        return Problem(state, self.goal, self.cost_model)

    def with_goal(self, goal: "GoalSpec") -> "Problem":
        return Problem(self.initial_state, goal, self.cost_model)


def cost_of_plan(plan: Plan | JointPlan, model: CostModel) -> float:
    """Aggregate cost of a plan's steps under ``model``. Never INFINITE."""
    if isinstance(plan, JointPlan):
        return float(sum(model.step_cost(step) for step in plan.steps))
    return float(sum(model.action_cost(action) for action in plan.steps))


def signed_difference(a: float, b: float) -> float:
    """``a - b`` over extended costs; INFINITE - INFINITE is undefined."""
    for value in (a, b):
        if math.isnan(value) or value < 0:
            raise ValueError(f"costs are non-negative, got {value}")
    if a == INFINITE and b == INFINITE:
        raise UndefinedHelpfulness("task is impossible both with and without the robot")
    return a - b
