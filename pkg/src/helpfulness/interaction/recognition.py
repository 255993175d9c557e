"""Goal recognition from observed actions.

Each hypothesis is scored by how much the observed human behaviour costs
beyond that goal's optimum, and weighted by a Boltzmann factor. Observed
actions are replayed one joint step at a time, so the human's progress is
judged against the state the robot's own actions produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from helpfulness.core import INFINITE, AgentId, CostModel, JointStep, PrimitiveAction
from helpfulness.foodworld import GoalSpec, WorldState, apply_joint, apply_single, release_held
from helpfulness.planner import solo_cost

PROBABILITY_TOLERANCE = 1e-9


class RecognitionError(RuntimeError):
    """No goal hypothesis is consistent with the observations."""


@dataclass(frozen=True)
class ObservationLog:
    """Timestamped actions of both agents, in execution order."""

    events: tuple[tuple[int, AgentId, PrimitiveAction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        last: dict[AgentId, int] = {}
        for t, actor, action in self.events:
            if action.actor is not actor:
                raise ValueError(f"event at t={t} attributes {action} to {actor.value}")
            if t <= last.get(actor, -1):
                raise ValueError(f"time steps for {actor.value} must strictly increase")
            last[actor] = t

    def record(self, t: int, step: JointStep) -> "ObservationLog":
        return ObservationLog(
            self.events + ((t, AgentId.HUMAN, step.human_action), (t, AgentId.ROBOT, step.robot_action))
        )

    def steps(self) -> list[JointStep]:
        """Group events into joint steps; a missing actor is taken to idle."""
        by_time: dict[int, dict[AgentId, PrimitiveAction]] = {}
        for t, actor, action in self.events:
            by_time.setdefault(t, {})[actor] = action
        return [
            JointStep(
                acts.get(AgentId.HUMAN, PrimitiveAction.noop(AgentId.HUMAN)),
                acts.get(AgentId.ROBOT, PrimitiveAction.noop(AgentId.ROBOT)),
            )
            for _, acts in sorted(by_time.items())
        ]

    def human_actions(self) -> list[PrimitiveAction]:
        return [a for _, actor, a in self.events if actor is AgentId.HUMAN]

    def __len__(self) -> int:
        return len({t for t, _, _ in self.events})


@dataclass(frozen=True)
class GoalHypothesis:
    goal: GoalSpec
    prior: float
    posterior: float


@dataclass(frozen=True)
class Belief:
    hypotheses: tuple[GoalHypothesis, ...]
    beta: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "hypotheses", tuple(self.hypotheses))
        if not self.hypotheses:
            raise ValueError("a belief needs at least one hypothesis")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        for attr in ("prior", "posterior"):
            values = [getattr(h, attr) for h in self.hypotheses]
            if any(v < 0 for v in values):
                raise ValueError(f"{attr}s must be non-negative")
            if abs(sum(values) - 1.0) > PROBABILITY_TOLERANCE:
                raise ValueError(f"{attr}s must sum to 1, got {sum(values)}")

    @classmethod
    def from_prior(cls, goals: Sequence[GoalSpec], prior: Sequence[float] | None = None, beta: float = 1.0) -> "Belief":
        if prior is None:
            prior = [1.0 / len(goals)] * len(goals)
        total = sum(prior)
        prior = [p / total for p in prior]
        return cls(tuple(GoalHypothesis(g, p, p) for g, p in zip(goals, prior)), beta)

    @property
    def goals(self) -> list[GoalSpec]:
        return [h.goal for h in self.hypotheses]

    @property
    def inferred_goal(self) -> GoalSpec:
        """Most probable goal; ties go to the alphabetically first dish."""
        best = max(h.posterior for h in self.hypotheses)
        tied = [h.goal for h in self.hypotheses if math.isclose(h.posterior, best, rel_tol=1e-12, abs_tol=1e-15)]
        return min(tied, key=lambda g: g.dish_name)

    def posterior_of(self, goal: GoalSpec) -> float:
        for h in self.hypotheses:
            if h.goal == goal:
                return h.posterior
        return 0.0

    def with_posteriors(self, posteriors: Iterable[float]) -> "Belief":
        return Belief(
            tuple(GoalHypothesis(h.goal, h.prior, p) for h, p in zip(self.hypotheses, posteriors)),
            self.beta,
        )


def _human_view(state: WorldState) -> WorldState:
    # The human's remaining solo effort, assuming the robot sets down what it holds.
    return release_held(state, AgentId.ROBOT)


def action_regret(state: WorldState, action: PrimitiveAction, goal: GoalSpec, model: CostModel = CostModel()) -> float:
    """Extra solo cost the human incurs for ``goal`` by taking ``action`` now."""
    before = solo_cost(_human_view(state), goal, model)
    after = solo_cost(_human_view(apply_single(state, action)), goal, model)
    if after == INFINITE:
        return INFINITE
    return model.action_cost(action) + after - before


def observation_regret(
    log: ObservationLog, initial_state: WorldState, goal: GoalSpec, model: CostModel = CostModel()
) -> float:
    """Summed regret of every observed human action for ``goal``.

    With no robot interference this equals the optimal cost of a plan that
    starts with the observations minus the unconstrained optimum.
    """
    state = initial_state
    total = 0.0
    for step in log.steps():
        total += action_regret(state, step.human_action, goal, model)
        if total == INFINITE:
            return INFINITE
        state = apply_joint(state, step)
    return total


def goal_posterior(
    log: ObservationLog,
    belief: Belief,
    initial_state: WorldState,
    model: CostModel = CostModel(),
) -> Belief:
    """Posterior over goals: prior times exp(-beta * regret), renormalized."""
    if not log.events or belief.beta == 0:
        return belief.with_posteriors(h.prior for h in belief.hypotheses)
    log_weights = []
    for h in belief.hypotheses:
        regret = observation_regret(log, initial_state, h.goal, model)
        if h.prior == 0 or regret == INFINITE:
            log_weights.append(-INFINITE)
        else:
            log_weights.append(math.log(h.prior) - belief.beta * regret)
    top = max(log_weights)
    if top == -INFINITE:
        raise RecognitionError("no goal hypothesis is consistent with the observations")
    weights = [math.exp(w - top) if w != -INFINITE else 0.0 for w in log_weights]
    total = math.fsum(weights)
    return belief.with_posteriors(w / total for w in weights)
