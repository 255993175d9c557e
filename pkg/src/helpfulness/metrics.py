"""Helpfulness, normalized helpfulness, relative helpfulness and expectations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from helpfulness.core import (
    INFINITE,
    UNDEFINED,
    JointPlan,
    MaybeReal,
    Problem,
    UndefinedHelpfulness,
    signed_difference,
)

if TYPE_CHECKING:
    from helpfulness.interaction.recognition import ObservationLog

PROBABILITY_TOLERANCE = 1e-9


def helpfulness(cost_solo: float, cost_team: float) -> MaybeReal:
    """Cost the human saves by having the robot on the team.

    Returns UNDEFINED when the task is impossible with or without the robot.
    """
    try:
        return signed_difference(cost_solo, cost_team)
    except UndefinedHelpfulness:
        return UNDEFINED


def normalized_helpfulness(h: MaybeReal, cost_solo: float, cost_best_team: float) -> MaybeReal:
    """``h`` as a fraction of the largest saving any team plan could give."""
    if h is UNDEFINED or cost_solo == INFINITE or cost_best_team == INFINITE:
        return UNDEFINED
    best = cost_solo - cost_best_team
    if best <= 0:
        return UNDEFINED
    return h / best


def relative_helpfulness(cost_solo_optimal: float, cost_team: float) -> MaybeReal:
    """Fraction of the human's optimal solo cost that the team removes."""
    if cost_solo_optimal == INFINITE or cost_solo_optimal <= 0:
        return UNDEFINED
    if cost_team == INFINITE:
        return -INFINITE
    if cost_team == 0:
        return 1.0
    return (cost_solo_optimal - cost_team) / cost_solo_optimal


@dataclass(frozen=True)
class HelpfulnessReport:
    cost_solo: float
    cost_team: float
    cost_best_team: float
    cost_solo_optimal: float
    H: MaybeReal
    H_N: MaybeReal
    H_R: MaybeReal

    @classmethod
    def from_costs(
        cls,
        cost_solo: float,
        cost_team: float,
        cost_best_team: float,
        cost_solo_optimal: float | None = None,
    ) -> "HelpfulnessReport":
        solo_opt = cost_solo if cost_solo_optimal is None else cost_solo_optimal
        h = helpfulness(cost_solo, cost_team)
        return cls(
            cost_solo,
            cost_team,
            cost_best_team,
            solo_opt,
            h,
            normalized_helpfulness(h, cost_solo, cost_best_team),
            relative_helpfulness(solo_opt, cost_team),
        )

    def row(self, round_ratios: int | None = None) -> list[str]:
        """CSV cells in table order: cost_solo, cost_team, H, H_N, H_R."""
        return [
            format_number(self.cost_solo),
            format_number(self.cost_team),
            format_number(self.H),
            format_number(self.H_N, round_ratios),
            format_number(self.H_R, round_ratios),
        ]


def format_number(value: MaybeReal, digits: int | None = None) -> str:
    """Integers without a decimal point, ratios as shortest round-trip text."""
    if value is UNDEFINED:
        return "undefined"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if digits is not None:
        value = round(value, digits)
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def report(
    problem: Problem,
    team_trace: JointPlan,
    cost_solo: float | None = None,
    cost_team: float | None = None,
) -> HelpfulnessReport:
    """All four costs and three metrics for one episode of ``problem``.

    ``cost_solo`` defaults to the optimal solo cost; ``cost_team`` defaults to
    the trace's own cost (failure accounting may override it).
    """
    from helpfulness.planner import plan_joint, plan_single

    solo_opt = plan_single(problem).total_cost
    best_team = plan_joint(problem).total_cost
    return HelpfulnessReport.from_costs(
        solo_opt if cost_solo is None else cost_solo,
        team_trace.total_cost if cost_team is None else cost_team,
        best_team,
        solo_opt,
    )


@dataclass(frozen=True)
class PlanOutcome:
    """One possible team plan, its probability and its goal's solo optimum."""

    plan: JointPlan
    probability: float
    cost_solo_optimal: float
    cost_team: float | None = None

    @property
    def relative(self) -> MaybeReal:
        team = self.plan.total_cost if self.cost_team is None else self.cost_team
        return relative_helpfulness(self.cost_solo_optimal, team)


@dataclass(frozen=True)
class PlanDistribution:
    entries: tuple[PlanOutcome, ...]
    observations: "ObservationLog | None" = None

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if any(e.probability < 0 for e in self.entries):
            raise ValueError("probabilities must be non-negative")
        total = sum(e.probability for e in self.entries)
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise ValueError(f"probabilities sum to {total}, not 1")


@dataclass(frozen=True)
class ExpectedHelpfulness:
    mean: float
    std: float


def expected_value(values: Sequence[MaybeReal], probabilities: Sequence[float]) -> ExpectedHelpfulness:
    if any(v is UNDEFINED for v in values):
        raise UndefinedHelpfulness("a plan in the distribution has undefined helpfulness")
    mean = math.fsum(v * p for v, p in zip(values, probabilities))
    if math.isinf(mean):
        return ExpectedHelpfulness(mean, math.nan)
    var = math.fsum(p * (v - mean) ** 2 for v, p in zip(values, probabilities))
    return ExpectedHelpfulness(mean, math.sqrt(max(var, 0.0)))


def expected_helpfulness(dist: PlanDistribution) -> ExpectedHelpfulness:
    """Probability-weighted mean and standard deviation of relative helpfulness."""
    return expected_value([e.relative for e in dist.entries], [e.probability for e in dist.entries])
