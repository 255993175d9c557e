"""Episode simulation and Monte Carlo sweeps over the risk bound."""

from __future__ import annotations

import csv
import math
import random
import statistics
from dataclasses import dataclass, field
from typing import Callable, Sequence, TextIO

from helpfulness.core import (
    INFINITE,
    AgentId,
    CostModel,
    JointPlan,
    JointStep,
    MaybeReal,
    PlanProvenance,
    PrimitiveAction,
    Problem,
)
from helpfulness.foodworld import GoalSpec, WorldState, apply_joint, goal_satisfied, joint_legal, release_held
from helpfulness.interaction.policies import (
    NOOP_R,
    FailurePolicy,
    HumanPolicy,
    RiskConfig,
    StepContext,
    adaptive_human,
    consistent_with,
    responsive_step,
    risk_bounded_step,
)
from helpfulness.interaction.recognition import Belief, ObservationLog, goal_posterior
from helpfulness.metrics import HelpfulnessReport, format_number
from helpfulness.planner import HeuristicBundle, joint_cost, solo_cost

STEP_CAP_FACTOR = 4
FALLBACK_STEP_CAP = 100

Commitment = frozenset[str] | None
RobotPolicy = Callable[[WorldState, Belief, StepContext, Commitment], tuple[PrimitiveAction, Commitment]]


def idle_robot() -> RobotPolicy:
    return lambda state, belief, ctx, committed: (NOOP_R, committed)


def responsive_robot(observe_budget: int, hb: HeuristicBundle | None = None) -> RobotPolicy:
    return lambda state, belief, ctx, committed: (responsive_step(state, belief, observe_budget, hb, ctx), committed)


def risk_bounded_robot(config: RiskConfig, observe_budget: int = 0, hb: HeuristicBundle | None = None) -> RobotPolicy:
    def act(state, belief, ctx, committed):
        return risk_bounded_step(state, belief, config, hb, ctx, committed, observe_budget)

    return act


@dataclass(frozen=True)
class MetricSnapshot:
    """Helpfulness as projected after ``step`` joint steps."""

    step: int
    remaining_solo_cost: float
    remaining_team_cost: float
    H: MaybeReal
    H_N: MaybeReal
    H_R: MaybeReal

    def row(self) -> list[str]:
        return [str(self.step)] + [
            format_number(v)
            for v in (self.remaining_solo_cost, self.remaining_team_cost, self.H, self.H_N, self.H_R)
        ]


@dataclass(frozen=True)
class EpisodeTrace:
    trace: JointPlan
    snapshots: tuple[MetricSnapshot, ...]
    failed: bool
    true_goal: GoalSpec
    report: HelpfulnessReport
    timed_out: bool = False
    committed: Commitment = None
    final_state: WorldState | None = field(default=None, compare=False)

    @property
    def steps(self) -> int:
        return len(self.trace)

    @property
    def succeeded(self) -> bool:
        return self.final_state is not None and goal_satisfied(self.final_state, self.true_goal)


def remaining_solo(state: WorldState, goal: GoalSpec, model: CostModel) -> float:
    """What the human would still pay alone, with the robot's item set down."""
    return solo_cost(release_held(state, AgentId.ROBOT), goal, model)


def remaining_team(state: WorldState, goal: GoalSpec, model: CostModel) -> float:
    return 0.0 if goal_satisfied(state, goal) else joint_cost(state, goal, model)


def simulate_episode(
    problem: Problem,
    true_goal: GoalSpec,
    human_policy: HumanPolicy = adaptive_human,
    robot_policy: RobotPolicy | None = None,
    config: RiskConfig = RiskConfig(1.0),
    belief: Belief | None = None,
    step_cap: int | None = None,
) -> EpisodeTrace:
    """Run human and robot side by side until the dish is done or the robot errs.

    The robot sees every joint step and updates ``belief`` (defaults to
    certainty about ``true_goal``). A non-idle robot action that is not a best
    response for ``true_goal`` is a wrong commitment and marks the episode
    failed. If the two chosen actions clash, the robot yields and idles.
    """
    model = problem.cost_model
    start = problem.initial_state
    prior = belief or Belief.from_prior([true_goal])
    robot_policy = robot_policy or responsive_robot(0)
    solo0 = solo_cost(start, true_goal, model)
    best_team = remaining_team(start, true_goal, model)
    if step_cap is None:
        step_cap = FALLBACK_STEP_CAP if solo0 == INFINITE else max(1, STEP_CAP_FACTOR * int(math.ceil(solo0)))

    state, log, committed = start, ObservationLog(), None
    steps: list[JointStep] = []
    snapshots: list[MetricSnapshot] = []
    last_robot: PrimitiveAction | None = None
    engaged = failed = timed_out = False
    elapsed_cost = 0.0
    projected = solo0

    while not goal_satisfied(state, true_goal):
        if len(steps) >= step_cap:
            timed_out = True
            break
        ctx = StepContext(len(steps), last_robot, model, human_policy)
        current = goal_posterior(log, prior, start, model)
        robot_action, proposed = robot_policy(state, current, ctx, committed)
        human_action = human_policy(state, true_goal, last_robot, model)
        step = JointStep(human_action, robot_action)
        if joint_legal(state, step):
            committed = proposed
        else:
            step = JointStep(human_action, NOOP_R)
        wrong = not step.robot_action.is_noop and not consistent_with(
            state, step.robot_action, true_goal, human_action, model
        )
        log = log.record(len(steps), step)
        state = apply_joint(state, step)
        steps.append(step)
        elapsed_cost += model.step_cost(step)
        last_robot = step.robot_action
        engaged = engaged or not step.robot_action.is_noop
        failed = failed or wrong
        solo_left = remaining_solo(state, true_goal, model)
        team_left = remaining_team(state, true_goal, model)
        halted = failed and config.failure_policy is FailurePolicy.HALT_ON_FAILURE
        projected = elapsed_cost + (team_left if engaged and not halted else solo_left)
        rep = HelpfulnessReport.from_costs(solo0, projected, best_team, solo0)
        snapshots.append(MetricSnapshot(len(steps), solo_left, team_left, rep.H, rep.H_N, rep.H_R))
        if halted:
            break

    if timed_out:
        projected = elapsed_cost + remaining_solo(state, true_goal, model)
    elif not steps:
        projected = 0.0
    trace = JointPlan.build(steps, model, PlanProvenance.RESPONSIVE, failed)
    report = HelpfulnessReport.from_costs(solo0, projected, best_team, solo0)
    return EpisodeTrace(trace, tuple(snapshots), failed, true_goal, report, timed_out, committed, state)


@dataclass(frozen=True)
class TrialResult:
    delta: float
    trial: int
    true_goal: GoalSpec
    steps: int
    failed: bool
    report: HelpfulnessReport


@dataclass(frozen=True)
class SweepRow:
    delta: float
    mean_HR: float
    std_HR: float
    failure_rate: float


@dataclass(frozen=True)
class SweepTable:
    trials: tuple[TrialResult, ...]
    aggregate: tuple[SweepRow, ...]

    def write_trials(self, out: TextIO) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["delta", "trial", "true_goal", "steps", "failed", "H", "H_N", "H_R"])
        for t in self.trials:
            writer.writerow(
                [format_number(t.delta), t.trial, t.true_goal.dish_name, t.steps, str(t.failed).lower()]
                + [format_number(v) for v in (t.report.H, t.report.H_N, t.report.H_R)]
            )

    def write_aggregate(self, out: TextIO) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["delta", "mean_HR", "std_HR", "failure_rate"])
        for r in self.aggregate:
            writer.writerow([format_number(v) for v in (r.delta, r.mean_HR, r.std_HR, r.failure_rate)])


def delta_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid, rounded so that 0.1 steps print as 0.1, 0.2 and so on."""
    if step <= 0 or stop < start:
        raise ValueError("grid needs a positive step and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, 10) for i in range(count + 1)]


def risk_sweep(
    problem: Problem,
    goals: Sequence[GoalSpec],
    prior: Sequence[float] | None,
    deltas: Sequence[float],
    trials_per_delta: int,
    seed: int,
    beta: float = 1.0,
    observe_budget: int = 0,
    failure_policy: FailurePolicy = FailurePolicy.HALT_ON_FAILURE,
    human_policy: HumanPolicy = adaptive_human,
) -> SweepTable:
    """Simulate the risk-bounded robot for each bound and summarize H_R.

    Trial ``i`` draws its true goal from ``Random(seed + i)``, so every bound
    sees the same sequence of goals. Episodes are deterministic given the goal
    and bound, so repeats are served from a cache.
    """
    if trials_per_delta < 1:
        raise ValueError("trials_per_delta must be at least 1")
    belief = Belief.from_prior(goals, prior, beta)
    weights = [h.prior for h in belief.hypotheses]
    true_goals = [random.Random(seed + i).choices(belief.goals, weights)[0] for i in range(trials_per_delta)]
    cache: dict[tuple[GoalSpec, float], EpisodeTrace] = {}
    trials, aggregate = [], []
    for delta in deltas:
        config = RiskConfig(delta, failure_policy)
        robot = risk_bounded_robot(config, observe_budget)
        rows = []
        for i, goal in enumerate(true_goals):
            key = (goal, delta)
            if key not in cache:
                cache[key] = simulate_episode(problem, goal, human_policy, robot, config, belief)
            ep = cache[key]
            rows.append(TrialResult(delta, i, goal, ep.steps, ep.failed, ep.report))
        values = [r.report.H_R for r in rows]
        finite = all(isinstance(v, float) and math.isfinite(v) for v in values)
        mean = statistics.fmean(values) if finite else math.nan
        std = statistics.pstdev(values) if finite else math.nan
        aggregate.append(SweepRow(delta, mean, std, sum(r.failed for r in rows) / len(rows)))
        trials.extend(rows)
    return SweepTable(tuple(trials), tuple(aggregate))
