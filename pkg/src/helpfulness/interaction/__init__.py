"""Goal recognition, responsive and risk-bounded robots, and episode simulation."""

from helpfulness.interaction.policies import (
    CommittedHuman,
    FailurePolicy,
    RiskConfig,
    StepContext,
    action_risk,
    adaptive_human,
    best_responses,
    consistent_with,
    responsive_step,
    risk_bounded_step,
    solo_human,
)
from helpfulness.interaction.recognition import (
    Belief,
    GoalHypothesis,
    ObservationLog,
    RecognitionError,
    goal_posterior,
)
from helpfulness.interaction.simulate import (
    EpisodeTrace,
    MetricSnapshot,
    SweepTable,
    delta_grid,
    idle_robot,
    responsive_robot,
    risk_bounded_robot,
    risk_sweep,
    simulate_episode,
)

__all__ = [
    "Belief",
    "CommittedHuman",
    "EpisodeTrace",
    "FailurePolicy",
    "GoalHypothesis",
    "MetricSnapshot",
    "ObservationLog",
    "RecognitionError",
    "RiskConfig",
    "StepContext",
    "SweepTable",
    "action_risk",
    "adaptive_human",
    "best_responses",
    "consistent_with",
    "delta_grid",
    "goal_posterior",
    "idle_robot",
    "responsive_robot",
    "responsive_step",
    "risk_bounded_robot",
    "risk_bounded_step",
    "risk_sweep",
    "simulate_episode",
    "solo_human",
]
