"""Helpfulness metrics and planners for two-agent human-robot collaboration."""

from helpfulness.core import (
    INFINITE,
    UNDEFINED,
    AgentId,
    ActionKind,
    CostModel,
    CostMode,
    JointPlan,
    JointStep,
    Plan,
    PlanProvenance,
    PrimitiveAction,
    Problem,
    UndefinedHelpfulness,
    cost_of_plan,
    signed_difference,
)
from helpfulness.foodworld import GoalSpec, KitchenLayout, LayoutStyle, WorldState
from helpfulness.metrics import HelpfulnessReport, report

__all__ = [
    "INFINITE",
    "UNDEFINED",
    "AgentId",
    "ActionKind",
    "CostModel",
    "CostMode",
    "GoalSpec",
    "HelpfulnessReport",
    "JointPlan",
    "JointStep",
    "KitchenLayout",
    "LayoutStyle",
    "Plan",
    "PlanProvenance",
    "PrimitiveAction",
    "Problem",
    "UndefinedHelpfulness",
    "WorldState",
    "cost_of_plan",
    "report",
    "signed_difference",
]
