import math
import pickle

import pytest

from helpfulness.core import (
    INFINITE,
    NEW_STACK,
    UNDEFINED,
    ActionKind,
    AgentId,
    CostMode,
    CostModel,
    JointPlan,
    JointStep,
    Plan,
    PlanProvenance,
    PrimitiveAction,
    UndefinedHelpfulness,
    cost_of_plan,
    signed_difference,
)

H, R = AgentId.HUMAN, AgentId.ROBOT


def test_agent_other():
    assert H.other is R and R.other is H


def test_action_factories():
    a = PrimitiveAction.pick(H, "pan", "pan")
    assert a.kind is ActionKind.PICK and not a.is_noop
    assert PrimitiveAction.place(R, "pan").stack == NEW_STACK
    assert PrimitiveAction.noop(R).is_noop


def test_joint_step_checks_actors():
    with pytest.raises(ValueError):
        JointStep(PrimitiveAction.noop(R), PrimitiveAction.noop(R))
    step = JointStep(PrimitiveAction.noop(H), PrimitiveAction.pick(R, "a", "a"))
    assert step.action_of(R).item == "a"


def test_step_count_model():
    m = CostModel()
    step = JointStep(PrimitiveAction.noop(H), PrimitiveAction.noop(R))
    assert m.step_cost(step) == 1.0
    assert m.action_cost(PrimitiveAction.pick(H, "a", "a")) == 1.0


def test_weighted_model_sums_both_agents():
    m = CostModel.weighted(pick=2.0, place=3.0, noop=0.5)
    step = JointStep(PrimitiveAction.pick(H, "a", "a"), PrimitiveAction.noop(R))
    assert m.step_cost(step) == 2.5
    assert m.min_action_cost() == 2.0


def test_human_only_model_ignores_robot():
    m = CostModel.human_only(pick=1.0, place=1.0, noop=0.0)
    step = JointStep(PrimitiveAction.noop(H), PrimitiveAction.pick(R, "a", "a"))
    assert m.step_cost(step) == 0.0
    assert m.action_cost(PrimitiveAction.pick(R, "a", "a")) == 0.0


def test_cost_model_rejects_bad_weights():
    with pytest.raises(ValueError):
        CostModel(CostMode.WEIGHTED_ACTIONS, {"jump": 1.0})
    with pytest.raises(ValueError):
        CostModel.weighted(pick=-1.0)
    with pytest.raises(ValueError):
        CostModel(CostMode.WEIGHTED_ACTIONS, {"pick": 1.0}).weight(ActionKind.PLACE)


def test_scaled_model():
    m = CostModel.weighted(2.0, 4.0, 1.0).scaled(0.5)
    assert m.weight(ActionKind.PICK) == 1.0 and m.noop_weight == 0.5
    with pytest.raises(ValueError):
        CostModel().scaled(2.0)


def test_plan_build_and_no_solution():
    steps = [PrimitiveAction.pick(H, "a", "a"), PrimitiveAction.place(H, "a", "b")]
    plan = Plan.build(H, steps, CostModel())
    assert plan.total_cost == 2.0 and len(plan) == 2 and plan.solved
    plan.check_cost(CostModel())
    assert not Plan.no_solution(H).solved
    with pytest.raises(ValueError):
        Plan(R, tuple(steps), 2.0)
    with pytest.raises(ValueError):
        Plan(H, tuple(steps), INFINITE)


def test_joint_plan_rules():
    with pytest.raises(ValueError):
        JointPlan((), 0.0, PlanProvenance.SOLO)
    idle = JointStep(PrimitiveAction.noop(H), PrimitiveAction.noop(R))
    plan = JointPlan.build([idle, idle], CostModel.weighted(noop=0.25))
    assert plan.total_cost == 1.0
    assert plan.robot_only_noops()
    with pytest.raises(ValueError):
        JointPlan(plan.steps, 5.0).check_cost(CostModel.weighted(noop=0.25))
    assert cost_of_plan(JointPlan.no_solution(), CostModel()) == 0.0


def test_signed_difference():
    assert signed_difference(10, 6) == 4
    assert signed_difference(INFINITE, 3) == INFINITE
    assert signed_difference(3, INFINITE) == -INFINITE
    with pytest.raises(UndefinedHelpfulness):
        signed_difference(INFINITE, INFINITE)
    with pytest.raises(ValueError):
        signed_difference(-1, 0)
    with pytest.raises(ValueError):
        signed_difference(math.nan, 0)


def test_undefined_is_a_singleton():
    assert pickle.loads(pickle.dumps(UNDEFINED)) is UNDEFINED
    assert repr(UNDEFINED) == "UNDEFINED"
