import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpfulness.core import INFINITE, UNDEFINED, CostModel, JointPlan, Problem, UndefinedHelpfulness
from helpfulness.metrics import (
    ExpectedHelpfulness,
    HelpfulnessReport,
    PlanDistribution,
    PlanOutcome,
    expected_helpfulness,
    expected_value,
    format_number,
    helpfulness,
    normalized_helpfulness,
    relative_helpfulness,
    report,
)
from helpfulness.planner import plan_joint

from conftest import PIE

costs = st.integers(0, 50).map(float)


def test_basic_values():
    assert helpfulness(10, 6) == 4
    assert normalized_helpfulness(4, 10, 6) == 1
    assert relative_helpfulness(10, 6) == 0.4


def test_infinities():
    assert helpfulness(INFINITE, 5) == INFINITE
    assert helpfulness(5, INFINITE) == -INFINITE
    assert helpfulness(INFINITE, INFINITE) is UNDEFINED
    assert relative_helpfulness(10, INFINITE) == -INFINITE
    assert relative_helpfulness(INFINITE, 3) is UNDEFINED


def test_relative_edges():
    assert relative_helpfulness(10, 0) == 1.0
    assert relative_helpfulness(0, 0) is UNDEFINED
    assert relative_helpfulness(4, 8) == -1.0


def test_normalized_undefined_without_room_to_help():
    assert normalized_helpfulness(0, 6, 6) is UNDEFINED
    assert normalized_helpfulness(UNDEFINED, 6, 4) is UNDEFINED
    assert normalized_helpfulness(2, INFINITE, 4) is UNDEFINED


def test_normalized_is_not_clamped():
    assert normalized_helpfulness(-2, 10, 6) == -0.5


@given(costs, costs, costs)
def test_identities(solo, team, best):
    best = min(best, team)
    rep = HelpfulnessReport.from_costs(solo, team, best)
    assert rep.H == solo - team
    if solo > 0:
        assert rep.H_R == pytest.approx((solo - team) / solo)
    if solo > best:
        assert rep.H_N == pytest.approx((solo - team) / (solo - best))
        assert rep.H_N <= 1 + 1e-12


def test_report_on_optimal_pie(organized):
    problem = Problem(organized, PIE)
    rep = report(problem, plan_joint(problem))
    assert (rep.cost_solo, rep.cost_team, rep.H, rep.H_N, rep.H_R) == (10, 6, 4, 1, 0.4)
    override = report(problem, plan_joint(problem), cost_team=8)
    assert override.H == 2 and override.H_N == 0.5


def test_format_number():
    assert format_number(6.0) == "6"
    assert format_number(0.4) == "0.4"
    assert format_number(1 / 3) == repr(1 / 3)
    assert format_number(1 / 3, 3) == "0.333"
    assert format_number(3 / 7, 3) == "0.429"
    assert format_number(INFINITE) == "inf"
    assert format_number(-INFINITE) == "-inf"
    assert format_number(UNDEFINED) == "undefined"


def _outcome(cost, p, solo=10):
    return PlanOutcome(JointPlan((), cost), p, solo)


def test_expected_helpfulness():
    dist = PlanDistribution((_outcome(6, 0.5), _outcome(8, 0.5)))
    e = expected_helpfulness(dist)
    assert e.mean == pytest.approx(0.3)
    assert e.std == pytest.approx(0.1)


def test_expected_with_infinite_plan():
    dist = PlanDistribution((_outcome(6, 0.5), _outcome(INFINITE, 0.5)))
    e = expected_helpfulness(dist)
    assert e.mean == -INFINITE and math.isnan(e.std)


def test_expected_rejects_undefined():
    with pytest.raises(UndefinedHelpfulness):
        expected_value([0.5, UNDEFINED], [0.5, 0.5])


def test_distribution_must_sum_to_one():
    with pytest.raises(ValueError):
        PlanDistribution((_outcome(6, 0.5),))
    with pytest.raises(ValueError):
        PlanDistribution((_outcome(6, 1.5), _outcome(6, -0.5)))


def test_outcome_cost_override():
    assert _outcome(6, 1.0).relative == 0.4
    assert PlanOutcome(JointPlan((), 6), 1.0, 10, cost_team=9).relative == pytest.approx(0.1)
    assert ExpectedHelpfulness(0.1, 0.0).mean == 0.1
