import pytest

from helpfulness.core import NEW_STACK, AgentId, JointStep, PrimitiveAction
from helpfulness.foodworld import (
    GoalSpec,
    IllegalAction,
    KitchenLayout,
    LayoutStyle,
    WorldState,
    apply_joint,
    apply_single,
    build_kitchen,
    goal_satisfied,
    is_legal,
    joint_legal,
    joint_successors,
    legal_actions,
    release_held,
)

H, R = AgentId.HUMAN, AgentId.ROBOT
pick, place, noop = PrimitiveAction.pick, PrimitiveAction.place, PrimitiveAction.noop


def test_canonical_stack_order():
    a = WorldState.from_stacks([["b"], ["a", "c"]])
    b = WorldState.from_stacks([["a", "c"], ["b"]])
    assert a == b and hash(a) == hash(b)
    assert a.stack("a") == ("a", "c")
    assert a.stack("c") is None


def test_state_rejects_duplicates_and_empty_stacks():
    with pytest.raises(ValueError):
        WorldState.from_stacks([["a"], ["a"]])
    with pytest.raises(ValueError):
        WorldState.from_stacks([["a"]], held_by_human="a")
    with pytest.raises(ValueError):
        WorldState.from_stacks([[]])


def test_goal_spec_size_and_uniqueness():
    GoalSpec("ok", ("a", "b", "c"))
    with pytest.raises(ValueError):
        GoalSpec("short", ("a", "b"))
    with pytest.raises(ValueError):
        GoalSpec("long", tuple("abcdef"))
    with pytest.raises(ValueError):
        GoalSpec("dup", ("a", "b", "a"))


def test_legal_actions_empty_hand():
    s = WorldState.from_stacks([["a", "b"], ["c"]])
    acts = legal_actions(s, H)
    assert acts[0].is_noop
    assert {(a.item, a.stack) for a in acts[1:]} == {("b", "a"), ("c", "c")}


def test_legal_actions_holding():
    s = WorldState.from_stacks([["a"], ["c"]], held_by_robot="b")
    targets = {a.stack for a in legal_actions(s, R) if not a.is_noop}
    assert targets == {"a", "c", NEW_STACK}


def test_pick_and_place_round_trip():
    s = WorldState.from_stacks([["a", "b"], ["c"]])
    s1 = apply_single(s, pick(H, "b", "a"))
    assert s1.held_by_human == "b" and s1.stack("a") == ("a",)
    s2 = apply_single(s1, place(H, "b", "c"))
    assert s2.stack("c") == ("c", "b") and s2.held_by_human is None
    s3 = apply_single(apply_single(s2, pick(H, "b", "c")), place(H, "b"))
    assert s3.stack("b") == ("b",)


def test_picking_a_singleton_removes_the_stack():
    s = apply_single(WorldState.from_stacks([["a"], ["c"]]), pick(R, "a", "a"))
    assert s.stacks == (("c",),) and s.held_by_robot == "a"


def test_illegal_actions():
    s = WorldState.from_stacks([["a", "b"]])
    assert not is_legal(s, pick(H, "a", "a"))
    with pytest.raises(IllegalAction):
        apply_single(s, pick(H, "a", "a"))
    with pytest.raises(IllegalAction):
        apply_single(s, place(H, "a", "a"))


def test_joint_steps_must_touch_disjoint_stacks():
    s = WorldState.from_stacks([["a", "b"], ["c"]], held_by_robot="d")
    same = JointStep(pick(H, "b", "a"), place(R, "d", "a"))
    assert not joint_legal(s, same)
    with pytest.raises(IllegalAction):
        apply_joint(s, same)
    ok = JointStep(pick(H, "b", "a"), place(R, "d", "c"))
    assert apply_joint(s, ok).stack("c") == ("c", "d")


def test_new_stack_placements_never_conflict():
    s = WorldState.from_stacks([["c"]], held_by_human="a", held_by_robot="b")
    nxt = apply_joint(s, JointStep(place(H, "a"), place(R, "b")))
    assert nxt.stacks == (("a",), ("b",), ("c",))


def test_joint_successors_skip_double_idle():
    s = WorldState.from_stacks([["a"], ["b"]])
    steps = [st for st, _ in joint_successors(s)]
    assert all(not (st.human_action.is_noop and st.robot_action.is_noop) for st in steps)
    assert len(joint_successors(s, skip_idle=False)) == len(steps) + 1
    # both agents picking the same stack is excluded
    assert not any(st.human_action.stack == st.robot_action.stack == "a" for st in steps)


def test_goal_is_an_exact_stack():
    g = GoalSpec("g", ("a", "b", "c"))
    assert goal_satisfied(WorldState.from_stacks([["a", "b", "c"]]), g)
    assert goal_satisfied(WorldState.from_stacks([["a", "b", "c"], ["d"]], held_by_human="e"), g)
    assert not goal_satisfied(WorldState.from_stacks([["a", "b", "c", "d"]]), g)
    assert not goal_satisfied(WorldState.from_stacks([["x", "a", "b", "c"]]), g)


def test_release_held():
    s = WorldState.from_stacks([["a"]], held_by_robot="b")
    assert release_held(s, R).stack("b") == ("b",)
    assert release_held(s, H) is s


def test_build_kitchen_styles():
    org = KitchenLayout("organized", LayoutStyle.ORGANIZED, (("a", "b"), ("c",)))
    assert build_kitchen(org).stack("a") == ("a", "b")
    with pytest.raises(ValueError):
        build_kitchen(KitchenLayout("o", LayoutStyle.ORGANIZED, (("a", "b"), ("c", "d"))))
    six = tuple((f"x{i}", f"y{i}") for i in range(6))
    build_kitchen(KitchenLayout("c", LayoutStyle.CLUTTERED, six))
    with pytest.raises(ValueError):
        build_kitchen(KitchenLayout("c", LayoutStyle.CLUTTERED, six[:5]))
    with pytest.raises(ValueError):
        build_kitchen(KitchenLayout("c", LayoutStyle.CLUTTERED, six[:5] + (("p", "q", "r", "s"),)))
    with pytest.raises(ValueError):
        build_kitchen(KitchenLayout("x", LayoutStyle.CUSTOM, ((),)))
