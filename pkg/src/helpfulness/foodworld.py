"""Foodworld: a two-handed Blocksworld where stacking items assembles dishes.

States are canonical: stacks are kept sorted, so two states that differ only
in where stacks stand on the table compare equal. A stack is named by its
bottom item.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from helpfulness.core import NEW_STACK, ActionKind, AgentId, JointStep, PrimitiveAction

MIN_DISH_SIZE = 3
MAX_DISH_SIZE = 5
_AGENTS = (AgentId.HUMAN, AgentId.ROBOT)


class IllegalAction(ValueError):
    """An action or joint step was applied where it is not legal."""


@dataclass(frozen=True)
class WorldState:
    """Stacks bottom-to-top plus what each agent holds."""

    stacks: tuple[tuple[str, ...], ...]
    held_by_human: str | None = None
    held_by_robot: str | None = None

    def __post_init__(self):
        stacks = tuple(sorted(tuple(s) for s in self.stacks))
        if any(not s for s in stacks):
            raise ValueError("stacks may not be empty")
        object.__setattr__(self, "stacks", stacks)
        seen: set[str] = set()
        for item in self._all_items():
            if item in seen:
                raise ValueError(f"item {item!r} appears more than once")
            seen.add(item)

    @classmethod
    def from_stacks(cls, stacks: Iterable[Sequence[str]], **held: str | None) -> "WorldState":
        return cls(tuple(tuple(s) for s in stacks), **held)

    def _all_items(self) -> Iterable[str]:
        for stack in self.stacks:
            yield from stack
        for item in (self.held_by_human, self.held_by_robot):
            if item is not None:
                yield item

    def items(self) -> set[str]:
        return set(self._all_items())

    def held(self, agent: AgentId) -> str | None:
        return self.held_by_human if agent is AgentId.HUMAN else self.held_by_robot

    def stack(self, name: str) -> tuple[str, ...] | None:
        for s in self.stacks:
            if s[0] == name:
                return s
        return None

    def sort_key(self) -> tuple:
        return (self.stacks, self.held_by_human or "", self.held_by_robot or "")

    @classmethod
    def _trusted(cls, stacks: list[tuple[str, ...]], human: str | None, robot: str | None) -> "WorldState":
        # Successor states are valid by construction; skip the item checks.
        state = object.__new__(cls)
        object.__setattr__(state, "stacks", tuple(sorted(stacks)))
        object.__setattr__(state, "held_by_human", human)
        object.__setattr__(state, "held_by_robot", robot)
        return state

    def _with(self, stacks: list[tuple[str, ...]], agent: AgentId, held: str | None) -> "WorldState":
        if agent is AgentId.HUMAN:
            return WorldState._trusted(stacks, held, self.held_by_robot)
        return WorldState._trusted(stacks, self.held_by_human, held)

    def __str__(self) -> str:
        body = " ".join("[" + " ".join(s) + "]" for s in self.stacks)
        return f"{body} H:{self.held_by_human or '-'} R:{self.held_by_robot or '-'}"


@dataclass(frozen=True)
class GoalSpec:
    dish_name: str
    required_stack: tuple[str, ...]

    def __post_init__(self):
        stack = tuple(self.required_stack)
        object.__setattr__(self, "required_stack", stack)
        if not MIN_DISH_SIZE <= len(stack) <= MAX_DISH_SIZE:
            raise ValueError(
                f"dish {self.dish_name!r} needs {MIN_DISH_SIZE}-{MAX_DISH_SIZE} items, got {len(stack)}"
            )
        if len(set(stack)) != len(stack):
            raise ValueError(f"dish {self.dish_name!r} repeats an item")

    def __str__(self) -> str:
        return self.dish_name


class LayoutStyle(enum.Enum):
    ORGANIZED = "organized"
    CLUTTERED = "cluttered"
    CUSTOM = "custom"


CLUTTERED_STACKS = 6
CLUTTERED_MAX_HEIGHT = 3


@dataclass(frozen=True)
class KitchenLayout:
    name: str
    style: LayoutStyle
    stacks: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "stacks", tuple(tuple(s) for s in self.stacks))


def build_kitchen(layout: KitchenLayout) -> WorldState:
    """Validate a layout against its style and turn it into a state."""
    if any(not s for s in layout.stacks):
        raise ValueError(f"layout {layout.name!r} has an empty stack")
    if layout.style is LayoutStyle.ORGANIZED:
        tall = [s for s in layout.stacks if len(s) > 1]
        if len(tall) > 1:
            raise ValueError(
                f"organized layout {layout.name!r} has {len(tall)} multi-item stacks; at most 1 allowed"
            )
    elif layout.style is LayoutStyle.CLUTTERED:
        if len(layout.stacks) != CLUTTERED_STACKS:
            raise ValueError(
                f"cluttered layout {layout.name!r} needs {CLUTTERED_STACKS} stacks, got {len(layout.stacks)}"
            )
        if any(len(s) > CLUTTERED_MAX_HEIGHT for s in layout.stacks):
            raise ValueError(
                f"cluttered layout {layout.name!r} has a stack taller than {CLUTTERED_MAX_HEIGHT}"
            )
    return WorldState.from_stacks(layout.stacks)


def legal_actions(state: WorldState, agent: AgentId) -> list[PrimitiveAction]:
    """Every action ``agent`` may take in ``state``, in a deterministic order."""
    held = state.held(agent)
    actions = [PrimitiveAction.noop(agent)]
    if held is None:
        actions.extend(PrimitiveAction.pick(agent, s[-1], s[0]) for s in state.stacks)
    else:
        actions.extend(PrimitiveAction.place(agent, held, s[0]) for s in state.stacks)
        actions.append(PrimitiveAction.place(agent, held, NEW_STACK))
    return actions


def is_legal(state: WorldState, action: PrimitiveAction) -> bool:
    if action.is_noop:
        return True
    held = state.held(action.actor)
    if action.kind is ActionKind.PICK:
        stack = state.stack(action.stack)
        return held is None and stack is not None and stack[-1] == action.item
    if held != action.item:
        return False
    return action.stack == NEW_STACK or state.stack(action.stack) is not None


def apply_single(state: WorldState, action: PrimitiveAction) -> WorldState:
    if not is_legal(state, action):
        raise IllegalAction(f"{action.actor.value} cannot {action} in {state}")
    if action.is_noop:
        return state
    stacks = list(state.stacks)
    if action.kind is ActionKind.PICK:
        i = next(k for k, s in enumerate(stacks) if s[0] == action.stack)
        rest = stacks[i][:-1]
        if rest:
            stacks[i] = rest
        else:
            del stacks[i]
        return state._with(stacks, action.actor, action.item)
    if action.stack == NEW_STACK:
        stacks.append((action.item,))
    else:
        i = next(k for k, s in enumerate(stacks) if s[0] == action.stack)
        stacks[i] = stacks[i] + (action.item,)
    return state._with(stacks, action.actor, None)


def _touched_stack(action: PrimitiveAction) -> str | None:
    if action.is_noop or action.stack == NEW_STACK:
        return None
    return action.stack


def joint_legal(state: WorldState, step: JointStep) -> bool:
    """Both actions legal in the start-of-step state and on disjoint stacks."""
    h, r = step.human_action, step.robot_action
    if not (is_legal(state, h) and is_legal(state, r)):
        return False
    touched_h, touched_r = _touched_stack(h), _touched_stack(r)
    return touched_h is None or touched_h != touched_r


def apply_joint(state: WorldState, step: JointStep) -> WorldState:
    if not joint_legal(state, step):
        raise IllegalAction(f"conflicting joint step {step} in {state}")
    return apply_single(apply_single(state, step.human_action), step.robot_action)


def joint_successors(state: WorldState, skip_idle: bool = True) -> list[tuple[JointStep, WorldState]]:
    """All legal joint steps from ``state`` with their results."""
    out = []
    human_actions = legal_actions(state, AgentId.HUMAN)
    robot_actions = legal_actions(state, AgentId.ROBOT)
    for h in human_actions:
        for r in robot_actions:
            if skip_idle and h.is_noop and r.is_noop:
                continue
            step = JointStep(h, r)
            if joint_legal(state, step):
                out.append((step, apply_single(apply_single(state, h), r)))
    return out


def goal_satisfied(state: WorldState, goal: GoalSpec) -> bool:
    return goal.required_stack in state.stacks


def release_held(state: WorldState, agent: AgentId) -> WorldState:
    """Put whatever ``agent`` holds down on free table space."""
    item = state.held(agent)
    if item is None:
        return state
    return apply_single(state, PrimitiveAction.place(agent, item, NEW_STACK))
