"""Line-oriented Foodworld domain files.

    # comment
    items: pan butter dough
    layout organized:
      stack: pan butter
      stack: dough
    dish toast: pan butter dough

Stacks and dishes list items bottom to top. The layout name picks its style:
``organized`` and ``cluttered`` are checked against their shape rules, any
other name is a custom layout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from helpfulness.foodworld import (
    MAX_DISH_SIZE,
    MIN_DISH_SIZE,
    GoalSpec,
    KitchenLayout,
    LayoutStyle,
    WorldState,
    build_kitchen,
)

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_TOKEN = re.compile(r"\S+")
INDENT = "  "


class DomainError(ValueError):
    pass


class DomainSyntaxError(DomainError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DomainSemanticError(DomainError):
    def __init__(self, message: str, identifier: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}: {identifier!r}")
        self.identifier = identifier
        self.line = line


@dataclass(frozen=True)
class DomainFile:
    items: tuple[str, ...]
    layouts: tuple[KitchenLayout, ...]
    dishes: tuple[GoalSpec, ...]

    def layout(self, name: str) -> KitchenLayout:
        for layout in self.layouts:
            if layout.name == name:
                return layout
        raise KeyError(f"no layout named {name!r}; have {', '.join(l.name for l in self.layouts)}")

    def dish(self, name: str) -> GoalSpec:
        for dish in self.dishes:
            if dish.dish_name == name:
                return dish
        raise KeyError(f"no dish named {name!r}; have {', '.join(d.dish_name for d in self.dishes)}")

    def kitchen(self, name: str) -> WorldState:
        return build_kitchen(self.layout(name))

    def serialize(self) -> str:
        return serialize(self)


def style_for(name: str) -> LayoutStyle:
    try:
        return LayoutStyle(name)
    except ValueError:
        return LayoutStyle.CUSTOM


def _tokens(text: str, start: int, lineno: int) -> list[tuple[str, int]]:
    out = []
    for m in _TOKEN.finditer(text):
        if not IDENT.fullmatch(m.group()):
            raise DomainSyntaxError(f"bad identifier {m.group()!r}", lineno, start + m.start() + 1)
        out.append((m.group(), start + m.start() + 1))
    return out


def _header(line: str, keyword: str, lineno: int) -> tuple[str, int]:
    """Name and rest-offset of ``<keyword> <name>:`` lines."""
    colon = line.find(":")
    if colon < 0:
        raise DomainSyntaxError(f"expected ':' after {keyword} name", lineno, len(line) + 1)
    name_part = line[len(keyword) : colon]
    names = _tokens(name_part, len(keyword), lineno)
    if len(names) != 1:
        col = names[1][1] if len(names) > 1 else colon + 1
        raise DomainSyntaxError(f"{keyword} needs exactly one name", lineno, col)
    return names[0][0], colon + 1


def parse_domain(text: str) -> DomainFile:
    items: list[str] | None = None
    item_line: dict[str, int] = {}
    layouts: list[tuple[str, list[list[tuple[str, int]]], int]] = []
    dishes: list[tuple[str, list[tuple[str, int]], int]] = []
    current: list | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if "\t" in line:
            raise DomainSyntaxError("tabs are not allowed", lineno, line.index("\t") + 1)
        indented = line[0] == " "
        body = line.lstrip(" ")
        offset = len(line) - len(body)
        if indented:
            if current is None:
                raise DomainSyntaxError("indented line outside a layout", lineno, offset + 1)
            if not body.startswith("stack:"):
                raise DomainSyntaxError(f"expected 'stack:' inside a layout", lineno, offset + 1)
            stack = _tokens(body[len("stack:") :], offset + len("stack:"), lineno)
            if not stack:
                raise DomainSyntaxError("empty stack", lineno, len(line) + 1)
            current.append(stack)
            continue
        current = None
        if body.startswith("items:"):
            if items is not None:
                raise DomainSyntaxError("items declared twice", lineno, 1)
            items = []
            for name, col in _tokens(body[len("items:") :], len("items:"), lineno):
                if name in item_line:
                    raise DomainSemanticError("item declared twice", name, lineno)
                item_line[name] = lineno
                items.append(name)
        elif body.startswith("layout "):
            name, rest = _header(body, "layout", lineno)
            if body[rest:].strip():
                raise DomainSyntaxError("nothing may follow 'layout <name>:'", lineno, rest + 1)
            current = []
            layouts.append((name, current, lineno))
        elif body.startswith("dish "):
            name, rest = _header(body, "dish", lineno)
            dishes.append((name, _tokens(body[rest:], rest, lineno), lineno))
        else:
            word = (body.split(":", 1)[0].split() or [body])[0]
            raise DomainSyntaxError(f"unknown directive {word!r}", lineno, 1)
    return _resolve(items or [], layouts, dishes)


def _resolve(items, layouts, dishes) -> DomainFile:
    declared = set(items)

    def check(name: str, lineno: int) -> str:
        if name not in declared:
            raise DomainSemanticError("unknown item", name, lineno)
        return name

    built_layouts = []
    seen_layouts: set[str] = set()
    for name, stacks, lineno in layouts:
        if name in seen_layouts:
            raise DomainSemanticError("layout defined twice", name, lineno)
        seen_layouts.add(name)
        if not stacks:
            raise DomainSemanticError("layout has no stacks", name, lineno)
        used: set[str] = set()
        for stack in stacks:
            for item, _ in stack:
                check(item, lineno)
                if item in used:
                    raise DomainSemanticError("item appears twice in layout", item, lineno)
                used.add(item)
        layout = KitchenLayout(name, style_for(name), tuple(tuple(i for i, _ in s) for s in stacks))
        try:
            build_kitchen(layout)
        except ValueError as exc:
            raise DomainSemanticError(str(exc), name, lineno) from None
        built_layouts.append(layout)

    built_dishes = []
    seen_dishes: set[str] = set()
    for name, tokens, lineno in dishes:
        if name in seen_dishes:
            raise DomainSemanticError("dish defined twice", name, lineno)
        seen_dishes.add(name)
        stack = tuple(check(item, lineno) for item, _ in tokens)
        if not MIN_DISH_SIZE <= len(stack) <= MAX_DISH_SIZE:
            raise DomainSemanticError(
                f"dish needs {MIN_DISH_SIZE}-{MAX_DISH_SIZE} items, got {len(stack)}", name, lineno
            )
        if len(set(stack)) != len(stack):
            raise DomainSemanticError("dish repeats an item", name, lineno)
        built_dishes.append(GoalSpec(name, stack))
    return DomainFile(tuple(items), tuple(built_layouts), tuple(built_dishes))


def serialize(domain: DomainFile) -> str:
    lines = ["items: " + " ".join(domain.items)]
    for layout in domain.layouts:
        lines.append("")
        lines.append(f"layout {layout.name}:")
        lines.extend(INDENT + "stack: " + " ".join(s) for s in layout.stacks)
    if domain.dishes:
        lines.append("")
    lines.extend(f"dish {d.dish_name}: " + " ".join(d.required_stack) for d in domain.dishes)
    return "\n".join(lines) + "\n"


def default_domain_text() -> str:
    return resources.files("helpfulness.data").joinpath("foodworld.dom").read_text()


def load_domain(path: str | None = None) -> DomainFile:
    """Parse ``path``, or the bundled Foodworld domain when None."""
    if path is None:
        return parse_domain(default_domain_text())
    with open(path, encoding="utf-8") as fh:
        return parse_domain(fh.read())
