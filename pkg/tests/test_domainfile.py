import random
from pathlib import Path

import pytest

from helpfulness.domainfile import (
    DomainFile,
    DomainSemanticError,
    DomainSyntaxError,
    load_domain,
    parse_domain,
)
from helpfulness.foodworld import GoalSpec, KitchenLayout, LayoutStyle

INVALID = Path(__file__).parent / "fixtures" / "invalid"

EXPECTED_ERRORS = {
    "bad_identifier.dom": (DomainSyntaxError, 1),
    "cluttered_wrong_count.dom": (DomainSemanticError, 2),
    "dish_too_small.dom": (DomainSemanticError, 2),
    "duplicate_dish.dom": (DomainSemanticError, 3),
    "duplicate_item.dom": (DomainSemanticError, 1),
    "item_twice_in_layout.dom": (DomainSemanticError, 2),
    "missing_colon.dom": (DomainSyntaxError, 2),
    "organized_two_towers.dom": (DomainSemanticError, 2),
    "stack_outside_layout.dom": (DomainSyntaxError, 2),
    "tab_indent.dom": (DomainSyntaxError, 3),
    "unknown_directive.dom": (DomainSyntaxError, 2),
    "unknown_item.dom": (DomainSemanticError, 2),
}


def test_shipped_domain():
    d = load_domain()
    assert len(d.items) == 12
    assert [l.name for l in d.layouts] == ["organized", "cluttered"]
    assert {l.style for l in d.layouts} == {LayoutStyle.ORGANIZED, LayoutStyle.CLUTTERED}
    assert [g.dish_name for g in d.dishes] == [
        "sugar-cookie", "blueberry-pie", "fudge", "jelly-donut", "choco-chip-cookie", "cake",
    ]
    assert d.dish("blueberry-pie").required_stack == ("pan", "butter", "dough", "blueberries", "sugar")
    assert ("pan", "butter", "blueberries", "tray") in d.kitchen("organized").stacks


def test_shipped_domain_round_trips():
    d = load_domain()
    assert parse_domain(d.serialize()) == d


def test_lookup_errors():
    d = load_domain()
    with pytest.raises(KeyError):
        d.dish("lasagne")
    with pytest.raises(KeyError):
        d.layout("messy")


def test_comments_and_blank_lines():
    text = "# hi\n\nitems: a b c  # trailing\nlayout shelf:\n  stack: a b\n\n  stack: c\ndish abc: a b c\n"
    d = parse_domain(text)
    assert d.layout("shelf").style is LayoutStyle.CUSTOM
    assert d.layout("shelf").stacks == (("a", "b"), ("c",))
    assert d.dish("abc") == GoalSpec("abc", ("a", "b", "c"))


def random_domain(rng: random.Random) -> DomainFile:
    items = [f"i{k}" for k in range(rng.randint(3, 9))]
    layouts = []
    for n in range(rng.randint(0, 3)):
        pool = items[:]
        rng.shuffle(pool)
        pool = pool[: rng.randint(1, len(pool))]
        stacks, i = [], 0
        while i < len(pool):
            k = rng.randint(1, 3)
            stacks.append(tuple(pool[i : i + k]))
            i += k
        layouts.append(KitchenLayout(f"shelf-{n}", LayoutStyle.CUSTOM, tuple(stacks)))
    dishes = tuple(
        GoalSpec(f"dish_{n}", tuple(rng.sample(items, rng.randint(3, min(5, len(items))))))
        for n in range(rng.randint(0, 4))
    )
    return DomainFile(tuple(items), tuple(layouts), dishes)


def test_random_domains_round_trip():
    rng = random.Random(11)
    for _ in range(50):
        d = random_domain(rng)
        text = d.serialize()
        assert parse_domain(text) == d
        assert parse_domain(text).serialize() == text


@pytest.mark.parametrize("name", sorted(EXPECTED_ERRORS))
def test_invalid_fixture(name):
    error, line = EXPECTED_ERRORS[name]
    with pytest.raises(error) as info:
        load_domain(str(INVALID / name))
    assert info.value.line == line


def test_every_fixture_is_listed():
    assert sorted(p.name for p in INVALID.glob("*.dom")) == sorted(EXPECTED_ERRORS)


def test_syntax_error_reports_column():
    with pytest.raises(DomainSyntaxError) as info:
        parse_domain("items: a b c$\n")
    assert info.value.column == 12


def test_semantic_error_names_identifier():
    with pytest.raises(DomainSemanticError) as info:
        parse_domain("items: a b c\ndish foo: a b zz\n")
    assert info.value.identifier == "zz"
