"""Shared fixtures: the classic worked examples and small random-table helpers."""

from __future__ import annotations

import itertools
import random

import pytest

from rough_reduce.table import DecisionTable, Partition


def seven_rule_table() -> DecisionTable:
    """The textbook seven-rule table over attributes a, b, c with decision d."""
    return DecisionTable.from_rows(
        ("a", "b", "c"),
        "d",
        {
            1: (1, 0, 1, 1),
            2: (1, 0, 0, 1),
            3: (0, 0, 0, 0),
            4: (1, 1, 1, 0),
            5: (1, 1, 2, 2),
            6: (2, 1, 2, 2),
            7: (2, 2, 2, 2),
        },
    )


def eight_object_partition() -> Partition:
    """Four equivalence classes over objects 1..8."""
    return Partition.from_blocks([{1, 4, 8}, {2, 5, 7}, {3}, {6}])


@pytest.fixture
def table7() -> DecisionTable:
    return seven_rule_table()


@pytest.fixture
def partition8() -> Partition:
    return eight_object_partition()


def random_table(rng: random.Random, max_rules: int = 8, max_attrs: int = 4) -> DecisionTable:
    """A small random decision table with values in {0, 1, 2}."""
    n_rules = rng.randint(1, max_rules)
    n_attrs = rng.randint(1, max_attrs)
    attrs = tuple(f"a{j}" for j in range(n_attrs))
    rows = [
        tuple(rng.randint(0, 2) for _ in range(n_attrs + 1)) for _ in range(n_rules)
    ]
    return DecisionTable.from_rows(attrs, "d", rows)


def brute_force_reducts(table: DecisionTable) -> list[frozenset[str]]:
    """Independent oracle: scan every attribute subset by definition.

    Collects subsets whose positive region equals the full set's, then keeps
    only those with no qualifying proper subset.
    """
    from rough_reduce.rough import positive_region

    target = positive_region(table, table.attrs)
    qualifying = [
        frozenset(combo)
        for size in range(len(table.attrs) + 1)
        for combo in itertools.combinations(table.attrs, size)
        if positive_region(table, combo) == target
    ]
    return [
        s for s in qualifying if not any(o < s for o in qualifying)
    ]
