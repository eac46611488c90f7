"""Rough-set operations against the worked examples and random-table oracles."""

from __future__ import annotations

import random

import pytest

from conftest import brute_force_reducts, random_table

from rough_reduce.rough import (
    EXHAUSTIVE_LIMIT,
    ExhaustiveSearchLimitError,
    InconsistentTableError,
    boundary,
    core,
    core_values,
    dependency_degree,
    greedy_reduct,
    is_dispensable,
    lower_approx,
    minimize_table,
    minimum_reduct,
    partition_by,
    positive_region,
    relative_reducts,
    upper_approx,
    value_reducts,
)
from rough_reduce.table import DecisionTable, Partition, ReducedRule


class TestPartitionBy:
    def test_single_attribute_a(self, table7):
        p = partition_by(table7, {"a"})
        assert p.as_set_of_sets() == {
            frozenset({1, 2, 4, 5}),
            frozenset({3}),
            frozenset({6, 7}),
        }

    def test_single_attribute_b(self, table7):
        p = partition_by(table7, {"b"})
        assert p.block_of(1) == frozenset({1, 2, 3})

    def test_empty_attrs_is_single_block(self, table7):
        p = partition_by(table7, set())
        assert p.blocks == (frozenset({1, 2, 3, 4, 5, 6, 7}),)

    def test_decision_attribute_allowed(self, table7):
        p = partition_by(table7, {"d"})
        assert p.as_set_of_sets() == {
            frozenset({1, 2}),
            frozenset({3, 4}),
            frozenset({5, 6, 7}),
        }

    def test_unknown_attribute_named_in_error(self, table7):
        with pytest.raises(KeyError, match="z"):
            partition_by(table7, {"z"})

    def test_refinement_is_monotone(self):
        rng = random.Random(7)
        for _ in range(50):
            t = random_table(rng)
            attrs = list(t.attrs)
            small = set(rng.sample(attrs, rng.randint(0, len(attrs))))
            big = small | set(rng.sample(attrs, rng.randint(0, len(attrs))))
            coarse = partition_by(t, small)
            fine = partition_by(t, big)
            for block in fine.blocks:
                assert any(block <= c for c in coarse.blocks)


class TestApproximations:
    def test_lower(self, partition8):
        assert lower_approx(partition8, {3, 6, 8}) == frozenset({3, 6})

    def test_upper(self, partition8):
        assert upper_approx(partition8, {3, 6, 8}) == frozenset({1, 3, 4, 6, 8})

    def test_boundary(self, partition8):
        assert boundary(partition8, {3, 6, 8}) == frozenset({1, 4, 8})

    def test_full_universe(self, partition8):
        u = partition8.universe
        assert lower_approx(partition8, u) == u
        assert upper_approx(partition8, u) == u

    def test_empty_set(self, partition8):
        assert lower_approx(partition8, set()) == frozenset()
        assert upper_approx(partition8, set()) == frozenset()
        assert boundary(partition8, set()) == frozenset()

    def test_crisp_union_of_blocks(self, partition8):
        crisp = {1, 4, 8, 3}
        assert boundary(partition8, crisp) == frozenset()

    def test_singleton_universe(self):
        p = Partition.from_blocks([{0}])
        assert boundary(p, {0}) == frozenset()

    def test_member_outside_universe_rejected(self, partition8):
        with pytest.raises(ValueError, match="99"):
            lower_approx(partition8, {99})
        with pytest.raises(ValueError):
            upper_approx(partition8, {1, 42})

    def test_sandwich_property(self):
        rng = random.Random(11)
        for _ in range(100):
            t = random_table(rng)
            p = partition_by(t, set(rng.sample(t.attrs, rng.randint(0, len(t.attrs)))))
            x = frozenset(rng.sample(t.rules, rng.randint(0, len(t.rules))))
            lo, hi = lower_approx(p, x), upper_approx(p, x)
            assert lo <= x <= hi
            assert boundary(p, x) == hi - lo


class TestPositiveRegionAndDependency:
    def test_full_attrs_cover_everything(self, table7):
        assert positive_region(table7, {"a", "b", "c"}) == frozenset(range(1, 8))
        assert dependency_degree(table7, {"a", "b", "c"}) == 1.0

    def test_single_attribute(self, table7):
        assert positive_region(table7, {"a"}) == frozenset({3, 6, 7})
        assert dependency_degree(table7, {"a"}) == pytest.approx(3 / 7)

    def test_constant_decision(self):
        t = DecisionTable.from_rows(("a",), "d", [(0, 1), (1, 1), (2, 1)])
        assert positive_region(t, set()) == t.universe
        assert positive_region(t, {"a"}) == t.universe

    def test_empty_attrs_with_two_decisions(self, table7):
        assert dependency_degree(table7, set()) == 0.0

    def test_monotone_in_attribute_set(self):
        rng = random.Random(13)
        for _ in range(80):
            t = random_table(rng)
            attrs = list(t.attrs)
            small = set(rng.sample(attrs, rng.randint(0, len(attrs))))
            big = small | set(rng.sample(attrs, rng.randint(0, len(attrs))))
            assert dependency_degree(t, big) >= dependency_degree(t, small)


class TestDispensability:
    def test_in_seven_rule_table_nothing_is_dispensable(self, table7):
        for a in ("a", "b", "c"):
            assert not is_dispensable(table7, {"a", "b", "c"}, a)

    def test_sole_discerning_attribute(self):
        t = DecisionTable.from_rows(("a",), "d", [(0, 0), (1, 1)])
        assert not is_dispensable(t, {"a"}, "a")

    def test_duplicated_column_is_dispensable(self):
        t = DecisionTable.from_rows(
            ("a", "a2"), "d", [(0, 0, 0), (1, 1, 1), (2, 2, 0)]
        )
        assert is_dispensable(t, {"a", "a2"}, "a2")
        assert is_dispensable(t, {"a", "a2"}, "a")

    def test_attr_must_be_member(self, table7):
        with pytest.raises(ValueError):
            is_dispensable(table7, {"a"}, "b")


class TestReductsAndCore:
    def test_seven_rule_table_has_single_reduct(self, table7):
        assert relative_reducts(table7) == [frozenset({"a", "b", "c"})]
        assert core(table7) == frozenset({"a", "b", "c"})
        assert minimum_reduct(table7) == frozenset({"a", "b", "c"})

    def test_matches_brute_force_on_random_tables(self):
        rng = random.Random(17)
        for _ in range(120):
            t = random_table(rng)
            assert sorted(relative_reducts(t), key=sorted) == sorted(
                brute_force_reducts(t), key=sorted
            )

    def test_output_sorted_by_size_then_order(self):
        rng = random.Random(19)
        for _ in range(40):
            t = random_table(rng)
            reducts = relative_reducts(t)
            keys = [(len(r), tuple(sorted(t.attr_index(a) for a in r))) for r in reducts]
            assert keys == sorted(keys)

    def test_single_determining_attribute(self):
        t = DecisionTable.from_rows(
            ("a", "b"), "d", [(0, 0, 0), (1, 0, 1), (2, 0, 2)]
        )
        assert relative_reducts(t) == [frozenset({"a"})]

    def test_two_identical_columns_give_two_reducts(self):
        t = DecisionTable.from_rows(
            ("a", "b"), "d", [(0, 0, 0), (1, 1, 1), (2, 2, 0)]
        )
        assert set(map(frozenset, relative_reducts(t))) == {
            frozenset({"a"}),
            frozenset({"b"}),
        }

    def test_core_equals_intersection_and_drop_one_characterization(self):
        rng = random.Random(23)
        for _ in range(80):
            t = random_table(rng)
            full = positive_region(t, t.attrs)
            by_drop = frozenset(
                a
                for a in t.attrs
                if positive_region(t, set(t.attrs) - {a}) != full
            )
            assert core(t) == by_drop

    def test_interchangeable_attributes_empty_core(self):
        t = DecisionTable.from_rows(
            ("a", "b"), "d", [(0, 0, 0), (1, 1, 1)]
        )
        assert core(t) == frozenset()

    def test_limit_guard(self):
        attrs = tuple(f"a{j}" for j in range(EXHAUSTIVE_LIMIT + 1))
        rows = [tuple([i % 3] * (len(attrs) + 1)) for i in range(4)]
        t = DecisionTable.from_rows(attrs, "d", rows)
        with pytest.raises(ExhaustiveSearchLimitError, match="too large for exhaustive search"):
            relative_reducts(t)

    def test_minimum_reduct_agrees_with_first_relative_reduct(self):
        rng = random.Random(27)
        for _ in range(60):
            t = random_table(rng)
            assert minimum_reduct(t) == relative_reducts(t)[0]


class TestGreedyReduct:
    def test_full_positive_region_and_prune(self):
        rng = random.Random(29)
        for _ in range(120):
            t = random_table(rng)
            r = greedy_reduct(t)
            full = positive_region(t, t.attrs)
            assert positive_region(t, r) == full
            for a in r:
                assert positive_region(t, r - {a}) != full

    def test_constant_decision_gives_empty(self):
        t = DecisionTable.from_rows(("a", "b"), "d", [(0, 1, 2), (1, 0, 2)])
        assert greedy_reduct(t) == frozenset()

    def test_single_sufficient_attribute(self):
        t = DecisionTable.from_rows(
            ("a", "b"), "d", [(0, 0, 0), (1, 0, 1), (2, 1, 2)]
        )
        assert greedy_reduct(t) == frozenset({"a"})


class TestCoreValues:
    def test_worked_example_row_one(self, table7):
        rows = {r.rule_id: r for r in core_values(table7)}
        assert dict(rows[1].cells) == {"b": 0}

    def test_worked_example_full_grid(self, table7):
        expected = {
            1: {"b": 0},
            2: {"a": 1},
            3: {"a": 0},
            4: {"b": 1, "c": 1},
            5: {"c": 2},
            6: {},
            7: {},
        }
        for r in core_values(table7):
            assert dict(r.cells) == expected[r.rule_id]
            assert r.decision == table7.value(r.rule_id, "d")

    def test_single_rule_table_all_dont_care(self):
        t = DecisionTable.from_rows(("a", "b"), "d", [(1, 2, 3)])
        (r,) = core_values(t)
        assert dict(r.cells) == {}

    def test_inconsistent_table_rejected(self):
        t = DecisionTable.from_rows(
            ("a",), "d", {10: (0, 0), 11: (0, 1)}
        )
        with pytest.raises(InconsistentTableError) as exc:
            core_values(t)
        assert set(exc.value.clashing) == {10, 11}
        assert exc.value.gamma == 0.0


class TestValueReducts:
    def test_rule_one_two_reducts(self, table7):
        got = value_reducts(table7, 1)
        patterns = {tuple(sorted(r.cells.items())) for r in got}
        assert patterns == {(("a", 1), ("b", 0)), (("b", 0), ("c", 1))}

    def test_rule_five_single_reduct(self, table7):
        got = value_reducts(table7, 5)
        assert len(got) == 1
        assert dict(got[0].cells) == {"c": 2}

    def test_rule_seven_three_reducts(self, table7):
        got = value_reducts(table7, 7)
        patterns = {tuple(sorted(r.cells.items())) for r in got}
        assert patterns == {(("a", 2),), (("b", 2),), (("c", 2),)}

    def test_per_rule_counts(self, table7):
        counts = [len(value_reducts(table7, rid)) for rid in table7.rules]
        assert counts == [2, 2, 1, 1, 1, 2, 3]

    def test_sorted_by_size_then_attribute_order(self, table7):
        got = value_reducts(table7, 1)
        assert [tuple(sorted(r.cells)) for r in got] == [("a", "b"), ("b", "c")]

    def test_every_reduct_contains_the_core_values(self):
        rng = random.Random(31)
        checked = 0
        while checked < 60:
            t = random_table(rng)
            try:
                cores = {r.rule_id: set(r.cells) for r in core_values(t)}
            except InconsistentTableError:
                continue
            checked += 1
            for rid in t.rules:
                for r in value_reducts(t, rid):
                    assert cores[rid] <= set(r.cells)

    def test_reduct_implies_decision(self):
        rng = random.Random(37)
        checked = 0
        while checked < 60:
            t = random_table(rng)
            try:
                rules = {rid: value_reducts(t, rid) for rid in t.rules}
            except InconsistentTableError:
                continue
            checked += 1
            for rid, cands in rules.items():
                for cand in cands:
                    for other in t.rules:
                        if cand.matches(t, other):
                            assert t.value(other, "d") == cand.decision

    def test_minimality_against_brute_force(self):
        import itertools

        rng = random.Random(41)
        checked = 0
        while checked < 40:
            t = random_table(rng, max_rules=6, max_attrs=3)
            try:
                got = {rid: value_reducts(t, rid) for rid in t.rules}
            except InconsistentTableError:
                continue
            checked += 1
            cond, dec = {}, {}
            for rid in t.rules:
                i = t.index_of_rule(rid)
                dec[rid] = frozenset(
                    r for r in t.rules if t.decisions[t.index_of_rule(r)] == t.decisions[i]
                )
            for rid in t.rules:
                qualifying = []
                for size in range(len(t.attrs) + 1):
                    for combo in itertools.combinations(t.attrs, size):
                        members = set(t.rules)
                        for a in combo:
                            v = t.value(rid, a)
                            members &= {r for r in t.rules if t.value(r, a) == v}
                        if members <= dec[rid]:
                            qualifying.append(frozenset(combo))
                minimal = {
                    s for s in qualifying if not any(o < s for o in qualifying)
                }
                assert {frozenset(r.cells) for r in got[rid]} == minimal


class TestMinimizeTable:
    def test_worked_example_minimal_table(self, table7):
        got = minimize_table(table7)
        patterns = [(dict(r.cells), r.decision) for r in got]
        assert patterns == [
            ({"a": 1, "b": 0}, 1),
            ({"a": 0}, 0),
            ({"b": 1, "c": 1}, 0),
            ({"c": 2}, 2),
        ]

    def test_choice_space_size(self, table7):
        total = 1
        for rid in table7.rules:
            total *= len(value_reducts(table7, rid))
        assert total == 24

    def test_already_minimal_table_equals_core_values(self):
        t = DecisionTable.from_rows(
            ("a",), "d", [(0, 0), (1, 1), (2, 2)]
        )
        assert [
            (dict(r.cells), r.decision) for r in minimize_table(t)
        ] == [(dict(r.cells), r.decision) for r in core_values(t)]

    def test_covering_rules_classify_correctly(self):
        rng = random.Random(43)
        checked = 0
        while checked < 60:
            t = random_table(rng)
            try:
                rules = minimize_table(t)
            except InconsistentTableError:
                continue
            checked += 1
            for pattern in rules:
                for rid in t.rules:
                    if pattern.matches(t, rid):
                        assert t.value(rid, "d") == pattern.decision
            # every original rule is covered by at least one pattern
            for rid in t.rules:
                assert any(p.matches(t, rid) for p in rules)

    def test_inconsistent_rejected(self):
        t = DecisionTable.from_rows(("a",), "d", [(1, 0), (1, 1)])
        with pytest.raises(InconsistentTableError):
            minimize_table(t)

    def test_custom_picker(self, table7):
        def first(rule_id, candidates, by_rule):
            return candidates[0]

        got = minimize_table(table7, picker=first)
        assert all(isinstance(r, ReducedRule) for r in got)
        for pattern in got:
            for rid in table7.rules:
                if pattern.matches(table7, rid):
                    assert table7.value(rid, "d") == pattern.decision
