"""Decision-table construction invariants and the plain text format."""

from __future__ import annotations

import pytest

from conftest import seven_rule_table

from rough_reduce.table import (
    DecisionTable,
    Partition,
    ReducedRule,
    reduced_rules_from_text,
    reduced_rules_to_text,
    table_from_text,
    table_to_text,
)


SEVEN_RULE_TEXT = (
    "attrs: a b c | d\n"
    "1 0 1 1\n"
    "1 0 0 1\n"
    "0 0 0 0\n"
    "1 1 1 0\n"
    "1 1 2 2\n"
    "2 1 2 2\n"
    "2 2 2 2\n"
)


class TestDecisionTable:
    def test_values_by_rule_and_attr(self):
        t = seven_rule_table()
        assert t.value(5, "c") == 2
        assert t.value(5, "d") == 2
        assert t.universe == frozenset(range(1, 8))

    def test_empty_universe_rejected(self):
        with pytest.raises(ValueError, match="non-empty"):
            DecisionTable.from_rows(("a",), "d", [])

    def test_duplicate_attribute_rejected(self):
        with pytest.raises(ValueError, match="unique"):
            DecisionTable.from_rows(("a", "a"), "d", [(0, 1, 0)])

    def test_decision_among_conditions_rejected(self):
        with pytest.raises(ValueError, match="condition"):
            DecisionTable.from_rows(("a", "d"), "d", [(0, 1, 0)])

    def test_ragged_row_rejected(self):
        with pytest.raises(ValueError, match="expected"):
            DecisionTable(("a", "b"), "d", (0,), ((1,),), (0,))

    def test_negative_code_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            DecisionTable.from_rows(("a",), "d", [(-1, 0)])

    def test_unknown_lookups(self):
        t = seven_rule_table()
        with pytest.raises(KeyError):
            t.value(99, "a")
        with pytest.raises(KeyError):
            t.value(1, "zz")


class TestPartitionType:
    def test_blocks_cover_and_are_disjoint(self):
        with pytest.raises(ValueError, match="disjoint"):
            Partition.from_blocks([{1, 2}, {2, 3}])
        with pytest.raises(ValueError, match="non-empty"):
            Partition.from_blocks([{1}, set()])

    def test_canonical_block_order(self):
        p = Partition.from_blocks([{6}, {3}, {1, 4, 8}, {2, 5, 7}])
        assert [min(b) for b in p.blocks] == [1, 2, 3, 6]


class TestTableTextFormat:
    def test_serialize_matches_golden(self):
        assert table_to_text(seven_rule_table()) == SEVEN_RULE_TEXT

    def test_text_round_trip_is_bit_exact(self):
        assert table_to_text(table_from_text(SEVEN_RULE_TEXT)) == SEVEN_RULE_TEXT

    def test_parse_assigns_sequential_rule_ids(self):
        t = table_from_text(SEVEN_RULE_TEXT)
        assert t.rules == tuple(range(7))
        assert t.attrs == ("a", "b", "c")
        assert t.decision == "d"

    def test_table_round_trip_preserves_values(self):
        t = table_from_text(SEVEN_RULE_TEXT)
        again = table_from_text(table_to_text(t))
        assert again == t

    def test_missing_header_rejected(self):
        with pytest.raises(ValueError, match="header"):
            table_from_text("1 0 1 1\n")

    def test_wrong_arity_rejected(self):
        with pytest.raises(ValueError, match="expected 4"):
            table_from_text("attrs: a b c | d\n1 0 1\n")

    def test_dont_care_rejected_in_full_table(self):
        with pytest.raises(ValueError, match="don't-care"):
            table_from_text("attrs: a b c | d\n1 x 1 1\n")

    def test_non_integer_code_rejected(self):
        with pytest.raises(ValueError, match="oops"):
            table_from_text("attrs: a | d\noops 1\n")


class TestReducedRuleTextFormat:
    def test_round_trip_with_dont_cares(self):
        rules = [
            ReducedRule(0, {"a": 1, "b": 0}, 1),
            ReducedRule(1, {"a": 0}, 0),
            ReducedRule(2, {"b": 1, "c": 1}, 0),
            ReducedRule(3, {"c": 2}, 2),
        ]
        text = reduced_rules_to_text(rules, ("a", "b", "c"), "d")
        assert text == (
            "attrs: a b c | d\n"
            "1 0 x 1\n"
            "0 x x 0\n"
            "x 1 1 0\n"
            "x x 2 2\n"
        )
        parsed, attrs, decision = reduced_rules_from_text(text)
        assert attrs == ("a", "b", "c")
        assert decision == "d"
        assert [dict(r.cells) for r in parsed] == [dict(r.cells) for r in rules]
        assert [r.decision for r in parsed] == [r.decision for r in rules]
        assert reduced_rules_to_text(parsed, attrs, decision) == text

    def test_pattern_matching(self):
        t = seven_rule_table()
        rule = ReducedRule(0, {"c": 2}, 2)
        assert [rid for rid in t.rules if rule.matches(t, rid)] == [5, 6, 7]
