"""Decision tables over a finite universe of rules.

A decision table maps every rule (row) to one discrete value per condition
attribute plus one decision value.  Values are small non-negative integer
codes; callers are expected to encode raw symbols before building a table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


DONT_CARE = None


@dataclass(frozen=True)
class DecisionTable:
    """Immutable decision table: rules x (condition attributes + decision).

    Attributes
    ----------
    attrs : condition attribute names, in declared (column) order.
    decision : name of the decision attribute.
    rules : rule ids, in declared (row) order.
    conditions : per rule, the tuple of condition codes (same order as attrs).
    decisions : per rule, the decision code.
    """

    attrs: tuple[str, ...]
    decision: str
    rules: tuple[int, ...]
    conditions: tuple[tuple[int, ...], ...]
    decisions: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.rules:
            raise ValueError("decision table needs a non-empty universe")
        if len(set(self.attrs)) != len(self.attrs):
            raise ValueError("condition attribute names must be unique")
        if self.decision in self.attrs:
            raise ValueError(
                f"decision attribute {self.decision!r} also appears as a condition"
            )
        if len(set(self.rules)) != len(self.rules):
            raise ValueError("rule ids must be unique")
        if len(self.conditions) != len(self.rules) or len(self.decisions) != len(self.rules):
            raise ValueError("one condition row and one decision per rule required")
        for rid, row, dec in zip(self.rules, self.conditions, self.decisions):
            if len(row) != len(self.attrs):
                raise ValueError(
                    f"rule {rid} has {len(row)} condition values, expected {len(self.attrs)}"
                )
            if dec < 0 or any(v < 0 for v in row):
                raise ValueError(f"rule {rid} carries a negative value code")

    @classmethod
    def from_rows(
        cls,
        attrs: Sequence[str],
        decision: str,
        rows: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
    ) -> "DecisionTable":
        """Build a table from rows of ``len(attrs) + 1`` codes (decision last).

        ``rows`` may be a mapping rule_id -> row, or a plain sequence in which
        case rule ids are assigned 0, 1, 2, ...
        """
        if isinstance(rows, Mapping):
            items = list(rows.items())
        else:
            items = list(enumerate(rows))
        rules = tuple(rid for rid, _ in items)
        conditions = tuple(tuple(int(v) for v in row[:-1]) for _, row in items)
        decisions = tuple(int(row[-1]) for _, row in items)
        return cls(tuple(attrs), decision, rules, conditions, decisions)

    @property
    def universe(self) -> frozenset[int]:
        return frozenset(self.rules)

    def index_of_rule(self, rule_id: int) -> int:
        try:
            return self.rules.index(rule_id)
        except ValueError:
            raise KeyError(f"unknown rule id {rule_id}") from None

    def attr_index(self, attr: str) -> int:
        try:
            return self.attrs.index(attr)
        except ValueError:
            raise KeyError(f"unknown attribute {attr!r}") from None

    def value(self, rule_id: int, attr: str) -> int:
        """Value of ``attr`` (a condition or the decision) for ``rule_id``."""
        i = self.index_of_rule(rule_id)
        if attr == self.decision:
            return self.decisions[i]
        return self.conditions[i][self.attr_index(attr)]

    def sort_attrs(self, attrs: Iterable[str]) -> tuple[str, ...]:
        """Attributes sorted by their declared column order."""
        order = {a: i for i, a in enumerate(self.attrs)}
        unknown = [a for a in attrs if a not in order]
        if unknown:
            raise KeyError(f"unknown attribute {unknown[0]!r}")
        return tuple(sorted(attrs, key=order.__getitem__))

    def project_columns(self, attrs: Iterable[str]) -> "DecisionTable":
        """The same rules restricted to a subset of condition attributes."""
        kept = self.sort_attrs(attrs)
        if not kept:
            raise ValueError("cannot project onto an empty attribute set")
        cols = [self.attrs.index(a) for a in kept]
        conditions = tuple(tuple(row[j] for j in cols) for row in self.conditions)
        return DecisionTable(kept, self.decision, self.rules, conditions, self.decisions)


@dataclass(frozen=True)
class Partition:
    """Family of disjoint equivalence classes covering a universe of rule ids."""

    blocks: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise ValueError("partition blocks must be non-empty")
            if seen & block:
                raise ValueError("partition blocks must be disjoint")
            seen |= block

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        frozen = [frozenset(b) for b in blocks]
        if any(not b for b in frozen):
            raise ValueError("partition blocks must be non-empty")
        return cls(tuple(sorted(frozen, key=min)))

    @property
    def universe(self) -> frozenset[int]:
        out: set[int] = set()
        for block in self.blocks:
            out |= block
        return frozenset(out)

    def block_of(self, member: int) -> frozenset[int]:
        for block in self.blocks:
            if member in block:
                return block
        raise KeyError(f"{member} is not in the partition's universe")

    def as_set_of_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(self.blocks)


@dataclass(frozen=True)
class ReducedRule:
    """A rule pattern where dropped condition cells are don't-cares.

    ``cells`` maps attribute name -> kept value; attributes absent from the
    mapping are don't-cares.  Rendering uses ``x`` for a don't-care cell.
    """

    rule_id: int
    cells: Mapping[str, int]
    decision: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", dict(self.cells))

    def kept_attrs(self) -> tuple[str, ...]:
        return tuple(self.cells)

    def matches(self, table: DecisionTable, rule_id: int) -> bool:
        """True if the given table rule agrees with every specified cell."""
        i = table.index_of_rule(rule_id)
        return all(
            table.conditions[i][table.attr_index(a)] == v for a, v in self.cells.items()
        )

    def pattern_key(self) -> tuple[tuple[tuple[str, int], ...], int]:
        """Identity of the pattern itself, ignoring which rule produced it."""
        return (tuple(sorted(self.cells.items())), self.decision)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReducedRule):
            return NotImplemented
        return (
            self.rule_id == other.rule_id
            and dict(self.cells) == dict(other.cells)
            and self.decision == other.decision
        )

    def __hash__(self) -> int:
        return hash((self.rule_id,) + self.pattern_key())


# --- plain text format -------------------------------------------------
#
# Header line:   attrs: a b c | d
# Rule lines:    one per rule, |attrs| + 1 space-separated codes, decision
#                last.  Don't-care cells render as ``x``.  Rule ids are not
#                part of the format; parsing assigns 0, 1, 2, ...


def table_to_text(table: DecisionTable) -> str:
    lines = [f"attrs: {' '.join(table.attrs)} | {table.decision}"]
    for row, dec in zip(table.conditions, table.decisions):
        lines.append(" ".join(str(v) for v in row) + f" {dec}")
    return "\n".join(lines) + "\n"


def table_from_text(text: str) -> DecisionTable:
    attrs, decision, rows = _parse_lines(text, allow_dont_care=False)
    return DecisionTable.from_rows(attrs, decision, rows)


def reduced_rules_to_text(
    rules: Sequence[ReducedRule], attrs: Sequence[str], decision: str
) -> str:
    lines = [f"attrs: {' '.join(attrs)} | {decision}"]
    for rule in rules:
        cells = [str(rule.cells[a]) if a in rule.cells else "x" for a in attrs]
        lines.append(" ".join(cells) + f" {rule.decision}")
    return "\n".join(lines) + "\n"


def reduced_rules_from_text(text: str) -> tuple[tuple[ReducedRule, ...], tuple[str, ...], str]:
    """Parse a reduced-rule grid; returns (rules, attrs, decision)."""
    attrs, decision, rows = _parse_lines(text, allow_dont_care=True)
    out = []
    for rid, row in enumerate(rows):
        cells = {a: v for a, v in zip(attrs, row[:-1]) if v is not DONT_CARE}
        out.append(ReducedRule(rid, cells, row[-1]))
    return tuple(out), tuple(attrs), decision


def _parse_lines(text: str, allow_dont_care: bool):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("attrs:"):
        raise ValueError("missing 'attrs:' header line")
    header = lines[0][len("attrs:"):]
    if "|" not in header:
        raise ValueError("header must separate condition and decision attrs with '|'")
    cond_part, dec_part = header.split("|", 1)
    attrs = cond_part.split()
    decision_names = dec_part.split()
    if len(decision_names) != 1:
        raise ValueError("exactly one decision attribute expected after '|'")
    decision = decision_names[0]
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if len(tokens) != len(attrs) + 1:
            raise ValueError(
                f"line {lineno}: expected {len(attrs) + 1} codes, found {len(tokens)}"
            )
        row = []
        for tok in tokens[:-1]:
            if tok == "x":
                if not allow_dont_care:
                    raise ValueError(f"line {lineno}: don't-care cell in a full table")
                row.append(DONT_CARE)
            else:
                row.append(_parse_code(tok, lineno))
        row.append(_parse_code(tokens[-1], lineno))
        rows.append(row)
    if not rows:
        raise ValueError("table has no rules")
    return attrs, decision, rows


def _parse_code(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ValueError(f"line {lineno}: {token!r} is not an integer code") from None
    if value < 0:
        raise ValueError(f"line {lineno}: negative code {value}")
    return value
