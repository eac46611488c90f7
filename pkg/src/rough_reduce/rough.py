"""Rough-set operations on decision tables.

Partitions by indiscernibility, lower/upper approximations, positive regions
and dependency degrees, relative reducts and cores, and the per-rule value
reducts that drive decision-table minimization.

All functions are pure: they never mutate their inputs, and identical inputs
produce identical outputs (ties in every returned ordering are broken by the
table's declared attribute order, then by ascending rule id).
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Callable, Iterable, Mapping, Sequence

from .table import DecisionTable, Partition, ReducedRule

# Exhaustive reduct search scans all attribute subsets; beyond this many
# condition attributes callers must fall back to greedy_reduct.
EXHAUSTIVE_LIMIT = 20


class InconsistentTableError(ValueError):
    """Two rules share a condition tuple but disagree on the decision."""

    def __init__(self, clashing: Sequence[int], gamma: float | None = None):
        self.clashing = tuple(clashing)
        self.gamma = gamma
        msg = f"inconsistent decision table: rules {list(self.clashing)} share conditions but differ in decision"
        if gamma is not None:
            msg += f" (consistency factor {gamma:.6g})"
        super().__init__(msg)


class ExhaustiveSearchLimitError(ValueError):
    """Attribute count too large for exhaustive reduct search."""

    def __init__(self, n_attrs: int):
        self.n_attrs = n_attrs
        super().__init__(
            f"{n_attrs} condition attributes is too large for exhaustive search "
            f"(limit {EXHAUSTIVE_LIMIT}); use greedy_reduct instead"
        )


# --- partitions and approximations --------------------------------------


def partition_by(table: DecisionTable, attrs: Iterable[str]) -> Partition:
    """Partition the universe by indiscernibility over ``attrs``.

    Two rules land in the same block iff they agree on every attribute in
    ``attrs`` (conditions and/or the decision attribute).  An empty
    attribute set discerns nothing and yields the single block U.
    """
    attrs = list(attrs)
    columns = []
    for a in attrs:
        if a == table.decision:
            columns.append(table.decisions)
        elif a in table.attrs:
            j = table.attr_index(a)
            columns.append(tuple(row[j] for row in table.conditions))
        else:
            raise KeyError(f"unknown attribute {a!r}")
    groups: dict[tuple[int, ...], set[int]] = {}
    for i, rid in enumerate(table.rules):
        key = tuple(col[i] for col in columns)
        groups.setdefault(key, set()).add(rid)
    return Partition.from_blocks(groups.values())


def lower_approx(p: Partition, x: Iterable[int]) -> frozenset[int]:
    """Union of blocks certainly inside ``x`` (blocks Y with Y subset of x)."""
    x = _check_subset(p, x)
    out: set[int] = set()
    for block in p.blocks:
        if block <= x:
            out |= block
    return frozenset(out)


def upper_approx(p: Partition, x: Iterable[int]) -> frozenset[int]:
    """Union of blocks possibly inside ``x`` (blocks Y with Y meeting x)."""
    x = _check_subset(p, x)
    out: set[int] = set()
    for block in p.blocks:
        if block & x:
            out |= block
    return frozenset(out)


def boundary(p: Partition, x: Iterable[int]) -> frozenset[int]:
    """Upper minus lower approximation; empty iff ``x`` is crisp."""
    x = frozenset(x)
    return upper_approx(p, x) - lower_approx(p, x)


def _check_subset(p: Partition, x: Iterable[int]) -> frozenset[int]:
    x = frozenset(x)
    stray = x - p.universe
    if stray:
        raise ValueError(f"members {sorted(stray)} are not in the partition's universe")
    return x


# --- positive region and dependency -------------------------------------


def positive_region(table: DecisionTable, attrs: Iterable[str]) -> frozenset[int]:
    """Rules whose condition class lies wholly inside one decision class."""
    return _positive_region_indices(table, [table.attr_index(a) for a in attrs])


def _positive_region_indices(table: DecisionTable, cols: Sequence[int]) -> frozenset[int]:
    # Group rules by their condition key; a whole group is positive iff it
    # carries a single decision value.  Equivalent to unioning the lower
    # approximations of every decision class.
    groups: dict[tuple[int, ...], list[int]] = {}
    for i, rid in enumerate(table.rules):
        key = tuple(table.conditions[i][j] for j in cols)
        groups.setdefault(key, []).append(i)
    out: set[int] = set()
    for members in groups.values():
        first = table.decisions[members[0]]
        if all(table.decisions[i] == first for i in members[1:]):
            out.update(table.rules[i] for i in members)
    return frozenset(out)


def dependency_degree(table: DecisionTable, attrs: Iterable[str]) -> float:
    """|positive region| / |universe|; 1.0 iff the table is consistent over attrs."""
    return len(positive_region(table, attrs)) / len(table.rules)


def is_dispensable(table: DecisionTable, attrs: Iterable[str], attr: str) -> bool:
    """True iff dropping ``attr`` from ``attrs`` leaves the partition unchanged."""
    attrs = set(attrs)
    if attr not in attrs:
        raise ValueError(f"attribute {attr!r} is not in the queried set")
    with_a = partition_by(table, table.sort_attrs(attrs))
    without_a = partition_by(table, table.sort_attrs(attrs - {attr}))
    return with_a.as_set_of_sets() == without_a.as_set_of_sets()


def consistency_check(table: DecisionTable) -> None:
    """Raise InconsistentTableError naming a clashing rule pair, if any."""
    groups: dict[tuple[int, ...], int] = {}
    for i, rid in enumerate(table.rules):
        key = table.conditions[i]
        if key in groups:
            j = groups[key]
            if table.decisions[j] != table.decisions[i]:
                gamma = dependency_degree(table, table.attrs)
                raise InconsistentTableError((table.rules[j], rid), gamma)
        else:
            groups[key] = i


# --- reducts and cores ----------------------------------------------------


def relative_reducts(table: DecisionTable) -> list[frozenset[str]]:
    """All minimal attribute subsets preserving the full positive region.

    Exhaustive scan over subsets in ascending (size, declared-order) order;
    a subset qualifies iff its positive region equals that of the full
    condition set and no already-found reduct is contained in it.  Raises
    ExhaustiveSearchLimitError beyond EXHAUSTIVE_LIMIT attributes.
    """
    n = len(table.attrs)
    if n > EXHAUSTIVE_LIMIT:
        raise ExhaustiveSearchLimitError(n)
    target = _positive_region_indices(table, range(n))
    found: list[frozenset[str]] = []
    found_idx: list[frozenset[int]] = []
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            combo_set = frozenset(combo)
            if any(prev <= combo_set for prev in found_idx):
                continue  # a smaller reduct is inside; not minimal
            if _positive_region_indices(table, combo) == target:
                found_idx.append(combo_set)
                found.append(frozenset(table.attrs[j] for j in combo))
    return found


def minimum_reduct(table: DecisionTable) -> frozenset[str]:
    """The smallest reduct, ties broken by declared attribute order.

    Same scan order as relative_reducts but stops at the first hit, so it
    stays cheap when the minimum reduct is small.
    """
    n = len(table.attrs)
    if n > EXHAUSTIVE_LIMIT:
        raise ExhaustiveSearchLimitError(n)
    target = _positive_region_indices(table, range(n))
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            if _positive_region_indices(table, combo) == target:
                return frozenset(table.attrs[j] for j in combo)
    raise AssertionError("full attribute set always preserves its own positive region")


def greedy_reduct(table: DecisionTable) -> frozenset[str]:
    """A reduct built by greedy forward selection plus a pruning pass.

    Adds whichever attribute grows the positive region most (first in
    declared order on ties) until the full region is reached, then drops
    every member whose removal keeps the region intact.  The result is a
    valid reduct but not necessarily of minimum cardinality.
    """
    n = len(table.attrs)
    target = _positive_region_indices(table, range(n))
    chosen: list[int] = []
    remaining = list(range(n))
    current: frozenset[int] = _positive_region_indices(table, ())
    while current != target:
        best_j = None
        best_region: frozenset[int] = frozenset()
        for j in remaining:
            region = _positive_region_indices(table, chosen + [j])
            if best_j is None or len(region) > len(best_region):
                best_j, best_region = j, region
        chosen.append(best_j)
        remaining.remove(best_j)
        current = best_region
    for j in list(chosen):  # prune in declared order
        trimmed = [k for k in chosen if k != j]
        if _positive_region_indices(table, trimmed) == target:
            chosen = trimmed
    return frozenset(table.attrs[j] for j in chosen)


def core(table: DecisionTable) -> frozenset[str]:
    """Intersection of all relative reducts; may be empty."""
    reducts = relative_reducts(table)
    out = frozenset(table.attrs)
    for r in reducts:
        out &= r
    return out


# --- per-rule core values, value reducts, minimization -------------------


def _categories(table: DecisionTable) -> tuple[list[dict[int, frozenset[int]]], dict[int, frozenset[int]]]:
    """Per attribute, value -> set of rule ids; plus the decision classes."""
    cond: list[dict[int, set[int]]] = [dict() for _ in table.attrs]
    dec: dict[int, set[int]] = {}
    for i, rid in enumerate(table.rules):
        for j, v in enumerate(table.conditions[i]):
            cond[j].setdefault(v, set()).add(rid)
        dec.setdefault(table.decisions[i], set()).add(rid)
    frozen_cond = [{v: frozenset(s) for v, s in col.items()} for col in cond]
    frozen_dec = {v: frozenset(s) for v, s in dec.items()}
    return frozen_cond, frozen_dec


def core_values(table: DecisionTable) -> list[ReducedRule]:
    """Per rule, keep exactly the cells no value reduct of that rule can drop.

    Attribute a is a core value for rule x iff the intersection of x's
    categories over the remaining attributes escapes x's decision class.
    Defined only for consistent tables.
    """
    consistency_check(table)
    cond, dec = _categories(table)
    universe = table.universe
    out = []
    for i, rid in enumerate(table.rules):
        dec_class = dec[table.decisions[i]]
        cats = [cond[j][table.conditions[i][j]] for j in range(len(table.attrs))]
        m = len(cats)
        # prefix[j] = intersection of cats[:j], suffix[j] = intersection of cats[j+1:]
        prefix = [universe]
        for cat in cats:
            prefix.append(prefix[-1] & cat)
        suffix = [universe] * (m + 1)
        for j in range(m - 1, -1, -1):
            suffix[j] = suffix[j + 1] & cats[j]
        cells = {}
        for j, a in enumerate(table.attrs):
            rest = prefix[j] & suffix[j + 1]
            if not rest <= dec_class:
                cells[a] = table.conditions[i][j]
        out.append(ReducedRule(rid, cells, table.decisions[i]))
    return out


def value_reducts(table: DecisionTable, rule_id: int) -> list[ReducedRule]:
    """All minimal cell patterns of one rule that still imply its decision.

    A pattern over attribute subset G qualifies iff the intersection of the
    rule's categories over G is contained in its decision class; minimality
    means no proper subset of G qualifies.  Results are sorted by
    (size, declared attribute order).
    """
    consistency_check(table)
    i = table.index_of_rule(rule_id)
    cond, dec = _categories(table)
    dec_class = dec[table.decisions[i]]
    cats = [cond[j][table.conditions[i][j]] for j in range(len(table.attrs))]
    subsets = _minimal_covers(table.universe - dec_class, cats)
    subsets.sort(key=lambda s: (len(s), s))
    out = []
    for subset in subsets:
        cells = {table.attrs[j]: table.conditions[i][j] for j in subset}
        out.append(ReducedRule(rule_id, cells, table.decisions[i]))
    return out


def _minimal_covers(
    bad: frozenset[int], cats: Sequence[frozenset[int]]
) -> list[tuple[int, ...]]:
    """All minimal attribute-index sets whose categories exclude every bad rule.

    Attribute j "excludes" rule b when b is outside category cats[j]; a cover
    must exclude all of ``bad``.  Candidates are scanned in ascending size
    with per-bad-rule survivor bitmasks; a candidate containing an already
    found cover is skipped, and the scan ends at the first size where every
    candidate is either skipped or itself minimal (any larger set would
    contain one of them).
    """
    if not bad:
        return [()]
    bad_pos = {b: i for i, b in enumerate(sorted(bad))}
    full = (1 << len(bad_pos)) - 1

    useful: list[int] = []      # attributes that exclude at least one bad rule
    survivors: list[int] = []   # parallel bitmasks of the bad rules they keep
    for j, cat in enumerate(cats):
        mask = 0
        for b, i in bad_pos.items():
            if b in cat:
                mask |= 1 << i
        if mask != full:
            useful.append(j)
            survivors.append(mask)
    joint = full
    for mask in survivors:
        joint &= mask
    if joint != 0:
        # some bad rule agrees with this rule on every attribute yet has a
        # different decision; callers rule this out via consistency_check
        raise AssertionError("uncoverable rule in a consistent table")

    found: list[tuple[int, ...]] = []
    found_by_size: dict[int, set[tuple[int, ...]]] = {}
    n = len(useful)
    for size in range(1, n + 1):
        still_open = False
        for combo in itertools.combinations(range(n), size):
            if _contains_found(combo, found_by_size):
                continue
            mask = full
            for idx in combo:
                mask &= survivors[idx]
            if mask == 0:
                found.append(tuple(useful[idx] for idx in combo))
                found_by_size.setdefault(size, set()).add(combo)
            else:
                still_open = True
        if not still_open:
            break
    return found


def _contains_found(
    combo: tuple[int, ...], found_by_size: dict[int, set[tuple[int, ...]]]
) -> bool:
    for size, members in found_by_size.items():
        if size >= len(combo):
            continue
        for sub in itertools.combinations(combo, size):
            if sub in members:
                return True
    return False


PickerFn = Callable[
    [int, Sequence[ReducedRule], Mapping[int, Sequence[ReducedRule]]], ReducedRule
]


def most_shared_picker(
    rule_id: int,
    candidates: Sequence[ReducedRule],
    by_rule: Mapping[int, Sequence[ReducedRule]],
) -> ReducedRule:
    """Prefer the pattern shared by the most rules, then earliest attributes.

    The default minimization policy: counting, over all rules, how many carry
    each candidate pattern among their own value reducts, and picking the
    most common one (ties broken by the candidate's attribute positions).
    """
    counts: Counter = Counter()
    for cands in by_rule.values():
        for c in set(r.pattern_key() for r in cands):
            counts[c] += 1

    def key(rule: ReducedRule):
        return (-counts[rule.pattern_key()], tuple(sorted(rule.cells)), len(rule.cells))

    return min(candidates, key=key)


def minimize_table(
    table: DecisionTable, picker: PickerFn = most_shared_picker
) -> list[ReducedRule]:
    """Pick one value reduct per rule, merge identical patterns, and return
    the deduplicated minimal rule list.

    Each surviving ReducedRule keeps the lowest contributing rule id; output
    order follows that id.  Every original rule matching a returned pattern
    is guaranteed to carry the pattern's decision.
    """
    consistency_check(table)
    by_rule = {rid: tuple(value_reducts(table, rid)) for rid in table.rules}
    seen: dict[tuple, ReducedRule] = {}
    for rid in table.rules:
        choice = picker(rid, by_rule[rid], by_rule)
        key = choice.pattern_key()
        if key not in seen:
            seen[key] = choice
    return list(seen.values())
