"""Feature selection over discretized eigenspace coordinates.

Builds a decision table from discretized projections (one condition
attribute per coordinate, the class label as decision), validates it is
consistent, and selects the coordinate subset given by a minimum relative
reduct: exhaustive search when the attribute count allows it, greedy
forward selection otherwise.  The per-rule minimized table is kept as a
report artifact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_fitted, check_image_matrix, check_labels, check_vector
from .discretize import DiscretizationModel, discretize_matrix, fit_discretizer
from .rough import (
    EXHAUSTIVE_LIMIT,
    InconsistentTableError,
    dependency_degree,
    greedy_reduct,
    minimize_table,
    minimum_reduct,
)
from .table import DecisionTable, ReducedRule

# Attribute names in pipeline-built tables encode the coordinate index.
_ATTR_PREFIX = "f"
DECISION_ATTR = "class"

# Bin escalation schedule when a coarse binning makes the table inconsistent.
BIN_ESCALATION_STEP = 2
BIN_ESCALATION_MAX = 11


@dataclass(frozen=True)
class FeatureSelection:
    """Chosen eigen-coordinate indices plus how they were chosen."""

    selected_indices: tuple[int, ...]
    provenance: str
    minimized_rules: tuple[ReducedRule, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if not self.selected_indices:
            raise ValueError("a feature selection cannot be empty")
        if len(set(self.selected_indices)) != len(self.selected_indices):
            raise ValueError("selected indices must be unique")
        if any(i < 0 for i in self.selected_indices):
            raise ValueError("selected indices must be non-negative")
        if list(self.selected_indices) != sorted(self.selected_indices):
            raise ValueError("selected indices must be ascending")


def attr_name(index: int) -> str:
    return f"{_ATTR_PREFIX}{index}"


def attr_to_index(name: str) -> int:
    if not name.startswith(_ATTR_PREFIX):
        raise ValueError(f"not a coordinate attribute name: {name!r}")
    return int(name[len(_ATTR_PREFIX):])


def build_decision_table(
    discretized: Sequence[np.ndarray], labels: Sequence[int]
) -> DecisionTable:
    """One rule per sample; condition attribute j is eigen-coordinate j."""
    data = np.asarray(discretized)
    if data.ndim != 2:
        raise ValueError("discretized samples must form a 2-d grid")
    labels = check_labels(labels, n_samples=data.shape[0])
    attrs = tuple(attr_name(j) for j in range(data.shape[1]))
    rows = [tuple(int(v) for v in row) + (int(lab),) for row, lab in zip(data, labels)]
    return DecisionTable.from_rows(attrs, DECISION_ATTR, rows)


def select_features(table: DecisionTable) -> FeatureSelection:
    """The pipeline's selection step on one decision table.

    Validates consistency (raising InconsistentTableError carrying the
    consistency factor) and picks the global subset as the minimum
    relative reduct: exhaustive within EXHAUSTIVE_LIMIT attributes,
    greedy beyond.  The per-rule core-value / value-reduct minimization
    then runs on the table restricted to the selected attributes; its
    output is the reduced rule table kept for reporting.
    """
    gamma = dependency_degree(table, table.attrs)
    if gamma < 1.0:
        _raise_inconsistent(table, gamma)
    if len(table.attrs) <= EXHAUSTIVE_LIMIT:
        reduct = minimum_reduct(table)
        method = "exhaustive"
    else:
        reduct = greedy_reduct(table)
        method = "greedy"
    if not reduct:
        raise ValueError(
            "decision constant: every rule has the same class, nothing to select"
        )
    projected = table.project_columns(reduct)
    minimized = tuple(minimize_table(projected))
    indices = tuple(sorted(attr_to_index(a) for a in reduct))
    provenance = f"{method} minimum reduct {{{', '.join(projected.attrs)}}}"
    return FeatureSelection(indices, provenance, minimized)


def _raise_inconsistent(table: DecisionTable, gamma: float) -> None:
    seen: dict[tuple[int, ...], int] = {}
    for i, rid in enumerate(table.rules):
        key = table.conditions[i]
        if key in seen and table.decisions[seen[key]] != table.decisions[i]:
            raise InconsistentTableError((table.rules[seen[key]], rid), gamma)
        seen.setdefault(key, i)
    raise AssertionError("gamma < 1 implies a clashing rule pair")


def reduce_vector(selection: FeatureSelection, v: np.ndarray) -> np.ndarray:
    """Components of v at the selected indices, in ascending index order."""
    v = check_vector(v)
    if max(selection.selected_indices) >= v.shape[0]:
        raise ValueError(
            f"selection expects at least {max(selection.selected_indices) + 1} "
            f"components, got {v.shape[0]}"
        )
    return v[list(selection.selected_indices)]


def reduce_matrix(selection: FeatureSelection, data: np.ndarray) -> np.ndarray:
    data = check_image_matrix(data, min_rows=1)
    return data[:, list(selection.selected_indices)]


def fit_selection_with_escalation(
    projections: np.ndarray, labels: Sequence[int], bins: int
) -> tuple[DiscretizationModel, DecisionTable, FeatureSelection, int]:
    """Discretize, build the table, and select; on an inconsistent table retry
    with finer binning (bins + 2 steps, capped) before giving up.

    Returns (discretizer, table, selection, bins_used).
    """
    attempt = bins
    while True:
        model = fit_discretizer(projections, bins=attempt)
        codes = discretize_matrix(model, projections)
        table = build_decision_table(codes, labels)
        try:
            return model, table, select_features(table), attempt
        except InconsistentTableError:
            if attempt >= BIN_ESCALATION_MAX:
                raise
            attempt = min(attempt + BIN_ESCALATION_STEP, BIN_ESCALATION_MAX)


class RoughSetFeatureSelector(BaseEstimator, TransformerMixin):
    """Supervised transformer keeping the reduct-selected coordinates.

    fit(X, y) discretizes X, builds the decision table, and finds the
    feature subset; transform(X) keeps the selected columns of the
    continuous input.
    """

    def __init__(self, bins: int = 5):
        self.bins = bins

    def fit(self, X, y) -> "RoughSetFeatureSelector":
        data = check_image_matrix(X, min_rows=1)
        model, table, selection, used = fit_selection_with_escalation(
            data, y, self.bins
        )
        self.discretizer_ = model
        self.table_ = table
        self.selection_ = selection
        self.bins_used_ = used
        return self

    def transform(self, X) -> np.ndarray:
        check_fitted(self, "selection_")
        data = check_image_matrix(X, min_rows=1, n_cols=self.discretizer_.n_features)
        return reduce_matrix(self.selection_, data)
