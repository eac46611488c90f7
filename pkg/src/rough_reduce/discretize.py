"""Equal-frequency discretization of projected feature vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_fitted, check_image_matrix, check_vector


@dataclass(frozen=True)
class DiscretizationModel:
    """Per-feature interior cut points; a value's code is the number of cut
    points strictly below it."""

    edges: tuple[tuple[float, ...], ...]
    bin_count: int

    def __post_init__(self) -> None:
        if self.bin_count < 2:
            raise ValueError("bin_count must be at least 2")
        for feature_edges in self.edges:
            if any(b <= a for a, b in zip(feature_edges, feature_edges[1:])):
                raise ValueError("cut points must be strictly ascending")
            if len(feature_edges) > self.bin_count - 1:
                raise ValueError("more cut points than bins allow")

    @property
    def n_features(self) -> int:
        return len(self.edges)


def fit_discretizer(projections: Sequence[np.ndarray], bins: int = 5) -> DiscretizationModel:
    """Quantile cut points at k/bins, k = 1..bins-1, per feature.

    Duplicate cut points collapse, and cut points at or above the feature
    maximum are dropped (they separate nothing), so a constant feature ends
    up with no cut points at all and a single code.
    """
    if bins < 2:
        raise ValueError("bins must be at least 2")
    data = check_image_matrix(projections, min_rows=1)
    quantiles = np.arange(1, bins) / bins
    edges = []
    for j in range(data.shape[1]):
        col = data[:, j]
        cuts = np.unique(np.quantile(col, quantiles))
        cuts = cuts[cuts < col.max()]
        edges.append(tuple(float(c) for c in cuts))
    return DiscretizationModel(tuple(edges), bins)


def discretize(model: DiscretizationModel, v: np.ndarray) -> np.ndarray:
    """Integer codes for one vector: per feature, count of cut points < value."""
    v = check_vector(v, model.n_features)
    codes = np.empty(model.n_features, dtype=np.int64)
    for j, feature_edges in enumerate(model.edges):
        codes[j] = np.searchsorted(feature_edges, v[j], side="left")
    return codes


def discretize_matrix(model: DiscretizationModel, data: np.ndarray) -> np.ndarray:
    data = check_image_matrix(data, min_rows=1, n_cols=model.n_features)
    return np.vstack([discretize(model, row) for row in data])


class QuantileDiscretizer(BaseEstimator, TransformerMixin):
    """Transformer wrapper around the quantile discretization model."""

    def __init__(self, bins: int = 5):
        self.bins = bins

    def fit(self, X, y=None) -> "QuantileDiscretizer":
        self.model_ = fit_discretizer(X, bins=self.bins)
        return self

    def transform(self, X) -> np.ndarray:
        check_fitted(self, "model_")
        return discretize_matrix(self.model_, X)
