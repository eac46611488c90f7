"""Eigenspace projection of image vectors plus eigenvector selection.

The training images are mean-centered into a data matrix X (one column per
image) and the eigenpairs of the unnormalized covariance C = X X^T provide
the projection basis.  When there are fewer images than pixels the spectrum
is computed through the small Gram matrix X^T X and the eigenvectors are
mapped back to pixel space and renormalized; the non-zero spectrum is the
same either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_fitted, check_image_matrix, check_vector
from .jacobi import fix_sign, jacobi_eigh

# Eigenvalues below this fraction of the largest are treated as zero rank.
ZERO_EIGENVALUE_RTOL = 1e-10


@dataclass(frozen=True)
class Eigenspace:
    """Mean vector, orthonormal basis columns, and descending eigenvalues."""

    mean: np.ndarray          # shape (N,)
    basis: np.ndarray         # shape (N, Q), orthonormal columns
    eigenvalues: np.ndarray   # shape (Q,), descending, non-negative

    def __post_init__(self) -> None:
        if self.basis.shape != (self.mean.shape[0], self.eigenvalues.shape[0]):
            raise ValueError("mean, basis, and eigenvalues dimensions disagree")
        if np.any(np.diff(self.eigenvalues) > 0):
            raise ValueError("eigenvalues must be sorted descending")
        if np.any(self.eigenvalues < 0):
            raise ValueError("eigenvalues must be non-negative")

    @property
    def n_pixels(self) -> int:
        return self.mean.shape[0]

    @property
    def n_components(self) -> int:
        return self.eigenvalues.shape[0]


def mean_center(images: Sequence[np.ndarray]) -> tuple[np.ndarray, list[np.ndarray]]:
    """Per-pixel mean and the mean-subtracted copies of the inputs."""
    data = check_image_matrix(images, min_rows=2)
    mean = data.mean(axis=0)
    return mean, [row - mean for row in data]


def fit_eigenspace(images: Sequence[np.ndarray], method: str = "auto") -> Eigenspace:
    """Eigenpairs of the unnormalized covariance of the centered images.

    ``method`` picks the route: "direct" solves the N x N covariance,
    "gram" goes through the P x P Gram matrix, "auto" uses gram when there
    are fewer images than pixels.  Eigenvalues within ZERO_EIGENVALUE_RTOL
    of zero (relative to the largest) are discarded along with their
    vectors, and at most P - 1 components are kept.
    """
    data = check_image_matrix(images, min_rows=2)
    n_images, n_pixels = data.shape
    mean = data.mean(axis=0)
    x = (data - mean).T  # pixels x images, one column per centered image

    if method == "auto":
        method = "gram" if n_images < n_pixels else "direct"
    if method == "direct":
        values, vectors = jacobi_eigh(x @ x.T)
    elif method == "gram":
        values, small = jacobi_eigh(x.T @ x)
        vectors = x @ small  # column i has squared norm = values[i]
    else:
        raise ValueError(f"unknown method {method!r}")

    if values.size == 0 or values[0] <= 0.0:
        return Eigenspace(mean, np.empty((n_pixels, 0)), np.empty(0))
    keep = values > ZERO_EIGENVALUE_RTOL * values[0]
    keep &= np.arange(values.size) < min(n_pixels, n_images - 1)
    values = np.clip(values[keep], 0.0, None)
    vectors = vectors[:, keep]
    for i in range(vectors.shape[1]):
        vectors[:, i] = fix_sign(vectors[:, i] / np.linalg.norm(vectors[:, i]))
    return Eigenspace(mean, vectors, values)


def project(space: Eigenspace, x: np.ndarray) -> np.ndarray:
    """Coordinates of one image in the eigenspace: basis^T (x - mean)."""
    x = check_vector(x, space.n_pixels)
    return space.basis.T @ (x - space.mean)


def reconstruct(space: Eigenspace, coords: np.ndarray) -> np.ndarray:
    """Back-projection mean + basis @ coords (exact at full rank)."""
    coords = check_vector(coords, space.n_components)
    return space.mean + space.basis @ coords


def truncate(space: Eigenspace, n_components: int) -> Eigenspace:
    """Keep the first ``n_components`` eigenvectors (all, if fewer exist)."""
    if n_components < 1:
        raise ValueError("n_components must be at least 1")
    q = min(n_components, space.n_components)
    return Eigenspace(space.mean, space.basis[:, :q], space.eigenvalues[:q])


# --- eigenvector selection strategies ------------------------------------


class SelectionStrategy:
    """Base for the eigenvector-count selection policies."""

    def kept_indices(self, eigenvalues: np.ndarray) -> list[int]:
        raise NotImplementedError


@dataclass(frozen=True)
class Standard(SelectionStrategy):
    """Keep every eigenvector with a non-zero eigenvalue."""

    def kept_indices(self, eigenvalues: np.ndarray) -> list[int]:
        return list(range(eigenvalues.size))


@dataclass(frozen=True)
class DropLastFraction(SelectionStrategy):
    """Drop the given fraction of trailing (least-variance) eigenvectors."""

    fraction: float

    def __post_init__(self) -> None:
        if not 0.0 < self.fraction < 1.0:
            raise ValueError("fraction must lie in (0, 1)")

    def kept_indices(self, eigenvalues: np.ndarray) -> list[int]:
        q = eigenvalues.size
        # guard against float noise pushing an exact product below its integer
        kept = max(1, math.floor((1.0 - self.fraction) * q + 1e-9))
        return list(range(kept))


@dataclass(frozen=True)
class Energy(SelectionStrategy):
    """Keep the fewest leading eigenvectors whose cumulative eigenvalue
    fraction reaches the threshold."""

    threshold: float

    def __post_init__(self) -> None:
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError("threshold must lie in (0, 1]")

    def kept_indices(self, eigenvalues: np.ndarray) -> list[int]:
        fractions = np.cumsum(eigenvalues) / np.sum(eigenvalues)
        kept = int(np.searchsorted(fractions, self.threshold, side="left")) + 1
        return list(range(min(kept, eigenvalues.size)))


@dataclass(frozen=True)
class Stretch(SelectionStrategy):
    """Keep every eigenvector whose eigenvalue-to-maximum ratio meets the
    threshold (a prefix, since eigenvalues are sorted)."""

    threshold: float

    def __post_init__(self) -> None:
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError("threshold must lie in (0, 1]")

    def kept_indices(self, eigenvalues: np.ndarray) -> list[int]:
        ratios = eigenvalues / eigenvalues[0]
        return [i for i in range(eigenvalues.size) if ratios[i] >= self.threshold]


@dataclass(frozen=True)
class DropFirst(SelectionStrategy):
    """Drop the leading eigenvector (largest variance), keep the rest."""

    def kept_indices(self, eigenvalues: np.ndarray) -> list[int]:
        if eigenvalues.size < 2:
            raise ValueError("cannot drop the first eigenvector of a 1-dimensional space")
        return list(range(1, eigenvalues.size))


def select(space: Eigenspace, strategy: SelectionStrategy) -> Eigenspace:
    """Apply a selection strategy; never reorders the surviving eigenvectors."""
    if space.n_components == 0:
        raise ValueError("cannot select from an empty eigenspace")
    idx = strategy.kept_indices(space.eigenvalues)
    return Eigenspace(space.mean, space.basis[:, idx], space.eigenvalues[idx])


def strategy_from_name(
    name: str,
    *,
    drop_fraction: float = 0.4,
    energy_threshold: float = 0.9,
    stretch_threshold: float = 0.01,
) -> SelectionStrategy:
    """Map a CLI-style strategy name to a strategy value."""
    table = {
        "standard": lambda: Standard(),
        "drop-last": lambda: DropLastFraction(drop_fraction),
        "energy": lambda: Energy(energy_threshold),
        "stretch": lambda: Stretch(stretch_threshold),
        "drop-first": lambda: DropFirst(),
    }
    try:
        return table[name]()
    except KeyError:
        raise ValueError(
            f"unknown strategy {name!r}; expected one of {sorted(table)}"
        ) from None


# --- estimator wrapper -----------------------------------------------------


class EigenspaceProjection(BaseEstimator, TransformerMixin):
    """Transformer mapping image rows to eigenspace coordinates.

    Parameters
    ----------
    strategy : eigenvector selection policy applied after the fit.
    method : "auto", "gram", or "direct" eigendecomposition route.
    """

    def __init__(self, strategy: SelectionStrategy | None = None, method: str = "auto"):
        self.strategy = strategy
        self.method = method

    def fit(self, X: Iterable[np.ndarray], y=None) -> "EigenspaceProjection":
        space = fit_eigenspace(X, method=self.method)
        if self.strategy is not None:
            space = select(space, self.strategy)
        self.eigenspace_ = space
        return self

    def transform(self, X: Iterable[np.ndarray]) -> np.ndarray:
        check_fitted(self, "eigenspace_")
        data = check_image_matrix(X, min_rows=1, n_cols=self.eigenspace_.n_pixels)
        return (data - self.eigenspace_.mean) @ self.eigenspace_.basis
