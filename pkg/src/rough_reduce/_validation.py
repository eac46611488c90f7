"""Small input-validation helpers shared by the estimators."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from sklearn.exceptions import NotFittedError


def check_image_matrix(
    images: Iterable[np.ndarray], min_rows: int = 1, n_cols: int | None = None
) -> np.ndarray:
    """Stack vectors into a finite float64 matrix, one row per sample."""
    if isinstance(images, np.ndarray):
        data = np.asarray(images, dtype=np.float64)
        if data.ndim == 1:
            data = data.reshape(1, -1)
    else:
        rows = [np.asarray(v, dtype=np.float64).ravel() for v in images]
        if rows and any(r.shape != rows[0].shape for r in rows):
            raise ValueError("all vectors must have the same length")
        data = np.vstack(rows) if rows else np.empty((0, 0))
    if data.ndim != 2:
        raise ValueError(f"expected a 2-d sample matrix, got ndim={data.ndim}")
    if data.shape[0] < min_rows:
        raise ValueError(f"need at least {min_rows} sample(s), got {data.shape[0]}")
    if n_cols is not None and data.shape[1] != n_cols:
        raise ValueError(f"expected vectors of length {n_cols}, got {data.shape[1]}")
    if not np.all(np.isfinite(data)):
        raise ValueError("input contains non-finite values")
    return data


def check_vector(x: np.ndarray, length: int | None = None) -> np.ndarray:
    """Coerce to a finite float64 1-d vector, optionally of a fixed length."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if length is not None and x.shape[0] != length:
        raise ValueError(f"expected a vector of length {length}, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise ValueError("input contains non-finite values")
    return x


def check_labels(y: Sequence[int], n_samples: int | None = None) -> np.ndarray:
    """Coerce labels to a 1-d int array of non-negative codes."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError("labels must be one-dimensional")
    if n_samples is not None and y.shape[0] != n_samples:
        raise ValueError(f"got {y.shape[0]} labels for {n_samples} samples")
    if y.size and not np.issubdtype(y.dtype, np.integer):
        raise ValueError("labels must be integer codes")
    if y.size and y.min() < 0:
        raise ValueError("labels must be non-negative")
    return y.astype(np.int64)


def check_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit first"
        )
