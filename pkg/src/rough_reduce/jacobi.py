"""Cyclic Jacobi eigendecomposition for real symmetric matrices.

Dependency-free (beyond numpy array arithmetic), deterministic, and accurate
to machine precision for the modest matrix sizes this package needs (up to a
few hundred).  Sweeps run until the off-diagonal Frobenius norm drops below
``tol_factor`` times the Frobenius norm of the input.
"""

from __future__ import annotations

import numpy as np

_MAX_SWEEPS = 100


def jacobi_eigh(a: np.ndarray, tol_factor: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors of a symmetric matrix.

    Returns ``(eigenvalues, vectors)`` with eigenvalues sorted descending and
    ``vectors[:, i]`` the unit eigenvector for ``eigenvalues[i]``.  Each
    eigenvector is scaled so its largest-magnitude component is positive
    (earliest index on ties); equal eigenvalues are ordered by their
    sign-fixed vectors' first differing component.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=1e-8 * (np.abs(a).max() + 1.0)):
        raise ValueError("matrix is not symmetric")
    n = a.shape[0]
    if n == 0:
        return np.empty(0), np.empty((0, 0))

    work = (a + a.T) / 2.0
    vecs = np.eye(n)
    norm = np.linalg.norm(work)
    if norm == 0.0:
        return np.zeros(n), vecs
    threshold = tol_factor * norm

    for _ in range(_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.tril(work, -1) ** 2) * 2.0)
        if off < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                if abs(apq) <= threshold / (n * n):
                    continue
                theta = (work[q, q] - work[p, p]) / (2.0 * apq)
                t = np.sign(theta) if theta != 0 else 1.0
                t /= abs(theta) + np.sqrt(theta * theta + 1.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                _rotate(work, vecs, p, q, c, s)
    else:
        raise RuntimeError("Jacobi sweeps did not converge")

    values = np.diag(work).copy()
    order = _spectral_order(values, vecs)
    values = values[order]
    vecs = vecs[:, order]
    return values, vecs


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int, c: float, s: float) -> None:
    """Apply the plane rotation in rows/columns p, q of a and columns of v."""
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    a[p, q] = 0.0
    a[q, p] = 0.0
    vp = v[:, p].copy()
    vq = v[:, q].copy()
    v[:, p] = c * vp - s * vq
    v[:, q] = s * vp + c * vq


def fix_sign(vec: np.ndarray) -> np.ndarray:
    """Scale so the largest-magnitude component is positive (earliest on ties)."""
    idx = int(np.argmax(np.abs(vec)))
    if vec[idx] < 0:
        return -vec
    return vec.copy()


def _spectral_order(values: np.ndarray, vecs: np.ndarray) -> list[int]:
    for i in range(vecs.shape[1]):
        vecs[:, i] = fix_sign(vecs[:, i])
    return sorted(
        range(len(values)), key=lambda i: (-values[i], tuple(vecs[:, i]))
    )
