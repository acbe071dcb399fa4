"""Jacobi-rotation numerics shared by the PCA fit and the joint diagonalizer.

Both problems are solved by sweeping Givens rotations over index pairs:
a single symmetric matrix for eigendecomposition, a whole family of
cumulant matrices for approximate joint diagonalization.
"""

from __future__ import annotations

import math

import numpy as np

EIG_OFF_TOL = 1e-12
JOINT_SIN_TOL = 1e-8
MAX_SWEEPS = 100


def jacobi_eigh(A: np.ndarray, tol: float = EIG_OFF_TOL,
                max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) in descending eigenvalue order,
    eigenvectors as columns. Sweeps stop when every off-diagonal entry is
    below tol relative to the matrix's Frobenius norm.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("square matrix required")
    if not np.allclose(A, A.T, atol=1e-10 * (1 + np.abs(A).max())):
        raise ValueError("symmetric matrix required")
    n = A.shape[0]
    V = np.eye(n)
    scale = max(np.linalg.norm(A), 1e-300)
    for _ in range(max_sweeps):
        off = A - np.diag(np.diag(A))
        if np.abs(off).max() <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(A[p, q]) <= tol * scale:
                    continue
                theta = 0.5 * math.atan2(2.0 * A[p, q], A[p, p] - A[q, q])
                c, s = math.cos(theta), math.sin(theta)
                rot_rows(A, p, q, c, s)
                rot_cols(A, p, q, c, s)
                rot_cols(V, p, q, c, s)
    vals = np.diag(A).copy()
    order = np.argsort(-vals, kind="mergesort")
    return vals[order], V[:, order]


def rot_cols(M: np.ndarray, p: int, q: int, c: float, s: float) -> None:
    """In-place update of columns p, q by the (p, q) Givens rotation."""
    mp = M[:, p].copy()
    M[:, p] = c * mp + s * M[:, q]
    M[:, q] = c * M[:, q] - s * mp


def rot_rows(M: np.ndarray, p: int, q: int, c: float, s: float) -> None:
    """In-place update of rows p, q by the (p, q) Givens rotation."""
    mp = M[p, :].copy()
    M[p, :] = c * mp + s * M[q, :]
    M[q, :] = c * M[q, :] - s * mp


def joint_diagonalize(mats: np.ndarray, tol: float = JOINT_SIN_TOL,
                      max_sweeps: int = MAX_SWEEPS
                      ) -> tuple[np.ndarray, bool, int]:
    """Approximate joint diagonalization of symmetric matrices.

    mats is a (k, m, m) stack. Finds an orthogonal V minimizing the summed
    off-diagonal energy of V.T @ mats[i] @ V via Jacobi sweeps; the rotation
    angle for each (p, q) pair is the closed-form minimizer over the whole
    family. Returns (V, converged, sweeps_used); converged is False when a
    sweep still contained a rotation with |sin| >= tol after max_sweeps.
    """
    mats = np.array(mats, dtype=float)
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise ValueError("expected a (k, m, m) stack of square matrices")
    m = mats.shape[1]
    V = np.eye(m)
    converged = False
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        rotated = False
        for p in range(m - 1):
            for q in range(p + 1, m):
                g1 = mats[:, p, p] - mats[:, q, q]
                g2 = mats[:, p, q] + mats[:, q, p]
                ton = float(np.dot(g1, g1) - np.dot(g2, g2))
                toff = 2.0 * float(np.dot(g1, g2))
                theta = 0.5 * math.atan2(toff, ton + math.hypot(ton, toff))
                c, s = math.cos(theta), math.sin(theta)
                if abs(s) < tol:
                    continue
                rotated = True
                for A in mats:
                    rot_rows(A, p, q, c, s)
                    rot_cols(A, p, q, c, s)
                rot_cols(V, p, q, c, s)
        if not rotated:
            converged = True
            break
    return V, converged, sweeps
