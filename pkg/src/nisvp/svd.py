"""Singular value decomposition by one-sided Jacobi rotations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import as_matrix
from .errors import NoConvergence, ShapeMismatch

EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class SvdFactors:
    """``A = U @ diag(singular_values) @ V.T`` with U m-by-m, V n-by-n."""

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        n = self.V.shape[0]
        return (self.U[:, :n] * self.singular_values) @ self.V.T


def _complete_orthonormal(Q: np.ndarray, filled: np.ndarray) -> np.ndarray:
    """Fill the columns of ``Q`` where ``filled`` is False with unit vectors
    orthogonal to every filled column.

    Each new vector is the standard basis vector with the largest component
    outside the current span, orthogonalized twice.
    """
    m = Q.shape[0]
    basis = Q[:, filled]
    for j in np.flatnonzero(~filled):
        R = np.eye(m)
        for _ in range(2):
            R -= basis @ (basis.T @ R)
        k = int(np.argmax(np.einsum("ij,ij->j", R, R)))
        e = R[:, k] / np.linalg.norm(R[:, k])
        Q[:, j] = e
        basis = np.column_stack([basis, e])
    return Q


def _jacobi(A: np.ndarray, right_guess: np.ndarray | None, kernel):
    m, n = A.shape
    if m < n:
        raise ShapeMismatch(f"SVD requires m >= n, got {m}x{n}")
    if right_guess is None:
        Wt = np.array(A.T, order="C")
        Vt = np.eye(n)
    else:
        Wt = np.array((A @ right_guess).T, order="C")
        Vt = np.array(right_guess.T, dtype=np.float64, order="C")
    tol = max(m, 2) * EPS
    sweeps = kernel(Wt, Vt, _kernels.round_robin_schedule(n), tol, 30 * max(n, 1))
    if sweeps < 0:
        raise NoConvergence(f"one-sided Jacobi did not converge within {30 * n} sweeps")
    sigma = np.sqrt(np.einsum("ij,ij->i", Wt, Wt))
    order = np.argsort(-sigma, kind="stable")
    return Wt[order].T, sigma[order], Vt[order].T


def _left_vectors(W: np.ndarray, sigma: np.ndarray, full: bool) -> np.ndarray:
    m, n = W.shape
    U = np.zeros((m, m if full else n))
    filled = np.zeros(U.shape[1], dtype=bool)
    nz = sigma > np.finfo(np.float64).tiny
    U[:, :n][:, nz] = W[:, nz] / sigma[nz]
    filled[:n] = nz
    if not filled.all():
        _complete_orthonormal(U, filled)
    return U


def compute_svd(A, right_guess: np.ndarray | None = None, kernel=None) -> SvdFactors:
    """Full SVD of an m-by-n matrix with m >= n, singular values descending.

    ``right_guess`` is an optional orthogonal n-by-n matrix close to the
    right singular vectors; Jacobi then starts from ``A @ right_guess`` and
    usually needs far fewer sweeps. ``kernel`` overrides the sweep kernel
    (used by the backend benchmark and cross-checks).
    """
    A = as_matrix(A)
    W, sigma, V = _jacobi(A, right_guess, kernel or _kernels.jacobi_sweeps)
    return SvdFactors(_left_vectors(W, sigma, full=True), sigma, V)


def thin_svd(A, right_guess: np.ndarray | None = None, kernel=None):
    """(U[:, :n], sigma, V) without completing U beyond n columns."""
    A = as_matrix(A)
    W, sigma, V = _jacobi(A, right_guess, kernel or _kernels.jacobi_sweeps)
    return _left_vectors(W, sigma, full=False), sigma, V


def singular_values_only(A) -> np.ndarray:
    A = as_matrix(A)
    _, sigma, _ = _jacobi(A, None, _kernels.jacobi_sweeps)
    return sigma
