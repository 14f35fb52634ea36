"""Dense matrix helpers, norms and seeded random generation.

Matrices are plain 2-D ``float64`` numpy arrays. Every public function
validates shapes at call time.
"""

from __future__ import annotations

import numpy as np

from .errors import BadRange, ShapeMismatch, ZeroDenominator

SEED_MAX = 2**64 - 1


def as_matrix(A, name: str = "A") -> np.ndarray:
    """Return ``A`` as a finite 2-D float64 array (copying only if needed)."""
    arr = np.asarray(A, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeMismatch(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def make_rng(seed: int | np.random.Generator) -> np.random.Generator:
    """PCG64 generator for an unsigned 64-bit seed.

    PCG64 is numpy's documented default bit generator; its raw stream is
    stable across platforms, so identical seeds reproduce identical draws.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise BadRange(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def frobenius_norm(A) -> float:
    A = as_matrix(A)
    return float(np.sqrt(np.sum(A * A)))


def relative_change(A_old, A_new) -> float:
    """``||A_old - A_new||_F / ||A_old||_F``."""
    A_old = as_matrix(A_old, "A_old")
    A_new = as_matrix(A_new, "A_new")
    if A_old.shape != A_new.shape:
        raise ShapeMismatch(f"shapes differ: {A_old.shape} vs {A_new.shape}")
    denom = frobenius_norm(A_old)
    if denom == 0.0:
        raise ZeroDenominator("reference matrix has zero Frobenius norm")
    return frobenius_norm(A_old - A_new) / denom


def random_nonnegative(m: int, n: int, lo: float = 0.0, hi: float = 10.0,
                       seed: int | np.random.Generator = 0) -> np.ndarray:
    """m-by-n matrix with i.i.d. entries uniform on ``[lo, hi]``."""
    if m < 1 or n < 1:
        raise ShapeMismatch(f"dimensions must be positive, got {m}x{n}")
    if lo < 0 or lo >= hi:
        raise BadRange(f"need 0 <= lo < hi, got [{lo}, {hi}]")
    rng = make_rng(seed)
    return lo + (hi - lo) * rng.random((m, n))


def matmul(A, B) -> np.ndarray:
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[1] != B.shape[0]:
        raise ShapeMismatch(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def transpose(A) -> np.ndarray:
    return as_matrix(A).T.copy()


def trace(A) -> float:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatch(f"trace needs a square matrix, got {A.shape}")
    return float(np.trace(A))
