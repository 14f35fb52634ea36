"""Nearest-point maps onto the constraint sets of the problem.

All distances are Frobenius. The fixed-spectrum set is nonconvex, so
:func:`project_spectrum` returns one of possibly several nearest points;
the other sets are convex and their projections are unique.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_matrix
from .errors import IndexOutOfBounds, LengthMismatch, NotSquare, ShapeMismatch
from .feasibility import as_spectrum
from .svd import singular_values_only, thin_svd


@dataclass(frozen=True)
class EntryConstraint:
    """Prescribed values at 0-based (row, col) positions."""

    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray

    @classmethod
    def from_triples(cls, triples) -> "EntryConstraint":
        triples = list(triples)
        if not triples:
            return cls.empty()
        r, c, v = zip(*triples)
        return cls.create(r, c, v)

    @classmethod
    def create(cls, rows, cols, values) -> "EntryConstraint":
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        values = np.asarray(values, dtype=np.float64).ravel()
        if not rows.size == cols.size == values.size:
            raise LengthMismatch("rows, cols and values must have equal length")
        if np.any(rows < 0) or np.any(cols < 0):
            raise IndexOutOfBounds("entry indices must be nonnegative")
        if len(set(zip(rows.tolist(), cols.tolist()))) != rows.size:
            raise ValueError("duplicate positions in entry constraint")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("prescribed values must be finite and nonnegative")
        return cls(rows, cols, values)

    @classmethod
    def empty(cls) -> "EntryConstraint":
        return cls(np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0))

    @classmethod
    def diagonal(cls, d) -> "EntryConstraint":
        d = np.asarray(d, dtype=np.float64).ravel()
        idx = np.arange(d.size)
        return cls.create(idx, idx, d)

    def __len__(self) -> int:
        return int(self.values.size)

    def check_bounds(self, shape) -> None:
        m, n = shape
        if len(self) and (self.rows.max() >= m or self.cols.max() >= n):
            raise IndexOutOfBounds(f"entry constraint reaches outside a {m}x{n} matrix")

    def mirrored(self) -> "EntryConstraint":
        """Add (j, i) for every (i, j); conflicting values raise."""
        table = {}
        for i, j, v in zip(self.rows.tolist(), self.cols.tolist(), self.values.tolist()):
            for key in ((i, j), (j, i)):
                if table.setdefault(key, v) != v:
                    raise ValueError(f"symmetric constraint conflict at {key}")
        keys = sorted(table)
        return EntryConstraint.create([k[0] for k in keys], [k[1] for k in keys],
                                      [table[k] for k in keys])


@dataclass(frozen=True)
class ConstraintSetSpec:
    shape: tuple[int, int]
    spectrum: np.ndarray
    entry_constraint: EntryConstraint | None = None
    nonnegative: bool = True
    symmetric: bool = False

    def __post_init__(self):
        m, n = self.shape
        if m < n or n < 1:
            raise ShapeMismatch(f"need m >= n >= 1, got shape {self.shape}")
        object.__setattr__(self, "spectrum", as_spectrum(self.spectrum))
        if self.spectrum.size != n:
            raise LengthMismatch(f"spectrum has {self.spectrum.size} values, expected {n}")
        if self.symmetric and m != n:
            raise NotSquare("symmetric problems need a square shape")
        ec = self.entry_constraint
        if ec is not None:
            ec.check_bounds(self.shape)
            if self.symmetric:
                object.__setattr__(self, "entry_constraint", ec.mirrored())


def project_spectrum(A, sigma, right_guess=None) -> np.ndarray:
    """Nearest matrix to ``A`` whose singular values are ``sigma``."""
    A = as_matrix(A)
    sigma = as_spectrum(sigma)
    if sigma.size != A.shape[1]:
        raise LengthMismatch(f"need {A.shape[1]} singular values, got {sigma.size}")
    U, _, V = thin_svd(A, right_guess)
    return (U * sigma) @ V.T


def project_nonnegative(A) -> np.ndarray:
    return np.maximum(as_matrix(A), 0.0)


def project_entries(A, constraint: EntryConstraint | None) -> np.ndarray:
    out = as_matrix(A).copy()
    if constraint is None or not len(constraint):
        return out
    constraint.check_bounds(out.shape)
    out[constraint.rows, constraint.cols] = constraint.values
    return out


def project_symmetric(A) -> np.ndarray:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"symmetric projection needs a square matrix, got {A.shape}")
    return (A + A.T) / 2


def project_convex(A, spec: ConstraintSetSpec) -> np.ndarray:
    """Projection onto the intersection of the convex sets in ``spec``.

    The symmetric, nonnegative and entry sets decouple over symmetric
    entry pairs, so averaging, then clamping, then overwriting prescribed
    values yields the exact nearest point of the intersection.
    """
    X = as_matrix(A)
    if spec.symmetric:
        X = (X + X.T) / 2
    if spec.nonnegative:
        X = np.maximum(X, 0.0)
    return project_entries(X, spec.entry_constraint)


@dataclass(frozen=True)
class Residuals:
    spectrum_residual: float
    negativity: float
    entry_residual: float
    asymmetry: float | None = None

    def as_dict(self) -> dict:
        out = {
            "spectrum_residual": self.spectrum_residual,
            "negativity": self.negativity,
            "entry_residual": self.entry_residual,
        }
        if self.asymmetry is not None:
            out["asymmetry"] = self.asymmetry
        return out


def project_membership_residuals(A, spec: ConstraintSetSpec) -> Residuals:
    A = as_matrix(A)
    if A.shape != tuple(spec.shape):
        raise ShapeMismatch(f"matrix shape {A.shape} differs from problem shape {spec.shape}")
    rho = singular_values_only(A)
    sigma = spec.spectrum
    scale = float(np.linalg.norm(sigma)) or 1.0
    ec = spec.entry_constraint
    entry = 0.0
    if ec is not None and len(ec):
        entry = float(np.max(np.abs(A[ec.rows, ec.cols] - ec.values)))
    return Residuals(
        spectrum_residual=float(np.linalg.norm(rho - sigma)) / scale,
        negativity=float(np.linalg.norm(np.minimum(A, 0.0))),
        entry_residual=entry,
        asymmetry=float(np.linalg.norm(A - A.T)) / 2 if spec.symmetric else None,
    )
