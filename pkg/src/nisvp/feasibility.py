"""Existence tests for matrices with given singular values and diagonal.

* :func:`sing_thompson_feasible` - real matrices of any size.
* :func:`nn2x2_feasible` / :func:`nn2x2_construct` - nonnegative 2x2
  matrices, exact iff test plus closed-form construction.
* :func:`manifold_dimension` - dimension of the fixed-singular-value set.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadMultiplicities, InfeasibleInput, LengthMismatch, NegativeDiagonal

# Inequalities within this (scaled) distance of being tight count as satisfied.
BOUNDARY_TOL = 1e-12


def as_spectrum(sigma) -> np.ndarray:
    """Validate a singular value list and return it sorted descending."""
    s = np.asarray(sigma, dtype=np.float64).ravel()
    if s.size == 0:
        raise LengthMismatch("spectrum must be non-empty")
    if not np.all(np.isfinite(s)) or np.any(s < 0):
        raise ValueError("singular values must be finite and nonnegative")
    return -np.sort(-s)


def _tol(*values) -> float:
    return BOUNDARY_TOL * max(1.0, *(abs(float(v)) for v in values))


@dataclass(frozen=True)
class SingThompsonResult:
    feasible: bool
    violated_prefix: tuple[int, ...] = field(default=())  # k values (1-based)
    tail_violated: bool = False

    def __bool__(self) -> bool:
        return self.feasible


def sing_thompson_feasible(sigma, d, square: bool = True) -> SingThompsonResult:
    """Test whether a real matrix with singular values ``sigma`` and
    diagonal ``d`` (in any order) exists.

    With ``square=False`` the test is for an m-by-n matrix with m > n, where
    only the prefix-sum inequalities apply.
    """
    s = as_spectrum(sigma)
    a = np.asarray(d, dtype=np.float64).ravel()
    if a.size != s.size:
        raise LengthMismatch(f"sigma has {s.size} values but d has {a.size}")
    a = -np.sort(-np.abs(a))
    cs, ca = np.cumsum(s), np.cumsum(a)
    violated = tuple(
        k + 1 for k in range(s.size) if ca[k] > cs[k] + _tol(ca[k], cs[k])
    )
    tail = False
    if square:
        lhs = ca[-1] - 2 * a[-1]
        rhs = cs[-1] - 2 * s[-1]
        tail = bool(lhs > rhs + _tol(ca[-1], cs[-1]))
    return SingThompsonResult(not violated and not tail, violated, tail)


class Nn2x2Verdict(enum.Enum):
    FEASIBLE_CASE1 = "FeasibleCase1"  # bc <= d1 d2 (det >= 0)
    FEASIBLE_CASE2 = "FeasibleCase2"  # bc >  d1 d2 (det < 0)
    INFEASIBLE = "Infeasible"

    @property
    def feasible(self) -> bool:
        return self is not Nn2x2Verdict.INFEASIBLE


def _sorted_pair(values, name):
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size != 2:
        raise LengthMismatch(f"{name} must have exactly 2 values, got {v.size}")
    hi, lo = float(max(v)), float(min(v))
    return hi, lo


def _pair_inputs(sigma, d):
    s1, s2 = _sorted_pair(sigma, "sigma")
    if s2 < 0:
        raise ValueError("singular values must be nonnegative")
    dv = np.asarray(d, dtype=np.float64).ravel()
    if dv.size == 2 and np.any(dv < 0):
        raise NegativeDiagonal(f"diagonal entries must be nonnegative, got {dv.tolist()}")
    d1, d2 = _sorted_pair(d, "d")
    return s1, s2, d1, d2


def nn2x2_feasible(sigma, d) -> Nn2x2Verdict:
    """Exact existence test for a nonnegative [[d1, b], [c, d2]].

    Case 1 (det >= 0) needs s1 s2 <= d1 d2, s1 + s2 >= d1 + d2 and
    s1 - s2 >= d1 - d2. Case 2 (det < 0) needs s1 - s2 >= d1 + d2.
    Case 1 is reported when both hold.
    """
    s1, s2, d1, d2 = _pair_inputs(sigma, d)
    prod_s, prod_d = s1 * s2, d1 * d2
    case1 = (
        prod_s <= prod_d + _tol(prod_s, prod_d)
        and s1 + s2 >= d1 + d2 - _tol(s1, d1)
        and s1 - s2 >= d1 - d2 - _tol(s1, d1)
    )
    if case1:
        return Nn2x2Verdict.FEASIBLE_CASE1
    if s1 - s2 >= d1 + d2 - _tol(s1, d1):
        return Nn2x2Verdict.FEASIBLE_CASE2
    return Nn2x2Verdict.INFEASIBLE


@dataclass(frozen=True)
class TwoByTwoSolution:
    d1: float
    d2: float
    b: float
    c: float
    case_tag: str  # "DetNonneg" or "DetNeg"

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.d1, self.b], [self.c, self.d2]])


def nn2x2_construct(sigma, d) -> TwoByTwoSolution:
    """Closed-form nonnegative 2x2 matrix with the given singular values and
    diagonal. Returns the convention b >= c; the transpose is equally valid.

    The diagonal is kept in the order given. b and c solve
    ``b^2 + c^2 = S`` and ``bc = P`` with ``S = s1^2 + s2^2 - d1^2 - d2^2``.
    """
    verdict = nn2x2_feasible(sigma, d)
    if not verdict.feasible:
        raise InfeasibleInput(f"no nonnegative 2x2 matrix has sigma={list(sigma)}, d={list(d)}")
    s1, s2, _, _ = _pair_inputs(sigma, d)
    d1, d2 = (float(x) for x in np.asarray(d, dtype=np.float64).ravel())
    S = s1 * s1 + s2 * s2 - d1 * d1 - d2 * d2
    if verdict is Nn2x2Verdict.FEASIBLE_CASE1:
        P = max(d1 * d2 - s1 * s2, 0.0)
        tag = "DetNonneg"
    else:
        P = s1 * s2 + d1 * d2
        tag = "DetNeg"
    plus = math.sqrt(max(S + 2 * P, 0.0))
    minus = math.sqrt(max(S - 2 * P, 0.0))
    return TwoByTwoSolution(d1, d2, (plus + minus) / 2, (plus - minus) / 2, tag)


def manifold_dimension(m: int, n: int, multiplicities) -> int:
    """Dimension of the set of m-by-n matrices sharing a spectrum of
    strictly positive singular values with the given multiplicities."""
    mult = [int(k) for k in multiplicities]
    if m < n or n < 1:
        raise BadMultiplicities(f"need m >= n >= 1, got m={m}, n={n}")
    if not mult or any(k < 1 for k in mult) or sum(mult) != n:
        raise BadMultiplicities(f"multiplicities {mult} must be positive and sum to n={n}")
    return n * (m - 1) - sum(k * (k - 1) // 2 for k in mult)


def symmetric_trace_signs(sigma, trace: float, max_n: int = 20):
    """Eigenvalue signs making a symmetric matrix with singular values
    ``sigma`` have the given trace, or None if no sign pattern works.

    A symmetric matrix has eigenvalues +-sigma_i, so its trace must equal
    some signed sum of the singular values. Returns a tuple of +1/-1 aligned
    with ``sigma`` sorted descending (the pattern closest to ``trace``).
    """
    s = as_spectrum(sigma)
    if s.size > max_n:
        raise ValueError(f"sign enumeration limited to n <= {max_n}, got {s.size}")
    signs = 1 - 2 * ((np.arange(2 ** s.size)[:, None] >> np.arange(s.size)) & 1)
    gaps = np.abs(signs @ s - trace)
    k = int(np.argmin(gaps))
    if gaps[k] > _tol(s.sum(), trace):
        return None
    return tuple(int(x) for x in signs[k])
