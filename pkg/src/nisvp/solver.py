"""Successive projections between the fixed-spectrum set and the convex
constraint sets, with stagnation-triggered random restarts."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from .core import as_matrix, make_rng, random_nonnegative
from .errors import NoConvergence, NoTrace, ShapeMismatch
from .projections import (
    ConstraintSetSpec,
    Residuals,
    project_convex,
    project_membership_residuals,
)
from .svd import thin_svd

# Stagnation means the relative change failed to drop below this fraction
# of its best value for a whole window of iterations.
IMPROVEMENT_FACTOR = 0.999
# Warm-started SVDs reuse the previous right singular vectors; a cold
# factorization every so often keeps their orthogonality from drifting.
COLD_SVD_EVERY = 64


class Status(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERS = "MaxIters"
    STAGNATED = "Stagnated"


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 1e-14
    max_iters: int = 100_000
    max_restarts: int = 5
    stagnation_window: int = 500
    record_trace: bool = False
    seed: int = 0
    warm_start: bool = True

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.max_restarts < 0 or self.stagnation_window < 1:
            raise ValueError("max_restarts must be >= 0 and stagnation_window >= 1")


@dataclass(frozen=True)
class SolveReport:
    status: Status
    iterations: int
    restarts_used: int
    final_matrix: np.ndarray
    residuals: Residuals
    wall_time: float
    distance_trace: tuple[float, ...] | None = None
    segment_starts: tuple[int, ...] = field(default=(0,))

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED


def _spectrum_step(X, sigma, V, rng):
    """Project onto the fixed-spectrum set; one perturbed retry on failure."""
    try:
        U, _, V = thin_svd(X, V)
    except NoConvergence:
        noise = rng.standard_normal(X.shape) * (1e-12 * (np.linalg.norm(X) or 1.0))
        U, _, V = thin_svd(X + noise)
    return (U * sigma) @ V.T, V


def solve(spec: ConstraintSetSpec, config: SolverConfig | None = None,
          initial=None) -> SolveReport:
    """Find a matrix in the intersection of the fixed-spectrum set and the
    convex constraint sets of ``spec`` by alternating projections.

    Each iteration takes the SVD of the current iterate, replaces its
    singular values by the target, then projects back onto the convex sets.
    The run stops once the relative distance between the two projections
    drops below ``config.epsilon``.
    """
    config = config or SolverConfig()
    t0 = time.perf_counter()
    rng = make_rng(config.seed)
    m, n = spec.shape
    sigma = spec.spectrum
    if initial is None:
        X = random_nonnegative(m, n, 0.0, 10.0, rng)
    else:
        X = as_matrix(initial, "initial")
        if X.shape != (m, n):
            raise ShapeMismatch(f"initial matrix is {X.shape}, problem is {m}x{n}")
    Xhat = project_convex(X, spec)

    iterations = restarts = 0
    trace: list[float] = []
    starts = [0]
    while True:
        best, since_best = np.inf, 0
        V = None
        status = Status.MAX_ITERS
        while iterations < config.max_iters:
            if not config.warm_start or iterations % COLD_SVD_EVERY == 0:
                V = None
            Xm, V = _spectrum_step(Xhat, sigma, V, rng)
            Xhat = project_convex(Xm, spec)
            iterations += 1
            dist = float(np.linalg.norm(Xm - Xhat))
            if config.record_trace:
                trace.append(dist)
            ref = float(np.linalg.norm(Xm))
            if ref == 0.0:
                # only the zero spectrum lands here; restarting cannot help it
                status = Status.CONVERGED if dist == 0.0 else Status.STAGNATED
                break
            change = dist / ref
            if change < config.epsilon:
                status = Status.CONVERGED
                break
            if change < IMPROVEMENT_FACTOR * best:
                best, since_best = change, 0
            else:
                since_best += 1
                if since_best >= config.stagnation_window:
                    status = Status.STAGNATED
                    break
        if (status is Status.STAGNATED and restarts < config.max_restarts
                and iterations < config.max_iters and np.any(sigma > 0)):
            restarts += 1
            Xhat = project_convex(random_nonnegative(m, n, 0.0, 10.0, rng), spec)
            starts.append(len(trace))
            continue
        break

    return SolveReport(
        status=status,
        iterations=iterations,
        restarts_used=restarts,
        final_matrix=Xhat,
        residuals=project_membership_residuals(Xhat, spec),
        wall_time=time.perf_counter() - t0,
        distance_trace=tuple(trace) if config.record_trace else None,
        segment_starts=tuple(starts),
    )


def distance_trace_is_monotone(report: SolveReport, slack: float = 1e-12):
    """Check that the distance between successive projections never grows
    inside a restart segment. Returns ``(ok, first_bad_index)``."""
    if report.distance_trace is None:
        raise NoTrace("report was produced without record_trace=True")
    trace = np.asarray(report.distance_trace)
    bounds = list(report.segment_starts) + [trace.size]
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        seg = trace[lo:hi]
        bad = np.flatnonzero(seg[1:] > seg[:-1] + slack)
        if bad.size:
            return False, int(lo + bad[0] + 1)
    return True, None
