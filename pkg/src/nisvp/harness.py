"""Random-instance benchmark and the brute-force 2x2 oracle."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import random_nonnegative
from .feasibility import as_spectrum
from .projections import ConstraintSetSpec, EntryConstraint
from .solver import SolverConfig, solve
from .svd import singular_values_only

CSV_HEADER = ("n", "minit", "maxit", "aveit", "mint", "maxt", "avet", "success_rate")


@dataclass(frozen=True)
class BenchmarkSpec:
    sizes: tuple[int, ...] = (5, 10, 20, 100)
    trials: int = 100
    lo: float = 0.0
    hi: float = 10.0
    config: SolverConfig = field(default_factory=SolverConfig)
    seed: int = 42

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.sizes or any(n < 1 for n in self.sizes):
            raise ValueError(f"sizes must be positive, got {self.sizes}")


@dataclass(frozen=True)
class TrialRecord:
    n: int
    trial: int
    iterations: int
    restarts: int
    wall_time: float
    converged: bool


@dataclass(frozen=True)
class BenchmarkRow:
    n: int
    minit: int
    maxit: int
    aveit: float
    mint: float
    maxt: float
    avet: float
    success_rate_percent: float


def trial_seeds(seed: int, n: int, trial: int) -> tuple[int, int, int]:
    """Independent (instance, initial, solver) seeds for one trial.

    Derived from (seed, n, trial) only, so scheduling order is irrelevant.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(n, trial))
    return tuple(int(s) for s in ss.generate_state(3, dtype=np.uint64))


def make_instance(n: int, lo: float, hi: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Spectrum and diagonal of a random nonnegative matrix (always feasible)."""
    G = random_nonnegative(n, n, lo, hi, seed)
    return singular_values_only(G), np.diag(G).copy()


def run_trial(spec: BenchmarkSpec, n: int, trial: int) -> TrialRecord:
    inst_seed, init_seed, solver_seed = trial_seeds(spec.seed, n, trial)
    sigma, d = make_instance(n, spec.lo, spec.hi, inst_seed)
    problem = ConstraintSetSpec((n, n), sigma, EntryConstraint.diagonal(d))
    initial = random_nonnegative(n, n, spec.lo, spec.hi, init_seed)
    report = solve(problem, replace(spec.config, seed=solver_seed), initial)
    return TrialRecord(n, trial, report.iterations, report.restarts_used,
                       report.wall_time, report.converged)


def aggregate(n: int, records: list[TrialRecord]) -> BenchmarkRow:
    its = np.array([r.iterations for r in records])
    times = np.array([r.wall_time for r in records])
    ok = sum(r.converged for r in records)
    return BenchmarkRow(
        n=n,
        minit=int(its.min()),
        maxit=int(its.max()),
        aveit=float(its.mean()),
        mint=float(times.min()),
        maxt=float(times.max()),
        avet=float(times.mean()),
        success_rate_percent=100.0 * ok / len(records),
    )


def run_benchmark(spec: BenchmarkSpec, jobs: int = 1, return_records: bool = False):
    """Run ``spec.trials`` random feasible problems per size.

    Returns the list of :class:`BenchmarkRow`, plus the per-trial records
    when ``return_records`` is set.
    """
    rows, all_records = [], []
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        for n in spec.sizes:
            records = list(pool.map(lambda t, n=n: run_trial(spec, n, t), range(spec.trials)))
            rows.append(aggregate(n, records))
            all_records.extend(records)
    return (rows, all_records) if return_records else rows


def rows_to_csv(rows: list[BenchmarkRow], timing: bool = True) -> str:
    """CSV text. With ``timing=False`` the time columns are written as 0 so
    that reruns are byte-identical."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        t = (r.mint, r.maxt, r.avet) if timing else (0.0, 0.0, 0.0)
        w.writerow([r.n, r.minit, r.maxit, f"{r.aveit:.2f}",
                    *(f"{x:.6f}" for x in t), f"{r.success_rate_percent:g}"])
    return buf.getvalue()


def _singular_values_2x2(a, b, c, d):
    """Closed-form singular values of [[a, b], [c, d]], broadcasting."""
    T = a * a + b * b + c * c + d * d
    D = np.abs(a * d - b * c)
    disc = np.sqrt(np.maximum(T * T - 4 * D * D, 0.0))
    s1 = np.sqrt((T + disc) / 2)
    s2 = np.divide(D, s1, out=np.zeros_like(s1), where=s1 > 0)
    return s1, s2


@dataclass(frozen=True)
class OracleResult:
    b: float
    c: float
    residual: float

    def within(self, tolerance: float) -> bool:
        return self.residual <= tolerance


def oracle_2x2_search(sigma, d, grid_step: float = 1e-3, tolerance: float | None = None,
                      regime: str | None = None) -> OracleResult:
    """Exhaustive grid search over b, c in [0, s1 + s2] minimizing the
    singular-value mismatch of [[d1, b], [c, d2]].

    ``regime`` optionally restricts the grid to ``"DetNonneg"`` (bc <= d1 d2)
    or ``"DetNeg"`` (bc > d1 d2). ``tolerance`` is informational: it is the
    threshold :meth:`OracleResult.within` compares against when given.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    s1, s2 = as_spectrum(sigma)
    d1, d2 = (float(x) for x in np.asarray(d, dtype=np.float64).ravel())
    grid = np.arange(0.0, s1 + s2 + grid_step / 2, grid_step)
    best = (np.inf, 0.0, 0.0)
    chunk = max(1, 2_000_000 // grid.size)
    for start in range(0, grid.size, chunk):
        B = grid[start:start + chunk, None]
        C = grid[None, :]
        r1, r2 = _singular_values_2x2(d1, B, C, d2)
        res = np.hypot(r1 - s1, r2 - s2)
        if regime == "DetNonneg":
            res = np.where(B * C <= d1 * d2, res, np.inf)
        elif regime == "DetNeg":
            res = np.where(B * C > d1 * d2, res, np.inf)
        elif regime is not None:
            raise ValueError(f"unknown regime {regime!r}")
        k = np.unravel_index(np.argmin(res), res.shape)
        if res[k] < best[0]:
            best = (float(res[k]), float(B[k[0], 0]), float(C[0, k[1]]))
    return OracleResult(b=best[1], c=best[2], residual=best[0])
