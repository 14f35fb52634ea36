"""Nonnegative matrices with prescribed singular values and entries."""

from ._kernels import BACKEND
from .core import frobenius_norm, random_nonnegative, relative_change
from .feasibility import (
    Nn2x2Verdict,
    manifold_dimension,
    nn2x2_construct,
    nn2x2_feasible,
    sing_thompson_feasible,
    symmetric_trace_signs,
)
from .harness import BenchmarkSpec, oracle_2x2_search, run_benchmark
from .projections import (
    ConstraintSetSpec,
    EntryConstraint,
    project_convex,
    project_entries,
    project_membership_residuals,
    project_nonnegative,
    project_spectrum,
    project_symmetric,
)
from .solver import SolverConfig, SolveReport, Status, distance_trace_is_monotone, solve
from .svd import SvdFactors, compute_svd, singular_values_only, thin_svd

__all__ = [
    "BACKEND",
    "BenchmarkSpec",
    "ConstraintSetSpec",
    "EntryConstraint",
    "Nn2x2Verdict",
    "SolveReport",
    "SolverConfig",
    "Status",
    "SvdFactors",
    "compute_svd",
    "distance_trace_is_monotone",
    "frobenius_norm",
    "manifold_dimension",
    "nn2x2_construct",
    "nn2x2_feasible",
    "oracle_2x2_search",
    "project_convex",
    "project_entries",
    "project_membership_residuals",
    "project_nonnegative",
    "project_spectrum",
    "project_symmetric",
    "random_nonnegative",
    "relative_change",
    "run_benchmark",
    "sing_thompson_feasible",
    "singular_values_only",
    "solve",
    "symmetric_trace_signs",
    "thin_svd",
]
