"""Command-line front end.

    nisvp solve PROBLEM.json [--out PATH] [--report PATH]
    nisvp check PROBLEM.json
    nisvp construct2x2 --sigma S1 S2 --diag D1 D2
    nisvp bench [--sizes N ...] [--trials N] [--seed N] [--out PATH]

Exit codes: 0 success/feasible, 1 usage or input error, 2 solver budget
exhausted, 3 infeasible.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import NisvpError, NegativeDiagonal
from .feasibility import (
    Nn2x2Verdict,
    nn2x2_construct,
    nn2x2_feasible,
    sing_thompson_feasible,
    symmetric_trace_signs,
)
from .harness import BenchmarkSpec, rows_to_csv, run_benchmark
from .projections import ConstraintSetSpec, EntryConstraint
from .solver import SolverConfig, solve

log = logging.getLogger("nisvp")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_INFEASIBLE = 3

SEED_ENV = "NISVP_SEED"


class InputError(Exception):
    """Bad problem file or flag; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- matrix CSV ----------------------------------------------------------

def format_matrix_csv(A: np.ndarray) -> str:
    return "".join(",".join(format(x, ".17g") for x in row) + "\n" for row in np.asarray(A))


def read_matrix_csv(path) -> np.ndarray:
    try:
        A = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except (OSError, ValueError) as exc:
        raise InputError(f"{path}: cannot read matrix: {exc}") from exc
    return A


# -- problem files -------------------------------------------------------

@dataclass
class Problem:
    spec: ConstraintSetSpec
    sigma_raw: np.ndarray
    diagonal: np.ndarray | None
    solver: dict
    initial: np.ndarray | None


def _env_seed() -> int | None:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _numbers(value, what) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise InputError(f"{what} must be a non-empty list of numbers")
    try:
        arr = np.asarray(value, dtype=np.float64)
    except (TypeError, ValueError):
        raise InputError(f"{what} must contain only numbers") from None
    if arr.ndim != 1 or not np.all(np.isfinite(arr)):
        raise InputError(f"{what} must be a flat list of finite numbers")
    return arr


def load_problem(path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    try:
        return _build_problem(data, path)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except (NisvpError, ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _build_problem(data: dict, path: Path) -> Problem:
    shape = data.get("shape")
    if (not isinstance(shape, list) or len(shape) != 2
            or not all(isinstance(k, int) and k >= 1 for k in shape)):
        raise InputError("'shape' must be [m, n] with positive integers")
    m, n = shape
    sigma = _numbers(data.get("sigma"), "'sigma'")
    if np.any(sigma < 0):
        raise InputError("'sigma' must be nonnegative")
    if np.any(np.diff(sigma) > 0):
        log.warning("sigma is not in descending order; sorting it")

    constraint = data.get("constraint")
    symmetric = bool(data.get("symmetric", False))
    diagonal = None
    entries = None
    if constraint is not None:
        if not isinstance(constraint, dict) or len(constraint) != 1:
            raise InputError("'constraint' must have exactly one of "
                             "'diagonal', 'entries', 'symmetric_diagonal'")
        (kind, value), = constraint.items()
        if kind in ("diagonal", "symmetric_diagonal"):
            diagonal = _numbers(value, f"'{kind}'")
            if np.any(diagonal < 0):
                raise InputError(f"'{kind}' entries must be nonnegative "
                                 "(nonnegative solutions need a nonnegative diagonal)")
            if diagonal.size != n:
                raise InputError(f"'{kind}' has {diagonal.size} values, expected {n}")
            entries = EntryConstraint.diagonal(diagonal)
            symmetric = symmetric or kind == "symmetric_diagonal"
        elif kind == "entries":
            if not isinstance(value, list):
                raise InputError("'entries' must be a list of [i, j, value] triples (1-based)")
            triples = []
            for t, item in enumerate(value):
                if (not isinstance(item, list) or len(item) != 3
                        or not all(isinstance(k, int) for k in item[:2])):
                    raise InputError(f"'entries'[{t}] must be [i, j, value] with integer i, j")
                i, j, v = item
                if not (1 <= i <= m and 1 <= j <= n):
                    raise InputError(f"'entries'[{t}] position ({i}, {j}) is outside {m}x{n}")
                if not isinstance(v, (int, float)) or v < 0:
                    raise InputError(f"'entries'[{t}] value must be a nonnegative number")
                triples.append((i - 1, j - 1, float(v)))
            entries = EntryConstraint.from_triples(triples)
            d_pos = {(i, j): v for i, j, v in triples if i == j}
            if all((i, i) in d_pos for i in range(n)):
                diagonal = np.array([d_pos[(i, i)] for i in range(n)])
        else:
            raise InputError(f"unknown constraint kind {kind!r}")

    if sigma.size != n:
        raise InputError(f"'sigma' has {sigma.size} values, expected n = {n}")
    spec = ConstraintSetSpec((m, n), sigma, entries,
                             nonnegative=bool(data.get("nonnegative", True)),
                             symmetric=symmetric)

    solver = data.get("solver", {}) or {}
    if not isinstance(solver, dict):
        raise InputError("'solver' must be an object")
    unknown = set(solver) - {"epsilon", "max_iters", "max_restarts", "seed", "stagnation_window"}
    if unknown:
        raise InputError(f"unknown solver option(s): {', '.join(sorted(unknown))}")

    initial = None
    if data.get("initial") is not None:
        init_path = Path(data["initial"])
        if not init_path.is_absolute():
            init_path = path.parent / init_path
        initial = read_matrix_csv(init_path)
        if initial.shape != (m, n):
            raise InputError(f"initial matrix is {initial.shape[0]}x{initial.shape[1]}, "
                             f"expected {m}x{n}")
    return Problem(spec, sigma, diagonal, solver, initial)


def _solver_config(problem: Problem, seed_flag: int | None) -> SolverConfig:
    opts = dict(problem.solver)
    env = _env_seed()
    if seed_flag is not None:
        opts["seed"] = seed_flag
    elif env is not None:
        opts["seed"] = env
    try:
        return SolverConfig(**opts)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad solver options: {exc}") from exc


def _write(text: str, dest: str | None, to_stderr: bool = False) -> None:
    if dest is None or dest == "-":
        (sys.stderr if to_stderr else sys.stdout).write(text)
    else:
        Path(dest).write_text(text)


# -- subcommands ---------------------------------------------------------

def cmd_solve(args) -> int:
    problem = load_problem(args.problem)
    config = _solver_config(problem, args.seed)
    try:
        report = solve(problem.spec, config, problem.initial)
    except NisvpError as exc:
        print(f"error: solver failed: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    _write(format_matrix_csv(report.final_matrix), args.out)
    summary = {
        "status": report.status.value,
        "iterations": report.iterations,
        "restarts_used": report.restarts_used,
        "residuals": report.residuals.as_dict(),
        "shape": list(problem.spec.shape),
        "seed": config.seed,
    }
    if not args.no_timing:
        summary["wall_time"] = report.wall_time
    _write(json.dumps(summary, indent=2, sort_keys=True) + "\n", args.report, to_stderr=True)
    return EXIT_OK if report.converged else EXIT_BUDGET


def cmd_check(args) -> int:
    problem = load_problem(args.problem)
    m, n = problem.spec.shape
    if problem.diagonal is None:
        raise InputError("check needs a prescribed diagonal "
                         "(a 'diagonal' constraint or entries covering the diagonal)")
    st = sing_thompson_feasible(problem.sigma_raw, problem.diagonal, square=(m == n))
    parts = ["real: feasible" if st.feasible else "real: infeasible"]
    feasible = st.feasible
    if m == n == 2:
        verdict = nn2x2_feasible(problem.sigma_raw, problem.diagonal)
        if verdict is Nn2x2Verdict.INFEASIBLE:
            parts.append("nonnegative(2×2): infeasible")
            feasible = False
        else:
            tag = "DetNonneg" if verdict is Nn2x2Verdict.FEASIBLE_CASE1 else "DetNeg"
            parts.append(f"nonnegative(2×2): feasible ({verdict.value}, {tag})")
    if problem.spec.symmetric and n <= 20:
        signs = symmetric_trace_signs(problem.sigma_raw, float(problem.diagonal.sum()))
        if signs is None:
            parts.append("symmetric: infeasible (no signed sum of sigma equals the trace)")
            feasible = False
        else:
            parts.append("symmetric: trace test passed")
    print("; ".join(parts))
    if not st.feasible:
        violated = [f"k={k}" for k in st.violated_prefix]
        if st.tail_violated:
            violated.append("tail")
        print("violated: " + ", ".join(violated))
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def cmd_construct2x2(args) -> int:
    try:
        verdict = nn2x2_feasible(args.sigma, args.diag)
    except NegativeDiagonal as exc:
        raise InputError(str(exc)) from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if not verdict.feasible:
        print(f"infeasible: no nonnegative 2×2 matrix has singular values {args.sigma} "
              f"and diagonal {args.diag}")
        return EXIT_INFEASIBLE
    sol = nn2x2_construct(args.sigma, args.diag)
    sys.stdout.write(format_matrix_csv(sol.matrix))
    return EXIT_OK


def cmd_bench(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    try:
        config = SolverConfig(epsilon=args.epsilon, max_iters=args.max_iters,
                              max_restarts=args.max_restarts)
        spec = BenchmarkSpec(sizes=tuple(args.sizes), trials=args.trials,
                             lo=args.lo, hi=args.hi, config=config,
                             seed=42 if seed is None else seed)
        if spec.lo < 0 or spec.lo >= spec.hi:
            raise ValueError(f"need 0 <= lo < hi, got [{spec.lo}, {spec.hi}]")
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rows = run_benchmark(spec, jobs=args.jobs)
    _write(rows_to_csv(rows, timing=not args.no_timing), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nisvp", description="Nonnegative matrices with prescribed "
                "singular values and entries.")
    p.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({_kernels.BACKEND})")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve a problem file by successive projections")
    s.add_argument("problem")
    s.add_argument("--out", help="solution CSV (default: stdout)")
    s.add_argument("--report", help="JSON report (default: stderr)")
    s.add_argument("--seed", type=int, help=f"overrides ${SEED_ENV} and the file")
    s.add_argument("--no-timing", action="store_true", help="omit wall time from the report")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="feasibility tests for a diagonal problem")
    c.add_argument("problem")
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("construct2x2", help="closed-form nonnegative 2x2 construction")
    k.add_argument("--sigma", type=float, nargs=2, required=True, metavar=("S1", "S2"))
    k.add_argument("--diag", type=float, nargs=2, required=True, metavar=("D1", "D2"))
    k.set_defaults(func=cmd_construct2x2)

    b = sub.add_parser("bench", help="random-instance benchmark, CSV output")
    b.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 20, 100])
    b.add_argument("--trials", type=int, default=100)
    b.add_argument("--seed", type=int)
    b.add_argument("--lo", type=float, default=0.0)
    b.add_argument("--hi", type=float, default=10.0)
    b.add_argument("--epsilon", type=float, default=1e-14)
    b.add_argument("--max-iters", type=int, default=100_000)
    b.add_argument("--max-restarts", type=int, default=5)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out", help="CSV destination (default: stdout)")
    b.add_argument("--no-timing", action="store_true",
                   help="write time columns as 0 for byte-identical reruns")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    logging.basicConfig(format="%(name)s: %(levelname)s: %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
