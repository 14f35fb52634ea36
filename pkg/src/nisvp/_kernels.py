"""One-sided Jacobi sweep kernels.

Two interchangeable implementations of the same cyclic one-sided Jacobi
iteration, both visiting column pairs in round-robin (tournament) order:

* ``jacobi_sweeps_numba``: compiled with numba, one pair at a time.
* ``jacobi_sweeps_numpy``: pure numpy, every round of disjoint pairs
  rotated at once as a vectorized batch.

``jacobi_sweeps`` points at the numba version unless numba is missing or
the environment variable ``NISVP_DISABLE_JIT`` is set to a truthy value.

Both kernels operate in place on ``Wt`` (the working matrix stored with
columns as rows, shape n x m) and ``Vt`` (right rotations, shape n x n),
and return the number of sweeps used, or -1 when the budget ran out.
"""

from __future__ import annotations

import functools
import math
import os

import numpy as np

_FALSY = {"", "0", "false", "no", "off"}

JIT_DISABLED = os.environ.get("NISVP_DISABLE_JIT", "").strip().lower() not in _FALSY

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None


@functools.lru_cache(maxsize=64)
def round_robin_schedule(n: int) -> np.ndarray:
    """Pair schedule of shape (rounds, n_pairs, 2); padding pairs are (-1, -1).

    Every unordered pair (p, q), p < q, appears exactly once per sweep and
    the pairs inside one round are disjoint.
    """
    if n < 2:
        return np.zeros((0, 0, 2), dtype=np.int64)
    players = list(range(n)) + ([-1] if n % 2 else [])
    N = len(players)
    half = N // 2
    sched = np.full((N - 1, half, 2), -1, dtype=np.int64)
    arr = players[:]
    for r in range(N - 1):
        for k in range(half):
            a, b = arr[k], arr[N - 1 - k]
            if a >= 0 and b >= 0:
                sched[r, k] = (min(a, b), max(a, b))
        # circle method: keep the last player fixed, rotate the rest
        arr = [arr[-2]] + arr[:-2] + [arr[-1]]
    sched.setflags(write=False)
    return sched


def _jacobi_sweeps_py(Wt, Vt, schedule, tol, max_sweeps):
    n, m = Wt.shape
    nv = Vt.shape[1]
    for sweep in range(max_sweeps):
        rotated = False
        for r in range(schedule.shape[0]):
            for k in range(schedule.shape[1]):
                p = schedule[r, k, 0]
                q = schedule[r, k, 1]
                if p < 0:
                    continue
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for i in range(m):
                    a = Wt[p, i]
                    b = Wt[q, i]
                    alpha += a * a
                    beta += b * b
                    gamma += a * b
                if gamma == 0.0 or abs(gamma) <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                for i in range(m):
                    a = Wt[p, i]
                    b = Wt[q, i]
                    Wt[p, i] = c * a - s * b
                    Wt[q, i] = s * a + c * b
                for i in range(nv):
                    a = Vt[p, i]
                    b = Vt[q, i]
                    Vt[p, i] = c * a - s * b
                    Vt[q, i] = s * a + c * b
        if not rotated:
            return sweep + 1
    return -1


if HAVE_NUMBA:
    jacobi_sweeps_numba = numba.njit(cache=True, nogil=True)(_jacobi_sweeps_py)
else:  # pragma: no cover
    jacobi_sweeps_numba = None


def _round_index_lists(schedule: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    rounds = []
    for r in range(schedule.shape[0]):
        pairs = schedule[r]
        pairs = pairs[pairs[:, 0] >= 0]
        rounds.append((pairs[:, 0].copy(), pairs[:, 1].copy()))
    return rounds


def jacobi_sweeps_numpy(Wt, Vt, schedule, tol, max_sweeps):
    rounds = _round_index_lists(schedule)
    for sweep in range(max_sweeps):
        rotated = False
        for P, Q in rounds:
            Wp = Wt[P]
            Wq = Wt[Q]
            alpha = np.einsum("ij,ij->i", Wp, Wp)
            beta = np.einsum("ij,ij->i", Wq, Wq)
            gamma = np.einsum("ij,ij->i", Wp, Wq)
            active = (gamma != 0.0) & (np.abs(gamma) > tol * np.sqrt(alpha * beta))
            if not active.any():
                continue
            rotated = True
            P, Q = P[active], Q[active]
            Wp, Wq = Wp[active], Wq[active]
            alpha, beta, gamma = alpha[active], beta[active], gamma[active]
            zeta = (beta - alpha) / (2.0 * gamma)
            t = np.copysign(1.0, zeta) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = (1.0 / np.sqrt(1.0 + t * t))[:, None]
            s = c * t[:, None]
            Wt[P] = c * Wp - s * Wq
            Wt[Q] = s * Wp + c * Wq
            Vp = Vt[P]
            Vq = Vt[Q]
            Vt[P] = c * Vp - s * Vq
            Vt[Q] = s * Vp + c * Vq
        if not rotated:
            return sweep + 1
    return -1


def use_jit() -> bool:
    return HAVE_NUMBA and not JIT_DISABLED


jacobi_sweeps = jacobi_sweeps_numba if use_jit() else jacobi_sweeps_numpy
BACKEND = "numba" if use_jit() else "numpy"
