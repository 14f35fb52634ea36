import numpy as np
import pytest

from conftest import rotation
from nisvp.errors import IndexOutOfBounds, LengthMismatch, NotSquare, ShapeMismatch
from nisvp.projections import (
    ConstraintSetSpec,
    EntryConstraint,
    project_convex,
    project_entries,
    project_membership_residuals,
    project_nonnegative,
    project_spectrum,
    project_symmetric,
)
from nisvp.svd import singular_values_only

# 1-based (row, col, value) positions fixed in the 6x5 structured example
MASK_6X5 = [
    (1, 2, 1), (1, 3, 0), (1, 4, 1), (1, 5, 0),
    (2, 5, 1),
    (3, 1, 0), (3, 2, 0), (3, 4, 1), (3, 5, 0),
    (4, 1, 0), (4, 5, 1),
]


def mask_constraint():
    return EntryConstraint.from_triples([(i - 1, j - 1, v) for i, j, v in MASK_6X5])


def brute_force_spectrum_distance(A, sigma, steps=360):
    """min ||R(t1) diag(+-sigma) R(t2)^T - A|| over an angle grid, both
    orientations of O(2)."""
    thetas = np.arange(steps) * (2 * np.pi / steps)
    R = np.array([rotation(t) for t in thetas])
    best = np.inf
    for S in (np.diag(sigma), np.diag([sigma[0], -sigma[1]])):
        left = R @ S
        X = np.einsum("aij,bkj->abik", left, R)
        best = min(best, np.sqrt(((X - A) ** 2).sum(axis=(2, 3))).min())
    return best


def test_project_spectrum_fixed_point(rng):
    A = rng.uniform(0, 5, (4, 3))
    out = project_spectrum(A, singular_values_only(A))
    assert np.linalg.norm(out - A) <= 1e-9


def test_project_spectrum_examples():
    np.testing.assert_allclose(project_spectrum(np.diag([2.0, 1.0]), [3, 1]), np.diag([3.0, 1.0]),
                               atol=1e-15)
    A = np.array([[0.0, 2.0], [1.0, 0.0]])
    out = project_spectrum(A, [4, 2])
    np.testing.assert_allclose(out, [[0, 4], [2, 0]], atol=1e-14)
    # the grid contains the exact optimal angles here
    assert np.linalg.norm(out - A) == pytest.approx(brute_force_spectrum_distance(A, [4, 2]),
                                                   abs=1e-9)


def test_project_spectrum_zero_input():
    np.testing.assert_array_equal(project_spectrum(np.zeros((3, 2)), [2, 1]),
                                  [[2, 0], [0, 1], [0, 0]])


def test_project_spectrum_beats_rotation_grid(rng):
    for _ in range(20):
        A = rng.uniform(-5, 5, (2, 2))
        sigma = np.sort(rng.uniform(0.1, 5, 2))[::-1]
        dist = np.linalg.norm(project_spectrum(A, sigma) - A)
        assert dist <= brute_force_spectrum_distance(A, sigma) + 1e-8


def test_project_spectrum_stationarity(rng):
    for _ in range(200):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(n, 8))
        A = rng.uniform(-5, 10, (m, n))
        X = project_spectrum(A, np.sort(rng.uniform(0, 10, n))[::-1])
        bound = 1e-8 * np.linalg.norm(A) * np.linalg.norm(X)
        assert np.linalg.norm(A.T @ X - X.T @ A) <= bound
        assert np.linalg.norm(X @ A.T - A @ X.T) <= bound


def test_project_spectrum_idempotent(rng):
    A = rng.uniform(0, 5, (5, 4))
    sigma = [4.0, 3.0, 3.0, 1.0]
    once = project_spectrum(A, sigma)
    twice = project_spectrum(once, sigma)
    np.testing.assert_allclose(singular_values_only(twice), sigma, atol=1e-12)
    assert np.linalg.norm(twice - once) <= 1e-12


def test_project_spectrum_length_check():
    with pytest.raises(LengthMismatch):
        project_spectrum(np.eye(3), [1, 1])


def test_project_nonnegative():
    np.testing.assert_array_equal(project_nonnegative([[-1, 2], [3, -4]]), [[0, 2], [3, 0]])
    np.testing.assert_array_equal(project_nonnegative(-np.ones((2, 3))), np.zeros((2, 3)))
    A = np.abs(np.arange(6.0).reshape(3, 2))
    np.testing.assert_array_equal(project_nonnegative(A), A)


def test_project_entries(rng):
    A = rng.uniform(-1, 1, (6, 5))
    np.testing.assert_array_equal(project_entries(A, EntryConstraint.empty()), A)
    d = np.arange(1.0, 6.0)
    out = project_entries(A, EntryConstraint.diagonal(d))
    np.testing.assert_array_equal(np.diag(out), d)
    off = ~np.eye(6, 5, dtype=bool)
    np.testing.assert_array_equal(out[off], A[off])

    c = mask_constraint()
    out = project_entries(A, c)
    mask = np.zeros((6, 5), dtype=bool)
    for i, j, v in MASK_6X5:
        assert out[i - 1, j - 1] == v
        mask[i - 1, j - 1] = True
    assert mask.sum() == 11
    np.testing.assert_array_equal(out[~mask], A[~mask])

    with pytest.raises(IndexOutOfBounds):
        project_entries(np.ones((2, 2)), EntryConstraint.from_triples([(2, 0, 1.0)]))


def test_project_symmetric(rng):
    np.testing.assert_array_equal(project_symmetric([[0, 2], [0, 0]]), [[0, 1], [1, 0]])
    A = rng.uniform(-1, 1, (4, 4))
    S = project_symmetric(A)
    np.testing.assert_array_equal(S, S.T)
    np.testing.assert_array_equal(project_symmetric(S), S)
    with pytest.raises(NotSquare):
        project_symmetric(np.ones((3, 2)))


def test_convex_projections_nonexpansive(rng):
    c = mask_constraint()
    spec = ConstraintSetSpec((6, 6), np.ones(6), EntryConstraint.diagonal(np.ones(6)),
                             symmetric=True)
    for _ in range(200):
        A = rng.uniform(-5, 5, (6, 5))
        B = project_entries(rng.uniform(0, 5, (6, 5)), c)  # B in L and P
        for proj in (project_nonnegative, lambda X: project_entries(X, c),
                     lambda X: project_entries(project_nonnegative(X), c)):
            assert np.linalg.norm(proj(A) - B) <= np.linalg.norm(A - B) + 1e-12
        S = rng.uniform(-5, 5, (6, 6))
        T = project_convex(rng.uniform(0, 5, (6, 6)), spec)
        assert np.linalg.norm(project_convex(S, spec) - T) <= np.linalg.norm(S - T) + 1e-12
        assert np.linalg.norm(project_symmetric(S) - T) <= np.linalg.norm(S - T) + 1e-12


def test_convex_projection_is_exact_nearest_point(rng):
    """Closed form vs. per-pair minimization for the symmetric case."""
    spec = ConstraintSetSpec((3, 3), np.ones(3), EntryConstraint.diagonal([1, 2, 0]),
                             symmetric=True)
    A = rng.uniform(-3, 3, (3, 3))
    X = project_convex(A, spec)
    grid = np.linspace(0, 5, 50001)
    for i, j in [(0, 1), (0, 2), (1, 2)]:
        cost = (grid - A[i, j]) ** 2 + (grid - A[j, i]) ** 2
        assert X[i, j] == pytest.approx(grid[np.argmin(cost)], abs=1e-4)


def test_clamp_and_overwrite_commute(rng):
    c = mask_constraint()
    for _ in range(50):
        A = rng.uniform(-5, 5, (6, 5))
        np.testing.assert_array_equal(project_entries(project_nonnegative(A), c),
                                      project_nonnegative(project_entries(A, c)))


def test_idempotence_convex(rng):
    c = mask_constraint()
    A = rng.uniform(-5, 5, (6, 5))
    for proj in (project_nonnegative, lambda X: project_entries(X, c)):
        np.testing.assert_array_equal(proj(proj(A)), proj(A))


def test_residuals():
    spec = ConstraintSetSpec((2, 2), [3, 1], EntryConstraint.diagonal([3, 1]))
    r = project_membership_residuals(np.diag([3.0, 1.0]), spec)
    assert r.spectrum_residual <= 1e-12 and r.negativity == 0 and r.entry_residual == 0
    assert r.asymmetry is None

    r = project_membership_residuals(np.diag([2.0, 1.0]), ConstraintSetSpec((2, 2), [3, 1]))
    assert r.spectrum_residual == pytest.approx(1 / np.sqrt(10), abs=1e-15)

    sym = ConstraintSetSpec((2, 2), [3, 1], symmetric=True)
    r = project_membership_residuals(np.array([[1.0, -2.0], [0.0, 1.0]]), sym)
    assert r.negativity == 2.0
    assert r.asymmetry == pytest.approx(np.sqrt(8) / 2)
    with pytest.raises(ShapeMismatch):
        project_membership_residuals(np.eye(3), sym)


def test_spec_validation():
    with pytest.raises(ShapeMismatch):
        ConstraintSetSpec((2, 3), [1, 1, 1])
    with pytest.raises(LengthMismatch):
        ConstraintSetSpec((3, 2), [1, 1, 1])
    with pytest.raises(NotSquare):
        ConstraintSetSpec((3, 2), [1, 1], symmetric=True)
    with pytest.raises(IndexOutOfBounds):
        ConstraintSetSpec((3, 2), [1, 1], EntryConstraint.from_triples([(0, 2, 1.0)]))
    with pytest.raises(ValueError):
        EntryConstraint.from_triples([(0, 0, -1.0)])
    spec = ConstraintSetSpec((3, 3), [1, 1, 1], EntryConstraint.from_triples([(0, 1, 2.0)]),
                             symmetric=True)
    assert len(spec.entry_constraint) == 2
    with pytest.raises(ValueError):
        ConstraintSetSpec((3, 3), [1, 1, 1],
                          EntryConstraint.from_triples([(0, 1, 2.0), (1, 0, 3.0)]),
                          symmetric=True)
