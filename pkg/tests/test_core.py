import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nisvp.core import (
    frobenius_norm,
    matmul,
    random_nonnegative,
    relative_change,
    trace,
    transpose,
)
from nisvp.errors import BadRange, ShapeMismatch, ZeroDenominator


@pytest.mark.parametrize(
    "A, expected",
    [
        (np.zeros((2, 2)), 0.0),
        (np.eye(2), np.sqrt(2.0)),
        (np.array([[3.0, 4.0], [0.0, 0.0]]), 5.0),
    ],
)
def test_frobenius_norm(A, expected):
    assert frobenius_norm(A) == pytest.approx(expected, abs=1e-15)


def test_relative_change():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert relative_change(A, A) == 0.0
    assert relative_change(np.eye(2), 2 * np.eye(2)) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ZeroDenominator):
        relative_change(np.zeros((2, 2)), np.eye(2))
    with pytest.raises(ShapeMismatch):
        relative_change(np.eye(2), np.eye(3))


def test_random_nonnegative_deterministic_and_bounded():
    assert np.array_equal(random_nonnegative(2, 2, 0, 10, 7), random_nonnegative(2, 2, 0, 10, 7))
    A = random_nonnegative(3, 2, 0, 10, 8)
    assert A.shape == (3, 2)
    assert np.all((A >= 0) & (A <= 10))


def test_random_nonnegative_mean():
    A = random_nonnegative(1000, 1000, 0.0, 10.0, 11)
    assert abs(A.mean() - 5.0) <= 0.02


@pytest.mark.parametrize("lo, hi", [(5, 5), (6, 1), (-1, 3)])
def test_random_nonnegative_bad_range(lo, hi):
    with pytest.raises(BadRange):
        random_nonnegative(2, 2, lo, hi, 0)


def test_products_and_trace():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(matmul(np.eye(2), A), A)
    assert trace(A) == 5.0
    assert np.array_equal(transpose(transpose(A)), A)
    with pytest.raises(ShapeMismatch):
        matmul(np.ones((2, 3)), np.ones((2, 3)))
    with pytest.raises(ShapeMismatch):
        trace(np.ones((2, 3)))


shapes = st.tuples(st.integers(1, 50), st.integers(1, 50))


@settings(max_examples=60, deadline=None)
@given(shapes, st.integers(0, 2**64 - 1))
def test_norm_trace_identity(shape, seed):
    rng = np.random.default_rng(seed)
    A = rng.uniform(-10, 10, shape)
    B = rng.uniform(-10, 10, shape)
    D = A - B
    lhs = frobenius_norm(D) ** 2
    assert lhs == pytest.approx(trace(D.T @ D), rel=1e-12, abs=1e-300)
    assert frobenius_norm(A) == pytest.approx(frobenius_norm(transpose(A)), rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(shapes, st.integers(0, 2**64 - 1),
       st.floats(0, 100), st.floats(1e-3, 100))
def test_random_bounds_every_seed(shape, seed, lo, width):
    A = random_nonnegative(*shape, lo, lo + width, seed)
    assert np.all((A >= lo) & (A <= lo + width))
