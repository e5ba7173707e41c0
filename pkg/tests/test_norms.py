"""
Tests for norms, ranks and SVD helpers
"""

import numpy as np
import pytest

from src.linalg.dense import DenseMatrix, diag, from_rows, zeros
from src.linalg.generators import hilbert, random_with_condition
from src.linalg.norms import (
    NormKind,
    condition_number,
    inverse,
    norm,
    pseudo_inverse,
    rank,
    singular_values,
    spectral_estimate,
)
from src.linalg.scalar import to_float
from src.utils.errors import ConvergenceDiagnosticError, DegenerateInputError


@pytest.fixture
def sample():
    return from_rows([[1, -2], [3, 4]])


def test_one_infinity_frobenius(sample):
    assert norm(sample, NormKind.ONE) == 6.0
    assert norm(sample, NormKind.INFINITY) == 7.0
    assert norm(sample, NormKind.FROBENIUS) == pytest.approx(np.sqrt(30.0))


def test_parse_aliases():
    assert NormKind.parse("inf") is NormKind.INFINITY
    assert NormKind.parse("Frobenius") is NormKind.FROBENIUS
    assert NormKind.parse("spectral") is NormKind.SPECTRAL
    with pytest.raises(ValueError):
        NormKind.parse("nuclear")


def test_spectral_estimate_bounds(rng):
    for _ in range(10):
        a = DenseMatrix(rng.standard_normal((6, 4)))
        estimate = spectral_estimate(a)
        exact = np.linalg.norm(a.to_numpy(), 2)
        assert estimate <= exact * (1 + 2e-8)
        assert estimate == pytest.approx(exact, rel=1e-4)
        assert estimate <= np.sqrt(norm(a, NormKind.ONE) * norm(a, NormKind.INFINITY)) * (1 + 1e-6)


def test_spectral_estimate_never_overstates_diagonal_norm():
    estimate = spectral_estimate(diag([3.0, 1.0]))
    assert 3.0 - 1e-7 <= estimate <= 3.0 + 1e-12


def test_spectral_estimate_of_zero_matrix():
    assert spectral_estimate(zeros(3, 3)) == 0


def test_spectral_estimate_out_of_sweeps():
    a = diag([1.0, 0.999999])
    with pytest.raises(ConvergenceDiagnosticError) as info:
        spectral_estimate(a, tolerance=1e-15, max_sweeps=2)
    assert info.value.last_iterate is not None


def test_singular_values_descending(precise):
    values = singular_values(diag([1, 3, 2]))
    assert values == pytest.approx([3, 2, 1])
    extended_values = singular_values(diag([1, 3, 2], precise))
    assert [to_float(v) for v in extended_values] == pytest.approx([3, 2, 1])


def test_rank_and_condition():
    a = from_rows([[1, 2], [2, 4], [0, 0]])
    assert rank(a) == 1
    assert rank(diag([1.0, 1e-20])) == 1
    assert condition_number(diag([4.0, 0.5])) == pytest.approx(8.0)
    with pytest.raises(DegenerateInputError):
        condition_number(zeros(2, 2))


def test_random_condition_generator(rng):
    a = random_with_condition(12, 8, 1e4, rng)
    assert condition_number(a) == pytest.approx(1e4, rel=1e-6)


def test_pseudo_inverse_matches_numpy(rng):
    a = DenseMatrix(rng.standard_normal((5, 3)))
    assert np.allclose(pseudo_inverse(a).to_numpy(), np.linalg.pinv(a.to_numpy()))


def test_extended_pseudo_inverse(precise):
    h = hilbert(6, 4, precise)
    x = pseudo_inverse(h)
    double = np.linalg.pinv(hilbert(6, 4).to_numpy())
    assert np.allclose(x.to_numpy(), double, rtol=1e-6)


def test_inverse(precise):
    a = from_rows([[4, 7], [2, 6]], precise)
    x = inverse(a).to_numpy()
    assert np.allclose(x, [[0.6, -0.7], [-0.2, 0.4]])


def test_one_norm_of_transpose_is_infinity_norm(rng):
    a = DenseMatrix(rng.standard_normal((5, 3)))
    transposed = DenseMatrix(a.to_numpy().T)
    assert norm(transposed, NormKind.ONE) == pytest.approx(norm(a, NormKind.INFINITY), rel=1e-15)
    assert norm(transposed, NormKind.INFINITY) == pytest.approx(norm(a, NormKind.ONE), rel=1e-15)
