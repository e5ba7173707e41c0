"""
Tests for the scheme catalog: product counts, step equivalence, error recursion
"""

import numpy as np
import pytest

from src.iteration.schemes import (
    CM,
    FM,
    HM,
    PM,
    PM8,
    PM_STABLE,
    SM,
    SchemeId,
    SchemeKind,
    hyperpower,
    residual,
    scheme_step,
)
from src.linalg.dense import DenseMatrix, MatmulCounter, identity, mat_pow, matmul, to_config
from src.linalg.generators import random_with_condition
from src.linalg.norms import NormKind, inverse, norm
from src.linalg.scalar import extended, to_float
from src.utils.errors import ConfigurationError, DivergenceError, ShapeError


def start_with_residual(rng, n, radius, config=None):
    """A nonsingular A and X0 with I - A X0 of spectral norm radius."""
    a = random_with_condition(n, n, 10.0 ** rng.uniform(0, 1), rng)
    r0 = rng.standard_normal((n, n))
    r0 *= radius / np.linalg.norm(r0, 2)
    if config is None:
        x0 = np.linalg.solve(a.to_numpy(), np.eye(n) - r0)
        return a, DenseMatrix(x0)
    a = to_config(a, config)
    x0 = matmul(inverse(a), identity(n, config) - DenseMatrix(r0, config))
    return a, x0


def relative_error(x, y):
    return to_float(norm(x - y)) / to_float(norm(y))


@pytest.mark.parametrize("scheme, products", [
    (SM, 2), (CM, 3), (FM, 5), (HM, 9), (PM, 7), (PM8, 8),
    (hyperpower(2), 2), (hyperpower(5), 5), (hyperpower(18), 18),
])
def test_products_per_loop(rng, scheme, products):
    a, x0 = start_with_residual(rng, 5, 0.5)
    counter = MatmulCounter()
    scheme_step(scheme, a, x0, counter=counter)
    assert counter.count == products


def test_pm_stable_measured_count(rng):
    """Nominally 8; the projection X A X costs two products on top of PM's seven."""
    a, x0 = start_with_residual(rng, 4, 0.5)
    counter = MatmulCounter()
    scheme_step(PM_STABLE, a, x0, counter=counter)
    assert PM_STABLE.nominal_products == 8
    assert counter.count == 9


def test_orders():
    assert [s.order for s in (SM, CM, FM, HM, PM, PM_STABLE, PM8)] == [2, 3, 7, 18, 18, 18, 18]
    assert hyperpower(7).order == 7


def test_pm_and_hm_match_hyperpower_18(rng):
    """100 random instances, n <= 8, ||I - A X0|| <= 0.9."""
    reference = hyperpower(18)
    for _ in range(100):
        n = int(rng.integers(1, 9))
        a, x0 = start_with_residual(rng, n, rng.uniform(0.05, 0.9))
        expected = scheme_step(reference, a, x0)
        assert relative_error(scheme_step(PM, a, x0), expected) <= 1e-10
        assert relative_error(scheme_step(HM, a, x0), expected) <= 1e-10
        assert relative_error(scheme_step(PM8, a, x0), expected) <= 1e-10


@pytest.mark.parametrize("p", [2, 3, 7])
def test_low_order_schemes_match_hyperpower(rng, p):
    scheme = {2: SM, 3: CM, 7: FM}[p]
    a, x0 = start_with_residual(rng, 6, 0.7)
    assert relative_error(scheme_step(scheme, a, x0), scheme_step(hyperpower(p), a, x0)) <= 1e-12


def test_pm_residual_is_eighteenth_power(rng, precise):
    """One PM step maps the residual F0 to F0^18 (50 instances, n <= 6)."""
    for _ in range(50):
        n = int(rng.integers(1, 7))
        a, x0 = start_with_residual(rng, n, rng.uniform(0.3, 0.8), precise)
        f0 = residual(a, x0)
        f1 = residual(a, scheme_step(PM, a, x0))
        assert relative_error(f1, mat_pow(f0, 18)) <= 1e-8


def test_residual_uses_one_product(rng):
    a, x0 = start_with_residual(rng, 3, 0.2)
    counter = MatmulCounter()
    r = residual(a, x0, counter)
    assert counter.count == 1
    assert to_float(norm(r, NormKind.SPECTRAL)) == pytest.approx(0.2, rel=1e-3)


def test_rectangular_step_shapes(rng):
    a = DenseMatrix(rng.standard_normal((5, 3)))
    x0 = DenseMatrix(a.to_numpy().T * 0.01)
    assert scheme_step(PM, a, x0).shape == (3, 5)
    with pytest.raises(ShapeError):
        scheme_step(PM, a, DenseMatrix(np.zeros((5, 3))))


def test_mixed_precision_rejected(rng):
    a, x0 = start_with_residual(rng, 3, 0.2)
    with pytest.raises(ConfigurationError):
        scheme_step(SM, a, to_config(x0, extended(20)))


def test_non_finite_step_raises():
    a = DenseMatrix([[1e200]])
    x0 = DenseMatrix([[1e200]])
    with pytest.raises(DivergenceError) as info:
        scheme_step(HM, a, x0)
    assert info.value.partial is x0


@pytest.mark.parametrize("text, expected", [
    ("PM", PM),
    ("pm-stable", PM_STABLE),
    ("HYPERPOWER(5)", hyperpower(5)),
    ("hyperpower:5", hyperpower(5)),
    ("HP5", hyperpower(5)),
    ("sm", SM),
])
def test_parse(text, expected):
    assert SchemeId.parse(text) == expected


def test_parse_rejects_unknown():
    with pytest.raises(ConfigurationError):
        SchemeId.parse("QM")
    with pytest.raises(ConfigurationError):
        SchemeId(SchemeKind.HYPERPOWER, 1)
    assert hyperpower(4).label == "HYPERPOWER(4)"


def test_scalar_residual_follows_closed_form():
    """For 1x1 input PM maps 1 - a x to (1 - a x)^18 exactly, loop after loop."""
    config = extended(200)
    a = DenseMatrix([[2]], config)
    x = DenseMatrix([[config.rational(1, 4)]], config)
    r0 = 1 - a.entry(0, 0) * x.entry(0, 0)
    assert r0 == config.rational(1, 2)
    for k in range(1, 4):
        x = scheme_step(PM, a, x)
        r = 1 - a.entry(0, 0) * x.entry(0, 0)
        expected = r0 ** (18 ** k)
        assert abs(r - expected) <= config.real("1e-190")
        if k == 1:
            assert abs(r - expected) <= expected * config.real("1e-180")
