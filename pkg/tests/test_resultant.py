import cmath
import random

import numpy as np
import pytest
from hypothesis import given, settings

from blochband.laurent import LaurentPoly
from blochband.resultant import (
    discriminant_lambda,
    is_zero_probabilistic,
    resultant_evaluator,
    resultant_lambda,
)

from .conftest import laurent_polys

z = LaurentPoly.z(1, 0)
zi = LaurentPoly.z(1, 0, -1)
lam = LaurentPoly.lam(1)


def numeric_sylvester(p, r, point):
    """Sylvester determinant built from numerically evaluated lambda-coefficients."""
    pc = [c.eval_numeric(point) for c in p.lambda_coefficients()]
    rc = [c.eval_numeric(point) for c in r.lambda_coefficients()]
    m, n = len(pc) - 1, len(rc) - 1
    s = np.zeros((m + n, m + n), dtype=complex)
    for i in range(n):
        s[i, i : i + m + 1] = pc[::-1]
    for i in range(m):
        s[n + i, i : i + n + 1] = rc[::-1]
    return np.linalg.det(s)


def test_linear_pair():
    assert resultant_lambda(lam - z, lam + z) == 2 * z


def test_self_resultant_vanishes():
    p = lam**2 - 3 - z - zi
    assert resultant_lambda(p, p).is_zero()


def test_resultant_with_derivative():
    p = lam**2 - z - zi - 3
    assert resultant_lambda(p, p.lambda_derivative()) == 4 * (-z - zi - 3)


def test_quadratic_discriminant():
    b = z + 2 * zi
    c = LaurentPoly.z(1, 0, 3) - 1
    assert discriminant_lambda(lam**2 + b * lam + c) == b * b - 4 * c


def test_repeated_factor_discriminant():
    assert discriminant_lambda(lam**2 - 2 * z * lam + z**2).is_zero()


def test_schrodinger_discriminant():
    assert discriminant_lambda(lam**2 - 3 - z - zi) == 12 + 4 * z + 4 * zi


def test_degree_one_discriminant_is_one():
    assert discriminant_lambda(z + zi - lam) == LaurentPoly.constant(1, 1)


def test_lambda_free_operand_rejected():
    with pytest.raises(ValueError):
        resultant_lambda(z + 1, lam - z)


def test_probabilistic_constant_one():
    v = is_zero_probabilistic(lambda pt: 1, 1)
    assert not v.is_zero and v.certain and v.trials == 1


def test_probabilistic_zero():
    v = is_zero_probabilistic(lambda pt: 0, 2, trials=5, bound=10**6)
    assert v.is_zero and not v.certain
    assert v.failure_bound == pytest.approx((1 / (2 * 10**6 + 1)) ** 5)
    assert v.label == "zero (probabilistic)"


def test_probabilistic_matches_exact_on_invariant_poly():
    p = lam**2 - z**2 - 2 - zi**2
    shifted = p.substitute_shift([1], 2)
    v = is_zero_probabilistic(resultant_evaluator(p, shifted), 1)
    assert v.is_zero
    assert resultant_lambda(p, shifted).is_zero()


def _with_lambda(p, deg):
    return p + LaurentPoly.lam(p.dim, deg)


@given(laurent_polys(dim=2, max_terms=4, max_lam=2), laurent_polys(dim=2, max_terms=4, max_lam=2))
@settings(max_examples=25, deadline=None)
def test_resultant_matches_numeric_sylvester(p, r):
    p, r = _with_lambda(p, 3), _with_lambda(r, 2)
    res = resultant_lambda(p, r)
    rng = random.Random(7)
    for _ in range(50):
        pt = [cmath.exp(2j * cmath.pi * rng.random()) for _ in range(2)]
        exact = res.eval_numeric(pt)
        numeric = numeric_sylvester(p, r, pt)
        scale = max(1.0, abs(numeric))
        assert abs(exact - numeric) <= 1e-9 * scale


@given(laurent_polys(dim=1, max_terms=3, max_lam=1))
@settings(max_examples=25, deadline=None)
def test_discriminant_of_square_vanishes(p):
    p = _with_lambda(p, 2)
    assert discriminant_lambda(p * p).is_zero()
