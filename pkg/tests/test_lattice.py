import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from blochband.laurent import LaurentPoly
from blochband.lattice import lattice_period_group, smith_normal_form, support_period_group

from .conftest import laurent_polys


def test_trivial_group():
    g = lattice_period_group([(1,), (-1,), (0,)], 1)
    assert g.is_trivial() and g.elements() == [(Fraction(0),)]


def test_order_two_group():
    g = lattice_period_group([(2,), (-2,), (0,)], 1)
    assert g.order == 2
    assert g.elements() == [(Fraction(0),), (Fraction(1, 2),)]


def test_product_group():
    g = lattice_period_group([(2, 0), (0, 3)], 2)
    assert g.order == 6
    expected = {(Fraction(i, 2), Fraction(j, 3)) for i in range(2) for j in range(3)}
    assert set(g.elements()) == expected


def test_continuum():
    g = lattice_period_group([(1, 0), (-1, 0)], 2)
    assert g.continuum and g.order is None
    assert g.free_directions == ((0, 1),) or g.free_directions == ((0, -1),)
    with pytest.raises(ValueError):
        g.elements()


def test_smith_form_factors():
    factors, _ = smith_normal_form([[2, 4], [6, 8]], 2)
    assert factors == [2, 4]


def _covering_shifts(dim, n_max=6):
    seen = set()
    for n in range(1, n_max + 1):
        for m in itertools.product(range(n), repeat=dim):
            seen.add(tuple(Fraction(x, n) for x in m))
    return seen


def _invariant(p, alpha):
    n = 1
    for a in alpha:
        n = n * a.denominator // __import__("math").gcd(n, a.denominator)
    m = [int(a * n) for a in alpha]
    return p.substitute_shift(m, n) == p


@given(laurent_polys(dim=2, max_terms=4, max_exp=4, max_lam=1))
@settings(max_examples=40, deadline=None)
def test_members_are_exact_periods(p):
    if p.is_zero():
        return
    g = support_period_group(p)
    if g.continuum:
        return
    members = set(g.elements())
    for alpha in _covering_shifts(2):
        assert _invariant(p, alpha) == (alpha in members)
    for alpha in members:
        assert _invariant(p, alpha)


@given(laurent_polys(dim=1, max_terms=4, max_exp=6, max_lam=2))
@settings(max_examples=40, deadline=None)
def test_members_are_exact_periods_1d(p):
    if p.is_zero() or support_period_group(p).continuum:
        return
    g = support_period_group(p)
    for alpha in _covering_shifts(1):
        assert _invariant(p, alpha) == g.contains(alpha)
