import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blochband.bands import (
    decay_series,
    degeneracy_statistic,
    offset_statistic,
    overlap_statistic,
    sweep_grid,
)
from blochband.laurent import LaurentPoly
from blochband.operators import FloquetSymbol, build_symbol, eval_symbol, graph_spec, schrodinger_spec
from blochband.varieties import charpoly, squarefree_test

FREE = build_symbol(schrodinger_spec([1], [0]))
Q2 = build_symbol(schrodinger_spec([2], [1, -1]))
Q22 = build_symbol(schrodinger_spec([2, 2], ["3/2", "-2/3", "5/4", "-1/5"]))
PERIOD_HALF = build_symbol(
    graph_spec(1, 2, [(0, 0, [1], 1), (0, 0, [-1], 1), (1, 1, [1], -1), (1, 1, [-1], -1)])
)


def test_free_grid_values():
    g = sweep_grid(FREE, 4)
    np.testing.assert_allclose(g.values[:, 0], [2, 0, -2, 0], atol=1e-15)


def test_single_point_grid():
    g = sweep_grid(Q22, 1)
    assert g.values.shape == (1, 4)
    assert g.to_csv().count("\n") == 2


def test_two_point_grid():
    g = sweep_grid(Q2, 2)
    r5 = np.sqrt(5)
    np.testing.assert_allclose(g.values, [[-r5, r5], [-1, 1]], atol=1e-14)


def test_csv_format():
    lines = sweep_grid(Q2, 2).to_csv().splitlines()
    assert lines[0] == "k_1,lambda_1,lambda_2"
    assert lines[1] == "0,-2.2360679775,2.2360679775"
    assert lines[2] == "0.5,-1,1"


@pytest.mark.parametrize("sym, n", [(Q2, 16), (Q22, 8), (PERIOD_HALF, 12)])
def test_sorted_and_trace(sym, n):
    g = sweep_grid(sym, n)
    assert np.all(np.diff(g.values, axis=1) >= 0)
    for r, row in zip(g.points(), g.values):
        assert abs(row.sum() - np.trace(eval_symbol(sym, r / n)).real) <= 1e-9


def test_free_overlap():
    rep = overlap_statistic(sweep_grid(FREE, 16), 1e-8)
    assert rep.rho == 0.125
    assert rep.rho <= 1


def test_period_half_overlap():
    n = 16
    rep = overlap_statistic(sweep_grid(PERIOD_HALF, n), 1e-8)
    assert rep.count(2, 2, [n // 2]) == n
    assert rep.rho == 1.0


def test_degeneracy_examples():
    assert degeneracy_statistic(sweep_grid(PERIOD_HALF, 8)) == 0.25
    assert degeneracy_statistic(sweep_grid(FREE, 8)) == 0.0
    assert degeneracy_statistic(sweep_grid(Q2, 32)) == 0.0


def test_offset_examples():
    free = sweep_grid(FREE, 16)
    assert offset_statistic(free, 10).max_count == 0
    sl = offset_statistic(free, 2)
    assert sl.count(1, 1, [0]) == 0
    sl = offset_statistic(sweep_grid(PERIOD_HALF, 8), 4)
    assert sl.count(2, 1, [0]) == 2
    with pytest.raises(ValueError):
        offset_statistic(free, 0)


@pytest.mark.parametrize("sym, n", [(Q2, 12), (Q22, 6), (PERIOD_HALF, 8)])
def test_shift_consistency(sym, n):
    rep = overlap_statistic(sweep_grid(sym, n), 1e-8)
    dim = sym.dim
    for m in np.ndindex(*(n,) * dim):
        neg = [(-x) % n for x in m]
        for s in range(1, sym.size + 1):
            for w in range(1, sym.size + 1):
                assert rep.count(s, w, m) == rep.count(w, s, neg)


@pytest.mark.parametrize("sym, n", [(Q2, 16), (Q22, 8)])
def test_grid_restriction(sym, n):
    fine, coarse = sweep_grid(sym, n), sweep_grid(sym, n // 2)
    for r in coarse.points():
        np.testing.assert_allclose(fine.at(2 * r), coarse.at(r), atol=1e-13)


def test_workers_do_not_change_output():
    a = sweep_grid(Q22, 12, workers=1)
    b = sweep_grid(Q22, 12, workers=4)
    assert a.to_csv() == b.to_csv()
    assert np.array_equal(a.values, b.values)


def test_decay_examples():
    t = decay_series(schrodinger_spec([1], [0]), [8, 16, 32, 64])
    assert t.rhos == [0.25, 0.125, 0.0625, 0.03125]
    assert t.trend() == "decaying"
    t = decay_series(PERIOD_HALF, [4, 8, 16])
    assert t.rhos == [1.0, 1.0, 1.0]
    assert t.trend() == "non-decaying: period suspected"
    t = decay_series(Q22, [4, 8, 16])
    assert t.strictly_decreasing


def test_decay_rejects_unsorted():
    with pytest.raises(ValueError):
        decay_series(FREE, [16, 8])


@pytest.mark.parametrize("sym", [Q2, Q22])
def test_degeneracy_zero_when_discriminant_has_no_grid_zeros(sym):
    n = 8
    disc = squarefree_test(charpoly(sym)).witness
    g = sweep_grid(sym, n)
    zero_free = all(abs(disc.eval_numeric(np.exp(2j * np.pi * r / n))) > 1e-9 for r in g.points())
    if zero_free:
        assert degeneracy_statistic(g) == 0.0


@given(st.integers(1, 5).map(lambda k: 2 * k))
@settings(max_examples=5, deadline=None)
def test_free_rho_closed_form(n):
    # 2cos(2pi(r+m)/N) = 2cos(2pi r/N) iff 2r = -m mod N: two solutions for even m != 0, none for odd m
    rep = overlap_statistic(sweep_grid(FREE, n), 1e-8)
    best = max(sum(1 for r in range(n) if (2 * r + m) % n == 0) for m in range(1, n))
    expected = best / n
    assert rep.rho == expected
