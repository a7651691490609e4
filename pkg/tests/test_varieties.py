import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blochband.cyclotomic import CyclotomicNumber
from blochband.laurent import LaurentPoly
from blochband.operators import FloquetSymbol, build_symbol, eval_symbol, schrodinger_spec
from blochband.varieties import (
    CONDITIONAL,
    CONTINUUM,
    FAILS,
    HOLDS,
    c_alpha_sweep,
    c_alpha_test,
    charpoly,
    dual_consistency_check,
    h_product,
    no_nontrivial_periods_certificate,
    offset_test,
    shift_sweep,
    squarefree_test,
    top_component_check,
)

from .conftest import small_fractions

z = LaurentPoly.z(1, 0)
zi = LaurentPoly.z(1, 0, -1)
lam = LaurentPoly.lam(1)
Q2 = lam**2 - 3 - z - zi
PERIOD_HALF = lam**2 - z**2 - 2 - zi**2


def diag(entries, dim):
    zero = LaurentPoly.zero(dim)
    n = len(entries)
    return FloquetSymbol([[entries[i] if i == j else zero for j in range(n)] for i in range(n)], dim)


def hermitian_hop(dim, j, w):
    """w z_j + conj(w) z_j^-1."""
    e = [0] * dim
    e[j] = 1
    f = [0] * dim
    f[j] = -1
    w = w if isinstance(w, CyclotomicNumber) else CyclotomicNumber.rational(w)
    return LaurentPoly.monomial(dim, e, 0, w) + LaurentPoly.monomial(dim, f, 0, w.conjugate())


OMEGA = CyclotomicNumber.root_of_unity(3)
h1 = hermitian_hop(1, 0, 1)
BLOCK_FIXTURES = {
    "sign-flip": diag([h1, -h1], 1),
    "constant-block": diag([h1, hermitian_hop(1, 0, 1) * hermitian_hop(1, 0, 1), LaurentPoly.constant(1, 1)], 1),
    "third-root-rotation": diag([h1, hermitian_hop(1, 0, OMEGA)], 1),
    "distinct": diag([h1, h1 * h1 + Fraction(1, 2)], 1),
    "planar": diag([hermitian_hop(2, 0, 1) + hermitian_hop(2, 1, 1), hermitian_hop(2, 0, 2) * hermitian_hop(2, 0, 1)], 2),
    "planar-even": diag([hermitian_hop(2, 0, 1) + hermitian_hop(2, 1, Fraction(1, 3)),
                         LaurentPoly.monomial(2, (2, 0), 0) + LaurentPoly.monomial(2, (-2, 0), 0)], 2),
}


def brute_force_holds(sym, m, n):
    """C_alpha by direct comparison of the factors f_i - lambda of a diagonal symbol."""
    blocks = [sym[i, i] for i in range(sym.size)]
    return not any(f.substitute_shift(m, n) == g for f in blocks for g in blocks)


def test_charpoly_examples():
    a = build_symbol(schrodinger_spec([2], [1, -1]))
    assert charpoly(a).poly == Q2
    c = Fraction(-5, 3)
    assert charpoly(diag([LaurentPoly.constant(1, c)], 1)).poly == c - lam
    assert charpoly(BLOCK_FIXTURES["sign-flip"]).poly == PERIOD_HALF


@pytest.mark.parametrize("periods", [(2,), (3,), (2, 2), (1, 3)])
def test_charpoly_matches_numeric_determinant(periods):
    rng = random.Random(sum(periods))
    n = int(np.prod(periods))
    spec = schrodinger_spec(periods, [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)])
    sym = build_symbol(spec)
    p = charpoly(sym).poly
    nrng = np.random.default_rng(3)
    for _ in range(100):
        k = nrng.random(spec.dimension)
        lam0 = complex(nrng.normal(), nrng.normal())
        numeric = np.linalg.det(eval_symbol(sym, k) - lam0 * np.eye(n))
        exact = p.eval_numeric(np.exp(2j * np.pi * k), lam0)
        assert abs(exact - numeric) <= 1e-9 * max(1.0, abs(numeric))


def test_squarefree_examples():
    rec = squarefree_test(Q2)
    assert rec.verdict == HOLDS and rec.witness == 12 + 4 * z + 4 * zi
    assert squarefree_test((lam - z - zi) ** 2).verdict == FAILS
    rec = squarefree_test(PERIOD_HALF)
    assert rec.verdict == HOLDS and rec.witness == 4 * (z + zi) ** 2


@pytest.mark.parametrize(
    "blocks, square",
    [
        ([h1, h1, LaurentPoly.constant(1, 2)], True),
        ([h1 * h1, LaurentPoly.constant(1, 1), h1 * h1], True),
        ([h1, -h1, h1 + 1], False),
        ([h1, h1 * h1], False),
    ],
)
def test_squarefree_detects_exhibited_square(blocks, square):
    p = charpoly(diag(blocks, 1)).poly
    assert (squarefree_test(p).verdict == FAILS) == square


def test_c_alpha_examples():
    assert c_alpha_test(PERIOD_HALF, [1], 2).verdict == FAILS
    assert c_alpha_test(Q2, [1], 2).verdict == HOLDS
    assert c_alpha_test(PERIOD_HALF, [1], 4).verdict == HOLDS


def test_c_alpha_failure_carries_witness():
    rec = c_alpha_test(PERIOD_HALF, [1], 2)
    assert rec.witness == ["1/2"] and rec.method == "exact"
    rec = c_alpha_test(PERIOD_HALF, [1], 2, probabilistic=True)
    assert rec.method == "probabilistic" and 0 < rec.probabilistic_bound < 1e-20


@pytest.mark.parametrize("name", sorted(BLOCK_FIXTURES))
def test_c_alpha_matches_factor_pairs(name):
    sym = BLOCK_FIXTURES[name]
    p = charpoly(sym).poly
    for m, n in shift_sweep(sym.dim, 6):
        assert (c_alpha_test(p, m, n).verdict == HOLDS) == brute_force_holds(sym, m, n), (m, n)


@pytest.mark.parametrize("name", ["sign-flip", "third-root-rotation", "distinct"])
@pytest.mark.parametrize("c", [1, -2, 3])
def test_c_alpha_invariant_under_monomial_units(name, c):
    p = charpoly(BLOCK_FIXTURES[name]).poly
    unit = LaurentPoly.monomial(1, (c,), 0)
    for m, n in shift_sweep(1, 6):
        assert c_alpha_test(p * unit, m, n).verdict == c_alpha_test(p, m, n).verdict


def test_certificate_examples():
    rng = random.Random(11)
    for _ in range(3):
        v = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(2)]
        p = charpoly(build_symbol(schrodinger_spec([2], v))).poly
        assert no_nontrivial_periods_certificate(p, irreducible=True).verdict == HOLDS
    rec = no_nontrivial_periods_certificate(PERIOD_HALF)
    assert rec.verdict == FAILS and rec.details["periods"] == [["1/2"]]
    p = z + zi + Fraction(1, 3) - lam
    assert no_nontrivial_periods_certificate(p, irreducible=True).verdict == HOLDS


def test_certificate_continuum():
    p = charpoly(diag([hermitian_hop(2, 0, 1)], 2)).poly
    assert no_nontrivial_periods_certificate(p).verdict == CONTINUUM


def test_certificate_conditional_without_irreducibility():
    rec = no_nontrivial_periods_certificate(Q2)
    assert rec.verdict == CONDITIONAL and rec.details["sweep_failures"] == []


@pytest.mark.parametrize("periods", [(2,), (3,), (2, 2)])
def test_trivial_group_implies_sweep_holds(periods):
    rng = random.Random(len(periods) * 7 + periods[0])
    n = int(np.prod(periods))
    spec = schrodinger_spec(periods, [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n)])
    p = charpoly(build_symbol(spec))
    if no_nontrivial_periods_certificate(p, irreducible=True).verdict == HOLDS:
        assert all(r.verdict == HOLDS for r in c_alpha_sweep(p, 6))


def test_offset_examples():
    rec = offset_test(Q2, 1, [1], 3)
    assert rec.verdict == HOLDS
    assert rec.details["trace_constant_original"] == "0"
    assert rec.details["trace_constant_shifted"] == "-2"
    v = Fraction(2, 5)
    rec = offset_test(z + zi + v - lam, Fraction(-1, 2), [0], 1)
    assert rec.verdict == HOLDS and rec.details["difference"] == "1/2"
    with pytest.raises(ValueError):
        offset_test(Q2, 0, [1], 2)


@given(
    st.sampled_from([(1,), (2,), (3,), (2, 2)]),
    st.data(),
    small_fractions.filter(lambda a: a != 0),
    st.integers(1, 6),
)
@settings(max_examples=25, deadline=None)
def test_offset_difference_is_minus_q_a(periods, data, a, n):
    q = int(np.prod(periods))
    v = data.draw(st.lists(small_fractions, min_size=q, max_size=q))
    m = data.draw(st.lists(st.integers(0, n - 1), min_size=len(periods), max_size=len(periods)))
    p = charpoly(build_symbol(schrodinger_spec(periods, v)))
    rec = offset_test(p, a, m, n)
    assert Fraction(rec.details["difference"]) == -q * a
    assert rec.verdict == HOLDS


def test_top_component_examples():
    rec = top_component_check(schrodinger_spec([2], [1, -1]))
    assert rec.verdict == HOLDS and rec.details["top_component"] == lam**2 - z**2
    assert h_product(schrodinger_spec([2], [0, 0])) == lam**2 - z**2
    rec = top_component_check(schrodinger_spec([1], [Fraction(7, 2)]))
    assert rec.verdict == HOLDS and rec.details["h"] == z - lam
    assert top_component_check(schrodinger_spec([2], [0, 0])).verdict == HOLDS


def test_dual_consistency_examples():
    rec = dual_consistency_check(schrodinger_spec([2], [1, -1]))
    assert rec.verdict == HOLDS and rec.details["exact_identity"]
    assert dual_consistency_check(schrodinger_spec([1], [3])).verdict == HOLDS


def test_report_shape():
    rec = c_alpha_test(PERIOD_HALF, [1], 2)
    doc = rec.to_json()
    assert {"name", "verdict", "method", "witness"} <= set(doc)
    assert doc["verdict"] == "fails" and doc["witness"] is not None
