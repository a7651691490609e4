from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from blochband.laurent import LaurentPoly

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixture_path():
    return lambda name: FIXTURES / name


small_fractions = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


@st.composite
def laurent_polys(draw, dim=1, max_terms=4, max_exp=2, max_lam=2, order=1):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        key = tuple(draw(st.integers(-max_exp, max_exp)) for _ in range(dim)) + (draw(st.integers(0, max_lam)),)
        if order == 1:
            terms[key] = draw(small_fractions)
        else:
            from blochband.cyclotomic import CyclotomicNumber, totient

            coeffs = [draw(small_fractions) for _ in range(totient(order))]
            terms[key] = CyclotomicNumber(order, coeffs)
    return LaurentPoly(dim, terms)
