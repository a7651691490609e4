"""Exact band-overlap and period criteria for periodic graph operators."""

__version__ = "0.1.0"

from .bands import BandGrid, OverlapReport, decay_series, degeneracy_statistic, offset_statistic, overlap_statistic, sweep_grid
from .cyclotomic import CyclotomicNumber, cyclotomic_minimal_poly
from .eigen import hermitian_eigenvalues
from .lattice import PeriodGroup, support_period_group
from .laurent import LaurentPoly, lp_arith, lp_eval_numeric
from .operators import (
    FloquetSymbol,
    OperatorSpec,
    build_dual_symbol,
    build_graph_symbol,
    build_schrodinger_symbol,
    build_symbol,
    dft_potential,
    eval_symbol,
    graph_spec,
    schrodinger_spec,
    validate_hermitian,
)
from .resultant import discriminant_lambda, is_zero_probabilistic, resultant_lambda
from .specio import parse_spec, parse_spec_text
from .varieties import (
    CharPoly,
    TestReport,
    c_alpha_test,
    charpoly,
    dual_consistency_check,
    no_nontrivial_periods_certificate,
    offset_test,
    squarefree_test,
    top_component_check,
)
