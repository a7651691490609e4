"""Decision procedures on the characteristic Laurent polynomial det(A(z) - lambda I).

Square-freeness and the shift conditions are phrased through irreducible
factors, which are never computed here: a repeated factor is detected by an
identically vanishing lambda-discriminant, and a factor shared between
P(z, lambda) and P(zeta * z, lambda) by an identically vanishing
lambda-resultant.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .eigen import hermitian_eigenvalues
from .lattice import PeriodGroup, support_period_group
from .laurent import LaurentPoly
from .operators import (
    FloquetSymbol,
    OperatorSpec,
    SpecError,
    build_dual_symbol,
    build_schrodinger_symbol,
    eval_symbol_batch,
    validate_hermitian,
    _lcm_all,
)
from .resultant import (
    discriminant_lambda,
    exceeds_symbolic_budget,
    is_zero_probabilistic,
    resultant_degree_bound,
    resultant_evaluator,
    resultant_lambda,
)

HOLDS = "holds"
FAILS = "fails"
CONTINUUM = "continuum-degenerate"
CONDITIONAL = "conditional"


@dataclass
class TestRecord:
    __test__ = False

    name: str
    verdict: str
    method: str = "exact"
    witness: object = None
    probabilistic_bound: float | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "verdict": self.verdict,
            "method": self.method,
            "witness": _witness_json(self.witness),
        }
        if self.probabilistic_bound is not None:
            out["probabilistic_bound"] = self.probabilistic_bound
        if self.details:
            out["details"] = {k: _witness_json(v) for k, v in self.details.items()}
        return out


def _witness_json(w):
    if isinstance(w, LaurentPoly):
        return w.render()
    if isinstance(w, PeriodGroup):
        return w.to_json()
    if isinstance(w, Fraction):
        return str(w)
    if isinstance(w, (list, tuple)):
        return [_witness_json(x) for x in w]
    if isinstance(w, dict):
        return {str(k): _witness_json(v) for k, v in w.items()}
    if w is None or isinstance(w, (int, float, str, bool)):
        return w
    return str(w)


@dataclass
class TestReport:
    __test__ = False  # not a pytest class

    operator: str
    tests: list[TestRecord] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, record: TestRecord) -> TestRecord:
        self.tests.append(record)
        return record

    def all_hold(self) -> bool:
        return all(t.verdict in (HOLDS, CONDITIONAL) for t in self.tests)

    def to_json(self) -> dict:
        return {"operator": self.operator, **self.meta, "tests": [t.to_json() for t in self.tests]}


class CharPoly:
    """det(A(z) - lambda I) together with its size Q."""

    def __init__(self, poly: LaurentPoly, size: int) -> None:
        lead = poly.lambda_coefficients()[-1] if poly else None
        if poly.lambda_degree != size or lead != LaurentPoly.constant(poly.dim, (-1) ** size):
            raise ValueError(f"lambda-leading term of a characteristic polynomial must be (-1)^{size} lambda^{size}")
        self.poly = poly
        self.size = size

    @property
    def dim(self) -> int:
        return self.poly.dim

    def __eq__(self, other) -> bool:
        if isinstance(other, CharPoly):
            return self.poly == other.poly
        return self.poly == other

    __hash__ = None

    def __str__(self) -> str:
        return self.poly.render()


def _as_poly(p) -> LaurentPoly:
    return p.poly if isinstance(p, CharPoly) else p


def _as_charpoly(p) -> CharPoly:
    if isinstance(p, CharPoly):
        return p
    return CharPoly(p, p.lambda_degree)


def charpoly(a: FloquetSymbol) -> CharPoly:
    """Faddeev-LeVerrier recursion over the Laurent ring; only rational divisions occur."""
    verdict = validate_hermitian(a)
    if not verdict:
        raise SpecError(f"symbol is not Hermitian on the torus at entry {verdict.witness}")
    q, d = a.size, a.dim
    one = LaurentPoly.constant(d, 1)
    zero = LaurentPoly.zero(d)
    # det(lambda I - A) = sum c[i] lambda^i
    c = [zero] * (q + 1)
    c[q] = one
    m = [[zero] * q for _ in range(q)]
    for k in range(1, q + 1):
        # M_k = A M_{k-1} + c_{q-k+1} I
        prev = m
        m = [[zero] * q for _ in range(q)]
        for i in range(q):
            for j in range(q):
                acc = zero
                for t in range(q):
                    if a.entries[i][t] and prev[t][j]:
                        acc = acc + a.entries[i][t] * prev[t][j]
                if i == j:
                    acc = acc + c[q - k + 1]
                m[i][j] = acc
        tr = zero
        for i in range(q):
            for t in range(q):
                if a.entries[i][t] and m[t][i]:
                    tr = tr + a.entries[i][t] * m[t][i]
        c[q - k] = tr * Fraction(-1, k)
    sign = (-1) ** q
    poly = LaurentPoly.from_lambda_coefficients(d, [x * sign for x in c])
    return CharPoly(poly, q)


def squarefree_test(p) -> TestRecord:
    poly = _as_poly(p)
    disc = discriminant_lambda(poly)
    if disc:
        return TestRecord("squarefree", HOLDS, witness=disc)
    return TestRecord("squarefree", FAILS, witness=LaurentPoly.zero(poly.dim), details={"discriminant": "identically zero"})


def reduced_shift(m: Sequence[int], n: int) -> tuple[tuple[int, ...], int]:
    """Canonical (m, N) for the shift alpha = m / N modulo Z^d."""
    m = [x % n for x in m]
    g = n
    for x in m:
        g = gcd(g, x)
    return tuple(x // g for x in m), n // g


def shift_label(m: Sequence[int], n: int) -> str:
    return "(" + ", ".join(str(Fraction(x, n)) for x in m) + ")"


def c_alpha_test(
    p,
    m: Sequence[int],
    n: int,
    probabilistic: bool = False,
    trials: int = 5,
    bound: int = 10**6,
    seed: int = 0,
) -> TestRecord:
    """Condition C_alpha for alpha = m / N via Res_lambda(P(z), P(zeta(m, N) z)).

    Any nonzero specialisation at an integer point proves the resultant is
    nonzero, so "holds" verdicts are always exact.  A resultant that vanishes
    at every sample is expanded symbolically unless it exceeds the size
    budget (or ``probabilistic`` is set), in which case the failure verdict
    carries the Schwartz-Zippel bound.
    """
    poly = _as_poly(p)
    if len(m) != poly.dim:
        raise ValueError(f"shift has length {len(m)}, expected {poly.dim}")
    if n < 1 or all(x % n == 0 for x in m):
        raise ValueError("shift m must be nonzero modulo N")
    name = f"c_alpha{shift_label(m, n)}"
    shifted = poly.substitute_shift(m, n)
    deg = max(resultant_degree_bound(poly, shifted), 1)
    zt = is_zero_probabilistic(
        resultant_evaluator(poly, shifted), poly.dim, trials=trials, bound=bound, degree=deg, rng=random.Random(seed)
    )
    details = {"shift": [str(Fraction(x, n)) for x in m], "N": n}
    if not zt.is_zero:
        details["sample_point"] = list(zt.witness_point)
        details["resultant_at_sample"] = str(zt.witness_value)
        return TestRecord(name, HOLDS, witness=None, details=details)
    if probabilistic or exceeds_symbolic_budget(poly, shifted):
        details["resultant"] = "vanished at all samples"
        return TestRecord(name, FAILS, method="probabilistic", witness=list(details["shift"]),
                          probabilistic_bound=zt.failure_bound, details=details)
    res = resultant_lambda(poly, shifted)
    if res:
        details["resultant_terms"] = len(res)
        return TestRecord(name, HOLDS, witness=None, details=details)
    details["resultant"] = "identically zero"
    return TestRecord(name, FAILS, witness=list(details["shift"]), details=details)


def shift_sweep(dim: int, n_max: int) -> list[tuple[tuple[int, ...], int]]:
    """All distinct alpha = m / N != 0 mod Z^d with N <= n_max, in canonical form."""
    seen = set()
    out = []
    for n in range(2, n_max + 1):
        for m in itertools.product(range(n), repeat=dim):
            if not any(m):
                continue
            key = reduced_shift(m, n)
            if key not in seen:
                seen.add(key)
                out.append(key)
    return out


def c_alpha_sweep(p, n_max: int = 6, workers: int = 1, **kwargs) -> list[TestRecord]:
    poly = _as_poly(p)
    shifts = shift_sweep(poly.dim, n_max)
    if workers > 1 and len(shifts) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda mn: c_alpha_test(poly, mn[0], mn[1], **kwargs), shifts))
    return [c_alpha_test(poly, m, n, **kwargs) for m, n in shifts]


def no_nontrivial_periods_certificate(
    p, irreducible: bool = False, n_max: int = 6, probabilistic: bool = False
) -> TestRecord:
    """Trivial support period group + square-free characteristic polynomial.

    With asserted irreducibility the verdict is unconditional.  Otherwise a
    trivial group only yields a conditional verdict, backed by the finite
    C_alpha sweep over N <= n_max.
    """
    poly = _as_poly(p)
    group = support_period_group(poly)
    name = "no_nontrivial_periods"
    if group.continuum:
        return TestRecord(name, CONTINUUM, witness=group,
                          details={"free_directions": [list(v) for v in group.free_directions]})
    if not group.is_trivial():
        periods = [list(map(str, a)) for a in group.elements() if any(a)]
        return TestRecord(name, FAILS, witness=group, details={"periods": periods})
    sq = squarefree_test(poly)
    if sq.verdict != HOLDS:
        return TestRecord(name, FAILS, witness=group, details={"squarefree": FAILS})
    if irreducible:
        return TestRecord(name, HOLDS, witness=group, details={"irreducibility": "asserted"})
    sweep = c_alpha_sweep(poly, n_max, probabilistic=probabilistic)
    failing = [r.name for r in sweep if r.verdict != HOLDS]
    details = {"irreducibility": "not asserted", "sweep_N_max": n_max, "sweep_failures": failing}
    if failing:
        return TestRecord(name, FAILS, witness=group, details=details)
    return TestRecord(name, CONDITIONAL, witness=group, details=details)


def offset_test(p, a, m: Sequence[int], n: int) -> TestRecord:
    """Refute P(z, lambda) == P(zeta(m, N) z, lambda + a) through the (-lambda)^(Q-1) coefficient.

    That coefficient is Tr A(z); its constant Fourier term is shift-invariant,
    while the lambda translation moves it by -Q a.
    """
    a = Fraction(a)
    if a == 0:
        raise ValueError("offset a must be nonzero")
    poly = _as_poly(p)
    q = poly.lambda_degree
    if q < 1:
        raise ValueError("polynomial must depend on lambda")
    shifted = poly.substitute_shift(m, n).shift_lambda(a)
    sign = (-1) ** (q - 1)
    before = poly.lambda_coefficients()[q - 1].constant_term() * sign
    after = shifted.lambda_coefficients()[q - 1].constant_term() * sign
    diff = after - before
    name = f"offset(a={a}, alpha={shift_label(m, n)})"
    details = {"trace_constant_original": str(before), "trace_constant_shifted": str(after),
               "difference": str(diff), "expected_difference": str(-q * a)}
    verdict = HOLDS if diff else FAILS
    return TestRecord(name, verdict, witness=[str(before), str(after)], details=details)


def h_product(spec: OperatorSpec) -> LaurentPoly:
    """prod over root-of-unity tuples rho of (sum_j rho_j z_j - lambda)."""
    d, q = spec.dimension, spec.periods
    order = _lcm_all(q)
    from .cyclotomic import CyclotomicNumber, cyc_root_power

    lam = LaurentPoly.lam(d)
    h = LaurentPoly.constant(d, 1)
    for n in spec.domain_points():
        factor = -lam
        for j in range(d):
            rho = CyclotomicNumber._raw(order, cyc_root_power(order, n[j] * (order // q[j])))
            factor = factor + LaurentPoly.monomial(d, [int(i == j) for i in range(d)], 0, rho)
        h = h * factor
    return h


def top_component_check(spec: OperatorSpec, n_max: int = 6) -> TestRecord:
    if spec.kind != "schrodinger":
        raise SpecError("top_component_check needs a schrodinger spec")
    dual = charpoly(build_dual_symbol(spec)).poly
    top = dual.top_total_degree_component()
    h = h_product(spec)
    details = {"top_component": top, "h": h}
    if top != h:
        return TestRecord("top_component", FAILS, witness=top, details=details)
    q = spec.periods
    checked = 0
    for m, n in shift_sweep(spec.dimension, n_max):
        # zeta^q == 1 exactly when every m_j q_j is divisible by N
        if all((mj * qj) % n == 0 for mj, qj in zip(m, q)):
            continue
        checked += 1
        if h.substitute_shift(m, n) == h:
            details["invariant_shift"] = shift_label(m, n)
            return TestRecord("top_component", FAILS, witness=shift_label(m, n), details=details)
    details["shifts_checked"] = checked
    return TestRecord("top_component", HOLDS, witness=h, details=details)


def dual_consistency_check(spec: OperatorSpec, samples: int = 100, seed: int = 0, tol: float = 1e-9) -> TestRecord:
    if spec.kind != "schrodinger":
        raise SpecError("dual_consistency_check needs a schrodinger spec")
    direct_sym = build_schrodinger_symbol(spec)
    dual_sym = build_dual_symbol(spec)
    direct = charpoly(direct_sym).poly
    dual = charpoly(dual_sym).poly
    exact = dual == direct.power_substitute(spec.periods)
    rng = np.random.default_rng(seed)
    ks = rng.random((samples, spec.dimension))
    q = np.asarray(spec.periods, dtype=float)
    mats_direct = eval_symbol_batch(direct_sym, ks * q)
    mats_dual = eval_symbol_batch(dual_sym, ks)
    worst = 0.0
    for md, mu in zip(mats_direct, mats_dual):
        ed, eu = hermitian_eigenvalues(md), hermitian_eigenvalues(mu)
        worst = max(worst, float(np.max(np.abs(ed - eu))))
    details = {"exact_identity": exact, "samples": samples, "max_eigenvalue_gap": worst}
    ok = exact and worst <= tol
    return TestRecord("dual_consistency", HOLDS if ok else FAILS, witness=None if ok else worst, details=details)
