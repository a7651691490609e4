"""Resultants and discriminants in lambda over the Laurent coefficient ring.

Polynomials are handled as coefficient lists ``[c_0, ..., c_D]`` of
lambda-free :class:`LaurentPoly` values.  The resultant uses the
subresultant PRS (Collins / Brown); every division in it is exact in the
Laurent ring and goes through :meth:`LaurentPoly.exact_div`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .laurent import LaurentPoly


def _strip(p: list[LaurentPoly]) -> list[LaurentPoly]:
    while p and not p[-1]:
        p.pop()
    return p


def _degree(p: list[LaurentPoly]) -> int:
    return len(p) - 1


def _prem(a: list[LaurentPoly], b: list[LaurentPoly]) -> list[LaurentPoly]:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b."""
    da, db = _degree(a), _degree(b)
    lb = b[-1]
    r = list(a)
    e = da - db + 1
    for i in range(da, db - 1, -1):
        if len(r) - 1 < i:
            continue
        lr = r[i]
        # r <- lb * r - lr * x^(i-db) * b
        r = [c * lb for c in r]
        for j, bj in enumerate(b):
            r[i - db + j] = r[i - db + j] - lr * bj
        r = _strip(r[:i])
        e -= 1
    if e > 0:
        scale = lb**e
        r = [c * scale for c in r]
    return r


def _pow_ring(x: LaurentPoly, k: int) -> LaurentPoly:
    return x**k


def _resultant_lists(a: list[LaurentPoly], b: list[LaurentPoly], dim: int) -> LaurentPoly:
    one = LaurentPoly.constant(dim, 1)
    da, db = _degree(a), _degree(b)
    sign = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            sign = -sign
    if db == 0:
        return b[0] ** da * sign
    g = one
    h = one
    while True:
        da, db = _degree(a), _degree(b)
        delta = da - db
        if da % 2 and db % 2:
            sign = -sign
        r = _prem(a, b)
        if not r:
            return LaurentPoly.zero(dim)
        a = b
        denom = g * _pow_ring(h, delta)
        b = [c.exact_div(denom) for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = _pow_ring(g, delta).exact_div(_pow_ring(h, delta - 1))
        if _degree(b) == 0:
            da = _degree(a)
            if da == 1:
                h = b[0]
            else:
                h = _pow_ring(b[0], da).exact_div(_pow_ring(h, da - 1))
            return h * sign


def _check_operand(p: LaurentPoly, name: str) -> None:
    if p.is_zero():
        raise ValueError(f"{name} is the zero polynomial")
    if p.lambda_degree < 1:
        raise ValueError(f"{name} has lambda-degree 0")


def resultant_lambda(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    """Res_lambda(p, r), a lambda-free Laurent polynomial.

    It vanishes identically exactly when p and r share a factor of positive
    lambda-degree.
    """
    _check_operand(p, "first operand")
    _check_operand(r, "second operand")
    if p.dim != r.dim:
        from .laurent import DimensionError

        raise DimensionError(f"dimension mismatch: {p.dim} vs {r.dim}")
    return _resultant_lists(p.lambda_coefficients(), r.lambda_coefficients(), p.dim)


def discriminant_lambda(p: LaurentPoly) -> LaurentPoly:
    """Discriminant of p in lambda.

    Res_lambda(p, dp/dlambda) / lc(p), with the sign (-1)^(D(D-1)/2) that makes
    ``lambda^2 + b lambda + c`` map to ``b^2 - 4c``.
    """
    _check_operand(p, "polynomial")
    deg = p.lambda_degree
    if deg == 1:
        return LaurentPoly.constant(p.dim, 1)
    lead = p.lambda_coefficients()[-1]
    res = resultant_lambda(p, p.lambda_derivative())
    disc = res.exact_div(lead)
    if (deg * (deg - 1) // 2) % 2:
        disc = -disc
    return disc


def sylvester_matrix(p: Sequence, r: Sequence) -> list[list]:
    """Sylvester matrix for coefficient lists given low degree first."""
    m, n = len(p) - 1, len(r) - 1
    size = m + n
    zero = 0 * p[0]
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(r)):
            row[i + j] = c
        rows.append(row)
    return rows


def exceeds_symbolic_budget(p: LaurentPoly, r: LaurentPoly, max_sylvester: int = 16, max_terms: int = 20000) -> bool:
    """True when the exact resultant is predicted to be too large to expand."""
    if p.lambda_degree + r.lambda_degree > max_sylvester:
        return True
    return estimated_resultant_terms(p, r) > max_terms


def _spans(p: LaurentPoly) -> list[int]:
    sup = p.z_support()
    if not sup:
        return [0] * p.dim
    return [max(e[j] for e in sup) - min(e[j] for e in sup) for j in range(p.dim)]


def estimated_resultant_terms(p: LaurentPoly, r: LaurentPoly) -> int:
    sp, sr = _spans(p), _spans(r)
    dp, dr = p.lambda_degree, r.lambda_degree
    count = 1
    for a, b in zip(sp, sr):
        count *= dr * a + dp * b + 1
    return count


def resultant_degree_bound(p: LaurentPoly, r: LaurentPoly) -> int:
    """Total-degree bound for the resultant after clearing z-denominators."""
    sp, sr = _spans(p), _spans(r)
    return sum(r.lambda_degree * a + p.lambda_degree * b for a, b in zip(sp, sr))


@dataclass(frozen=True)
class ZeroTestVerdict:
    is_zero: bool
    certain: bool
    trials: int
    per_trial_bound: float
    failure_bound: float
    witness_point: tuple | None = None
    witness_value: object = None

    @property
    def label(self) -> str:
        if not self.is_zero:
            return "nonzero (certain)"
        return "zero (probabilistic)"


def is_zero_probabilistic(
    evaluator: Callable[[tuple[int, ...]], object],
    nvars: int,
    trials: int = 5,
    bound: int = 10**6,
    degree: int = 1,
    rng: random.Random | None = None,
) -> ZeroTestVerdict:
    """Schwartz-Zippel identity test of a black-box polynomial.

    ``evaluator`` receives a tuple of ``nvars`` nonzero integers in
    ``[-bound, bound]`` and must return an exact value.  The reported bound is
    the per-trial failure probability ``degree / (2 * bound + 1)`` raised to
    the number of trials.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = rng or random.Random(0)
    per_trial = min(1.0, degree / (2 * bound + 1))
    for t in range(trials):
        point = tuple(_nonzero(rng, bound) for _ in range(nvars))
        value = evaluator(point)
        if value != 0:
            return ZeroTestVerdict(False, True, t + 1, per_trial, 0.0, point, value)
    return ZeroTestVerdict(True, False, trials, per_trial, per_trial**trials)


def _nonzero(rng: random.Random, bound: int) -> int:
    while True:
        v = rng.randint(-bound, bound)
        if v:
            return v


def specialized_resultant(p: LaurentPoly, r: LaurentPoly, point: Sequence) -> LaurentPoly:
    """Res_lambda(p(point), r(point)) computed exactly in the coefficient field.

    Equals the resultant polynomial evaluated at ``point`` whenever the
    lambda-leading coefficients do not vanish there (always, for constant leads).
    """
    ps, rs = p.specialize(point), r.specialize(point)
    if ps.lambda_degree != p.lambda_degree or rs.lambda_degree != r.lambda_degree:
        raise ArithmeticError("leading coefficient vanished at the sample point")
    return resultant_lambda(ps, rs)


def resultant_evaluator(p: LaurentPoly, r: LaurentPoly) -> Callable[[tuple[int, ...]], object]:
    def evaluate(point):
        value = specialized_resultant(p, r, [Fraction(v) for v in point])
        return 0 if value.is_zero() else value.constant_term()

    return evaluate
