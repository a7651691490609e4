"""Multivariate Laurent polynomials in z_1..z_d, polynomial in lambda.

Coefficients live in a single cyclotomic field Q(zeta_N) per polynomial;
mixing orders lifts both operands to the lcm order.  A term is keyed by the
exponent tuple ``(n_1, ..., n_d, j)`` for ``z^n lambda^j``; iteration is in
lexicographic key order so renderings are reproducible.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cyclotomic import (
    ZERO,
    CyclotomicNumber,
    canonical_order,
    cyc_add,
    cyc_conj,
    cyc_from_rational,
    cyc_inverse,
    cyc_is_zero,
    cyc_lift,
    cyc_mul,
    cyc_mul_raw,
    cyc_neg,
    cyc_reduce,
    cyc_render,
    cyc_root_power,
    cyc_scale,
    cyc_to_complex,
    lcm,
    totient,
)

Key = tuple  # (z exponents..., lambda degree)


class DimensionError(ValueError):
    """Operands or arguments disagree on the number of z variables."""


def _coerce_coeff(c, order: int):
    """Return (order, coeffs) for a scalar coefficient."""
    if isinstance(c, CyclotomicNumber):
        n = lcm(order, c.order)
        return n, c.lift(n)
    if isinstance(c, tuple):
        return order, c
    if isinstance(c, float):
        raise TypeError("floating coefficients are not exact; use Fraction")
    return order, cyc_from_rational(Fraction(c), order)


class LaurentPoly:
    __slots__ = ("dim", "order", "_terms", "_sorted")

    def __init__(self, dim: int, terms: Mapping | None = None, order: int = 1) -> None:
        order = canonical_order(order)
        raw = {}
        if terms:
            for key, c in terms.items():
                key = tuple(int(e) for e in key)
                if len(key) == dim:
                    key = key + (0,)
                if len(key) != dim + 1:
                    raise DimensionError(f"exponent {key} does not match dimension {dim}")
                if key[-1] < 0:
                    raise ValueError("lambda degree must be non-negative")
                n, coeffs = _coerce_coeff(c, order)
                if n != order:
                    raw = {k: cyc_lift(v, order, n) for k, v in raw.items()}
                    order = n
                raw[key] = cyc_add(raw[key], coeffs) if key in raw else coeffs
        self.dim = dim
        self.order = order
        self._terms = {k: v for k, v in raw.items() if not cyc_is_zero(v)}
        self._sorted = None
        if order > 1 and all(not any(c[1:]) for c in self._terms.values()):
            self._terms = {k: c[:1] for k, c in self._terms.items()}
            self.order = 1

    @classmethod
    def _make(cls, dim: int, order: int, terms: dict) -> LaurentPoly:
        # trusted constructor: coefficients already reduced in `order`, no zeros
        obj = cls.__new__(cls)
        obj.dim = dim
        order = canonical_order(order)
        if order > 1 and all(not any(c[1:]) for c in terms.values()):
            terms = {k: c[:1] for k, c in terms.items()}
            order = 1
        obj.order = order
        obj._terms = terms
        obj._sorted = None
        return obj

    # ---- constructors -------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> LaurentPoly:
        return cls._make(dim, 1, {})

    @classmethod
    def constant(cls, dim: int, c=1) -> LaurentPoly:
        return cls(dim, {(0,) * (dim + 1): c})

    @classmethod
    def monomial(cls, dim: int, z_exp: Sequence[int], lam_deg: int = 0, coeff=1) -> LaurentPoly:
        if len(z_exp) != dim:
            raise DimensionError(f"expected {dim} exponents, got {len(z_exp)}")
        return cls(dim, {tuple(z_exp) + (lam_deg,): coeff})

    @classmethod
    def z(cls, dim: int, j: int, power: int = 1) -> LaurentPoly:
        exp = [0] * dim
        exp[j] = power
        return cls.monomial(dim, exp)

    @classmethod
    def lam(cls, dim: int, power: int = 1) -> LaurentPoly:
        return cls.monomial(dim, (0,) * dim, power)

    # ---- inspection ---------------------------------------------------
    def items(self) -> list[tuple[Key, tuple]]:
        if self._sorted is None:
            self._sorted = sorted(self._terms.items())
        return self._sorted

    def coeff(self, z_exp: Sequence[int], lam_deg: int = 0) -> CyclotomicNumber:
        c = self._terms.get(tuple(z_exp) + (lam_deg,))
        if c is None:
            return CyclotomicNumber.rational(0)
        return CyclotomicNumber._raw(self.order, c)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def lambda_degree(self) -> int:
        if not self._terms:
            return -1
        return max(k[-1] for k in self._terms)

    def z_support(self) -> list[tuple[int, ...]]:
        return sorted({k[:-1] for k in self._terms})

    def is_constant(self) -> bool:
        return all(not any(k) for k in self._terms)

    def depends_on_lambda(self) -> bool:
        return any(k[-1] for k in self._terms)

    # ---- ring operations ----------------------------------------------
    def _aligned(self, other: LaurentPoly) -> tuple[int, dict, dict]:
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.order == other.order:
            return self.order, self._terms, other._terms
        n = lcm(self.order, other.order)
        return n, self.lifted_terms(n), other.lifted_terms(n)

    def lifted_terms(self, n: int) -> dict:
        if n == self.order:
            return self._terms
        return {k: cyc_lift(v, self.order, n) for k, v in self._terms.items()}

    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.constant(self.dim, other)

    def __add__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        n, a, b = self._aligned(other)
        out = dict(a)
        for k, v in b.items():
            if k in out:
                s = cyc_add(out[k], v)
                if cyc_is_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = v
        return LaurentPoly._make(self.dim, n, out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._make(self.dim, self.order, {k: cyc_neg(v) for k, v in self._terms.items()})

    def __sub__(self, other) -> LaurentPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> LaurentPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return LaurentPoly.zero(self.dim)
            r = Fraction(other)
            return LaurentPoly._make(self.dim, self.order, {k: cyc_scale(v, r) for k, v in self._terms.items()})
        other = self._coerce(other)
        n, a, b = self._aligned(other)
        if len(a) > len(b):
            a, b = b, a
        acc: dict = {}
        if totient(n) == 1:
            for ka, va in a.items():
                x = va[0]
                for kb, vb in b.items():
                    key = tuple(p + q for p, q in zip(ka, kb))
                    acc[key] = acc.get(key, ZERO) + x * vb[0]
            out = {k: (v,) for k, v in acc.items() if v}
        else:
            for ka, va in a.items():
                for kb, vb in b.items():
                    key = tuple(p + q for p, q in zip(ka, kb))
                    prod = cyc_mul_raw(va, vb)
                    cur = acc.get(key)
                    if cur is None:
                        acc[key] = prod
                    else:
                        if len(cur) < len(prod):
                            cur.extend([ZERO] * (len(prod) - len(cur)))
                        for i, c in enumerate(prod):
                            cur[i] += c
            out = {}
            for k, raw in acc.items():
                c = cyc_reduce(raw, n)
                if not cyc_is_zero(c):
                    out[k] = c
        return LaurentPoly._make(self.dim, n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            raise ValueError("negative powers are only defined for monomials")
        result = LaurentPoly.constant(self.dim, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            other = LaurentPoly.constant(self.dim, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.dim != other.dim:
            return False
        _, a, b = self._aligned(other)
        return a == b

    __hash__ = None

    def __repr__(self) -> str:
        return f"LaurentPoly(d={self.dim}, {self.render()})"

    def __str__(self) -> str:
        return self.render()

    def render(self) -> str:
        """Canonical text: sorted terms, coefficients as p/q or cyc(N)[...]."""
        if not self._terms:
            return "0"
        parts = []
        for key, c in self.items():
            mono = [f"z{j + 1}^{e}" for j, e in enumerate(key[:-1]) if e]
            if key[-1]:
                mono.append(f"lambda^{key[-1]}")
            coeff = cyc_render(c, self.order)
            parts.append(coeff + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)

    # ---- substitutions ------------------------------------------------
    def substitute_shift(self, m: Sequence[int], n: int) -> LaurentPoly:
        """P(zeta(m, n) * z, lambda) with zeta_j = exp(2 pi i m_j / n)."""
        if len(m) != self.dim:
            raise DimensionError(f"shift has length {len(m)}, expected {self.dim}")
        if n < 1:
            raise ValueError("shift denominator must be positive")
        order = lcm(self.order, n)
        terms = self.lifted_terms(order)
        out = {}
        for key, c in terms.items():
            k = sum(mj * ej for mj, ej in zip(m, key[:-1])) % n
            if k:
                c = cyc_mul(c, cyc_root_power(order, k * (order // n)), order)
            out[key] = c
        return LaurentPoly._make(self.dim, order, out)

    def lambda_derivative(self) -> LaurentPoly:
        out = {}
        for key, c in self._terms.items():
            j = key[-1]
            if j:
                out[key[:-1] + (j - 1,)] = cyc_scale(c, Fraction(j))
        return LaurentPoly._make(self.dim, self.order, out)

    def shift_lambda(self, a) -> LaurentPoly:
        """P(z, lambda + a) for a rational a."""
        a = Fraction(a)
        coeffs = self.lambda_coefficients()
        result = LaurentPoly.zero(self.dim)
        lin = LaurentPoly.lam(self.dim) + LaurentPoly.constant(self.dim, a)
        # Horner in lambda + a
        for c in reversed(coeffs):
            result = result * lin + c
        return result

    def power_substitute(self, q: Sequence[int]) -> LaurentPoly:
        """P(z_1^{q_1}, ..., z_d^{q_d}, lambda)."""
        if len(q) != self.dim:
            raise DimensionError(f"expected {self.dim} powers, got {len(q)}")
        out = {tuple(e * qj for e, qj in zip(key[:-1], q)) + (key[-1],): c for key, c in self._terms.items()}
        return LaurentPoly._make(self.dim, self.order, out)

    def reflect_conjugate(self) -> LaurentPoly:
        """Coefficient-conjugate of P(1/z, lambda); equals conj(P) on the unit torus."""
        out = {tuple(-e for e in key[:-1]) + (key[-1],): cyc_conj(c, self.order) for key, c in self._terms.items()}
        return LaurentPoly._make(self.dim, self.order, out)

    def monomial_content(self) -> tuple[int, ...]:
        """Componentwise minimum z-exponent (the gcd monomial of a Laurent polynomial)."""
        if not self._terms:
            return (0,) * self.dim
        return tuple(min(k[j] for k in self._terms) for j in range(self.dim))

    def mul_monomial(self, z_exp: Sequence[int]) -> LaurentPoly:
        out = {tuple(e + s for e, s in zip(key[:-1], z_exp)) + (key[-1],): c for key, c in self._terms.items()}
        return LaurentPoly._make(self.dim, self.order, out)

    def normalize_monomial(self) -> LaurentPoly:
        return self.mul_monomial([-c for c in self.monomial_content()])

    def top_total_degree_component(self) -> LaurentPoly:
        """Terms maximising (sum of z-exponents + lambda degree)."""
        if not self._terms:
            return self
        top = max(sum(k) for k in self._terms)
        return LaurentPoly._make(self.dim, self.order, {k: c for k, c in self._terms.items() if sum(k) == top})

    # ---- lambda structure ----------------------------------------------
    def lambda_coefficients(self) -> list[LaurentPoly]:
        """[c_0, ..., c_D] with P = sum c_j lambda^j and c_j free of lambda."""
        deg = self.lambda_degree
        buckets: list[dict] = [{} for _ in range(max(deg + 1, 0))]
        for key, c in self._terms.items():
            buckets[key[-1]][key[:-1] + (0,)] = c
        return [LaurentPoly._make(self.dim, self.order, b) for b in buckets]

    @classmethod
    def from_lambda_coefficients(cls, dim: int, coeffs: Sequence[LaurentPoly]) -> LaurentPoly:
        result = LaurentPoly.zero(dim)
        for j, c in enumerate(coeffs):
            if c:
                result = result + c.mul_lambda(j)
        return result

    def mul_lambda(self, j: int) -> LaurentPoly:
        out = {key[:-1] + (key[-1] + j,): c for key, c in self._terms.items()}
        return LaurentPoly._make(self.dim, self.order, out)

    def constant_term(self) -> CyclotomicNumber:
        return self.coeff((0,) * self.dim, 0)

    # ---- evaluation ---------------------------------------------------
    def eval_numeric(self, z0: Sequence[complex], lam0: complex = 0.0) -> complex:
        if len(z0) != self.dim:
            raise DimensionError(f"point has {len(z0)} coordinates, expected {self.dim}")
        if any(v == 0 for v in z0):
            raise ZeroDivisionError("z coordinates must be nonzero")
        total = 0j
        for key, c in self.items():
            val = cyc_to_complex(c, self.order)
            for zj, e in zip(z0, key[:-1]):
                if e:
                    val *= complex(zj) ** e
            if key[-1]:
                val *= complex(lam0) ** key[-1]
            total += val
        return total

    def specialize(self, z0: Sequence) -> LaurentPoly:
        """Exact substitution z = z0 (nonzero rationals); returns a 0-dimensional poly in lambda."""
        if len(z0) != self.dim:
            raise DimensionError(f"point has {len(z0)} coordinates, expected {self.dim}")
        z0 = [Fraction(v) for v in z0]
        if any(v == 0 for v in z0):
            raise ZeroDivisionError("z coordinates must be nonzero")
        acc: dict = {}
        for key, c in self._terms.items():
            factor = Fraction(1)
            for zj, e in zip(z0, key[:-1]):
                if e:
                    factor *= zj**e
            k = (key[-1],)
            scaled = cyc_scale(c, factor)
            acc[k] = cyc_add(acc[k], scaled) if k in acc else scaled
        return LaurentPoly._make(0, self.order, {k: v for k, v in acc.items() if not cyc_is_zero(v)})

    # ---- exact division -------------------------------------------------
    def exact_div(self, other: LaurentPoly) -> LaurentPoly:
        """Quotient of an exact division in the Laurent ring; raises if inexact.

        Lex order is a group order on exponent vectors, so leading terms
        multiply; quotient exponents are confined to a box derived from the
        per-variable exponent ranges, which guarantees termination.
        """
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        n, a, b = self._aligned(other)
        if not a:
            return LaurentPoly.zero(self.dim)
        if len(b) == 1:
            (kb, vb), = b.items()
            inv = cyc_inverse(vb, n)
            out = {}
            for ka, va in a.items():
                kq = tuple(p - q for p, q in zip(ka, kb))
                if kq[-1] < 0:
                    raise ArithmeticError("inexact division")
                out[kq] = cyc_mul(va, inv, n)
            return LaurentPoly._make(self.dim, n, out)
        width = self.dim + 1
        lo = [min(k[j] for k in a) - min(k[j] for k in b) for j in range(width)]
        hi = [max(k[j] for k in a) - max(k[j] for k in b) for j in range(width)]
        lead_b = max(b)
        inv = cyc_inverse(b[lead_b], n)
        rem = dict(a)
        quot = {}
        while rem:
            lead_r = max(rem)
            kq = tuple(p - q for p, q in zip(lead_r, lead_b))
            if any(e < l or e > h for e, l, h in zip(kq, lo, hi)) or kq in quot:
                raise ArithmeticError("inexact division")
            cq = cyc_mul(rem[lead_r], inv, n)
            quot[kq] = cq
            for kb_, vb_ in b.items():
                key = tuple(p + q for p, q in zip(kq, kb_))
                sub = cyc_mul(cq, vb_, n)
                cur = rem.get(key)
                new = cyc_neg(sub) if cur is None else cyc_add(cur, cyc_neg(sub))
                if cyc_is_zero(new):
                    rem.pop(key, None)
                else:
                    rem[key] = new
        return LaurentPoly._make(self.dim, n, quot)


def from_terms(dim: int, terms: Iterable[tuple[Sequence[int], int, object]]) -> LaurentPoly:
    """Build from (z-exponents, lambda-degree, coefficient) triples; repeated keys add."""
    result = LaurentPoly.zero(dim)
    for z_exp, j, c in terms:
        result = result + LaurentPoly.monomial(dim, z_exp, j, c)
    return result


def lp_arith(p: LaurentPoly, r: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return p + r
    if op == "mul":
        return p * r
    raise ValueError(f"unknown operation {op!r}")


def lp_eval_numeric(p: LaurentPoly, z0: Sequence[complex], lam0: complex = 0.0) -> complex:
    return p.eval_numeric(z0, lam0)


def torus_point(k: Sequence[float]) -> list[complex]:
    return [cmath.exp(2j * cmath.pi * kj) for kj in k]
