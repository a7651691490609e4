"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element of order ``N`` is stored as a tuple of ``phi(N)`` Fractions, the
coefficients (low degree first) of its canonical representative modulo the
N-th cyclotomic polynomial.  Orders 1 and 2 both have a single coefficient and
are normalised to order 1, so plain rationals always carry ``order == 1``.

The tuple-level helpers (``cyc_*``) are what the polynomial code uses in its
inner loops; :class:`CyclotomicNumber` wraps them for public use.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

Coeffs = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def cyclotomic_minimal_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients (constant term first) of the n-th cyclotomic polynomial.

    Computed as ``(x^n - 1) / prod_{d | n, d < n} Phi_d(x)``.

    >>> cyclotomic_minimal_poly(6)
    (1, -1, 1)
    """
    if n < 1:
        raise ValueError(f"cyclotomic order must be positive, got {n}")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _int_exact_div(num, cyclotomic_minimal_poly(d))
    return tuple(num)


def _int_exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            out[i - dd] = c
            for j, b in enumerate(den):
                num[i - dd + j] -= c * b
    if any(num[:dd]):
        raise ArithmeticError("inexact cyclotomic division")
    return out


def totient(n: int) -> int:
    return len(cyclotomic_minimal_poly(n)) - 1


def canonical_order(n: int) -> int:
    return 1 if n == 2 else n


def cyc_reduce(raw, n: int) -> Coeffs:
    """Reduce a raw coefficient list (any length) modulo Phi_n."""
    phi = cyclotomic_minimal_poly(n)
    deg = len(phi) - 1
    if n > 2 and len(raw) > n:
        # fold modulo x^n - 1 first, which Phi_n divides
        folded = [ZERO] * n
        for i, c in enumerate(raw):
            if c:
                folded[i % n] += c
        raw = folded
    buf = list(raw)
    for i in range(len(buf) - 1, deg - 1, -1):
        c = buf[i]
        if c:
            base = i - deg
            for j in range(deg):
                b = phi[j]
                if b:
                    buf[base + j] -= c * b
    out = buf[:deg]
    if len(out) < deg:
        out.extend([ZERO] * (deg - len(out)))
    return tuple(Fraction(c) for c in out)


def cyc_is_zero(a: Coeffs) -> bool:
    return not any(a)


def cyc_add(a: Coeffs, b: Coeffs) -> Coeffs:
    return tuple(x + y for x, y in zip(a, b))


def cyc_sub(a: Coeffs, b: Coeffs) -> Coeffs:
    return tuple(x - y for x, y in zip(a, b))


def cyc_neg(a: Coeffs) -> Coeffs:
    return tuple(-x for x in a)


def cyc_scale(a: Coeffs, r: Fraction) -> Coeffs:
    return tuple(x * r for x in a)


def cyc_mul_raw(a: Coeffs, b: Coeffs) -> list:
    """Unreduced product; callers accumulate these and reduce once."""
    if len(a) == 1:
        a0 = a[0]
        return [a0 * y for y in b]
    if len(b) == 1:
        b0 = b[0]
        return [x * b0 for x in a]
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def cyc_mul(a: Coeffs, b: Coeffs, n: int) -> Coeffs:
    if len(a) == 1 and len(b) == 1:
        return (a[0] * b[0],)
    return cyc_reduce(cyc_mul_raw(a, b), n)


@lru_cache(maxsize=4096)
def cyc_root_power(n: int, k: int) -> Coeffs:
    """zeta_n ** k as a reduced coefficient tuple."""
    k %= n
    raw = [ZERO] * (k + 1)
    raw[k] = ONE
    return cyc_reduce(raw, n)


def cyc_lift(a: Coeffs, n: int, m: int) -> Coeffs:
    """Re-express an element of Q(zeta_n) in Q(zeta_m); requires n | m."""
    if n == m:
        return a
    if m % n:
        raise ValueError(f"cannot lift order {n} into order {m}")
    step = m // n
    raw = [ZERO] * (step * (len(a) - 1) + 1)
    for i, c in enumerate(a):
        raw[i * step] = c
    return cyc_reduce(raw, m)


def cyc_conj(a: Coeffs, n: int) -> Coeffs:
    if len(a) == 1:
        return a
    raw = [ZERO] * n
    for i, c in enumerate(a):
        raw[(-i) % n] += c
    return cyc_reduce(raw, n)


def cyc_inverse(a: Coeffs, n: int) -> Coeffs:
    """Multiplicative inverse via the extended Euclidean algorithm over Q[x]."""
    if cyc_is_zero(a):
        raise ZeroDivisionError("inverse of zero cyclotomic number")
    if len(a) == 1:
        return (1 / a[0],)
    # invariant: r_i = s_i * a (mod Phi_n)
    r0 = _trim([Fraction(c) for c in cyclotomic_minimal_poly(n)])
    r1 = _trim(list(a))
    s0: list = []
    s1: list = [ONE]
    while len(r1) > 1:
        q, r = _qr_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    # r1 is a nonzero constant
    inv = 1 / r1[0]
    return cyc_reduce([c * inv for c in s1], n)


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: list, b: list) -> list:
    out = [ZERO] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


def _qr_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [ZERO] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lead
        if c:
            q[i - db] = c
            for j, y in enumerate(b):
                a[i - db + j] -= c * y
    return _trim(q), _trim(a[:db])


def cyc_to_complex(a: Coeffs, n: int) -> complex:
    if len(a) == 1:
        return complex(a[0])
    w = cmath.exp(2j * cmath.pi / n)
    return sum((float(c) * w**i for i, c in enumerate(a) if c), 0j)


def cyc_from_rational(r, n: int = 1) -> Coeffs:
    return (Fraction(r),) + (ZERO,) * (totient(n) - 1)


def cyc_render(a: Coeffs, n: int) -> str:
    if n == 1 or not any(a[1:]):
        return _render_fraction(a[0])
    return f"cyc({n})[" + ",".join(_render_fraction(c) for c in a) + "]"


def _render_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class CyclotomicNumber:
    """Element of Q(zeta_N) with exact rational coordinates."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs) -> None:
        if order < 1:
            raise ValueError(f"order must be positive, got {order}")
        coeffs = cyc_reduce([Fraction(c) for c in coeffs], order)
        self.order = canonical_order(order)
        self.coeffs = coeffs

    @classmethod
    def rational(cls, value) -> CyclotomicNumber:
        return cls(1, [Fraction(value)])

    @classmethod
    def root_of_unity(cls, n: int, k: int = 1) -> CyclotomicNumber:
        return cls._raw(n, cyc_root_power(n, k))

    @classmethod
    def _raw(cls, order: int, coeffs: Coeffs) -> CyclotomicNumber:
        obj = cls.__new__(cls)
        obj.order = canonical_order(order)
        obj.coeffs = coeffs
        return obj

    def _common(self, other) -> tuple[int, Coeffs, Coeffs]:
        if not isinstance(other, CyclotomicNumber):
            other = CyclotomicNumber.rational(other)
        n = lcm(self.order, other.order)
        return n, cyc_lift(self.coeffs, self.order, n), cyc_lift(other.coeffs, other.order, n)

    def __add__(self, other):
        n, a, b = self._common(other)
        return CyclotomicNumber._raw(n, cyc_add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        n, a, b = self._common(other)
        return CyclotomicNumber._raw(n, cyc_sub(a, b))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CyclotomicNumber._raw(self.order, cyc_neg(self.coeffs))

    def __mul__(self, other):
        n, a, b = self._common(other)
        return CyclotomicNumber._raw(n, cyc_mul(a, b, n))

    __rmul__ = __mul__

    def __truediv__(self, other):
        n, a, b = self._common(other)
        return CyclotomicNumber._raw(n, cyc_mul(a, cyc_inverse(b, n), n))

    def __pow__(self, k: int):
        if k < 0:
            return CyclotomicNumber._raw(self.order, cyc_inverse(self.coeffs, self.order)) ** (-k)
        result = CyclotomicNumber.rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, (CyclotomicNumber, int, Fraction)):
            return NotImplemented
        _, a, b = self._common(other)
        return a == b

    __hash__ = None  # equal values may live in different orders

    def __bool__(self) -> bool:
        return not cyc_is_zero(self.coeffs)

    def conjugate(self) -> CyclotomicNumber:
        return CyclotomicNumber._raw(self.order, cyc_conj(self.coeffs, self.order))

    def inverse(self) -> CyclotomicNumber:
        return CyclotomicNumber._raw(self.order, cyc_inverse(self.coeffs, self.order))

    def lift(self, n: int) -> Coeffs:
        return cyc_lift(self.coeffs, self.order, n)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __complex__(self) -> complex:
        return cyc_to_complex(self.coeffs, self.order)

    def __repr__(self) -> str:
        return f"CyclotomicNumber({cyc_render(self.coeffs, self.order)})"

    def __str__(self) -> str:
        return cyc_render(self.coeffs, self.order)
