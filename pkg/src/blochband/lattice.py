"""Period groups of Laurent polynomials via Smith normal form.

P(zeta * z, lambda) == P(z, lambda) with zeta_j = exp(2 pi i alpha_j) holds
exactly when n . alpha is an integer for every z-exponent n in the support of
P.  The solutions modulo Z^d form the dual of the support lattice, read off
from its Smith normal form.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from .laurent import LaurentPoly


def smith_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[int], list[list[int]]]:
    """Return (invariant factors, C) with U * M * C = diag(factors) for some unimodular U.

    ``C`` is the unimodular column transform (ncols x ncols).  Only the first
    ``rank`` factors are returned; they are positive and each divides the next.
    """
    a = [list(map(int, r)) for r in rows]
    k = len(a)
    c = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in c:
            row[i], row[j] = row[j], row[i]

    def add_col(src, dst, mult):
        # col[dst] += mult * col[src]
        for row in a:
            row[dst] += mult * row[src]
        for row in c:
            row[dst] += mult * row[src]

    factors = []
    t = 0
    while t < min(k, ncols):
        entries = [(abs(a[i][j]), i, j) for i in range(t, k) for j in range(t, ncols) if a[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        a[t], a[pi] = a[pi], a[t]
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, k):
                if a[i][t]:
                    qt = a[i][t] // p
                    a[i] = [x - qt * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if not done:
                entries = [(abs(a[i][t]), i, t) for i in range(t, k) if a[i][t]]
                entries += [(abs(a[t][j]), t, j) for j in range(t, ncols) if a[t][j]]
                _, pi, pj = min(entries)
                a[t], a[pi] = a[pi], a[t]
                swap_cols(t, pj)
                continue
            bad = next(
                (i for i in range(t + 1, k) for j in range(t + 1, ncols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
        factors.append(a[t][t])
        t += 1
    return factors, c


@dataclass(frozen=True)
class PeriodGroup:
    """Shifts alpha in Q^d / Z^d leaving a polynomial fixed under z -> zeta(alpha) * z.

    ``continuum`` is set when the support exponents do not span Q^d; the
    invariance set then contains a positive-dimensional torus and ``order`` is
    None.  ``generators`` always lists the finite-order part.
    """

    dim: int
    generators: tuple[tuple[Fraction, ...], ...]
    invariant_factors: tuple[int, ...]
    continuum: bool = False
    free_directions: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def order(self) -> int | None:
        if self.continuum:
            return None
        return prod(self.invariant_factors)

    def is_trivial(self) -> bool:
        return not self.continuum and self.order == 1

    def elements(self) -> list[tuple[Fraction, ...]]:
        if self.continuum:
            raise ValueError("continuum of periods: the group is infinite")
        gens = [(g, f) for g, f in zip(self.generators, self.nontrivial_factors)]
        out = set()
        for ts in itertools.product(*(range(f) for _, f in gens)):
            alpha = [Fraction(0)] * self.dim
            for t, (g, _) in zip(ts, gens):
                alpha = [x + t * y for x, y in zip(alpha, g)]
            out.add(tuple(x % 1 for x in alpha))
        return sorted(out)

    @property
    def nontrivial_factors(self) -> tuple[int, ...]:
        return tuple(f for f in self.invariant_factors if f > 1)

    def contains(self, alpha: Sequence) -> bool:
        alpha = tuple(Fraction(x) % 1 for x in alpha)
        if self.continuum:
            raise ValueError("membership in a continuum is decided by the support directly")
        return alpha in set(self.elements())

    def to_json(self) -> dict:
        return {
            "dimension": self.dim,
            "continuum": self.continuum,
            "order": self.order,
            "invariant_factors": list(self.invariant_factors),
            "generators": [[str(x) for x in g] for g in self.generators],
        }


def lattice_period_group(exponents: Sequence[Sequence[int]], dim: int) -> PeriodGroup:
    rows = [list(e) for e in exponents if any(e)]
    factors, c = smith_normal_form(rows, dim)
    rank = len(factors)
    gens = []
    for i, f in enumerate(factors):
        if f > 1:
            gens.append(tuple(Fraction(c[r][i], f) % 1 for r in range(dim)))
    free = tuple(tuple(c[r][i] for r in range(dim)) for i in range(rank, dim))
    return PeriodGroup(
        dim=dim,
        generators=tuple(gens),
        invariant_factors=tuple(factors),
        continuum=rank < dim,
        free_directions=free,
    )


def support_period_group(p: LaurentPoly) -> PeriodGroup:
    """Group of shifts alpha with P(zeta(alpha) * z, lambda) identical to P."""
    if p.is_zero():
        raise ValueError("the zero polynomial is invariant under every shift")
    return lattice_period_group(p.z_support(), p.dim)
