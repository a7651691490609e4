"""Floquet symbols of periodic operators.

Two sources are supported: the discrete Schrodinger operator Delta + V on
Z^d with a Gamma-periodic potential (direct form on the fundamental domain,
or the dual diagonal-kinetic form), and general Hermitian quotient-graph
operators given by an edge list.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Mapping, Sequence

import numpy as np

from .cyclotomic import CyclotomicNumber, cyc_root_power, lcm
from .laurent import LaurentPoly


class SpecError(ValueError):
    """An operator description violates one of its invariants."""


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    shift: tuple[int, ...]
    weight: CyclotomicNumber


@dataclass(frozen=True)
class OperatorSpec:
    kind: str
    dimension: int
    periods: tuple[int, ...] = ()
    potential: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)
    vertices: int = 0
    edges: tuple[Edge, ...] = ()
    onsite: Mapping[int, Fraction] = field(default_factory=dict)
    name: str = ""

    @property
    def size(self) -> int:
        """Q: the number of sites in a fundamental domain."""
        if self.kind == "schrodinger":
            return prod(self.periods)
        return self.vertices

    def domain_points(self) -> list[tuple[int, ...]]:
        """Fundamental-domain points in row-major order."""
        return list(itertools.product(*(range(q) for q in self.periods)))

    def validate(self) -> None:
        if self.dimension < 1:
            raise SpecError(f"dimension must be positive, got {self.dimension}")
        if self.kind == "schrodinger":
            if len(self.periods) != self.dimension or any(q < 1 for q in self.periods):
                raise SpecError(f"periods {self.periods} do not match dimension {self.dimension}")
            expected = set(self.domain_points())
            got = set(self.potential)
            if got != expected:
                missing = sorted(expected - got)
                extra = sorted(got - expected)
                raise SpecError(f"malformed potential table: missing {missing}, unexpected {extra}")
        elif self.kind == "graph":
            if self.vertices < 1:
                raise SpecError("graph needs at least one vertex")
            for e in self.edges:
                if not (0 <= e.source < self.vertices and 0 <= e.target < self.vertices):
                    raise SpecError(f"edge {_edge_str(e)} references a missing vertex")
                if len(e.shift) != self.dimension:
                    raise SpecError(f"edge {_edge_str(e)} has a shift of the wrong length")
            for v in self.onsite:
                if not 0 <= v < self.vertices:
                    raise SpecError(f"onsite value for missing vertex {v}")
            missing = _unpaired_edge(self)
            if missing is not None:
                raise SpecError(f"edge {_edge_str(missing)} has no conjugate reverse edge")
        else:
            raise SpecError(f"unknown operator kind {self.kind!r}")


def _edge_str(e: Edge) -> str:
    return f"({e.source}, {e.target}, {list(e.shift)}, {e.weight})"


def _unpaired_edge(spec: OperatorSpec) -> Edge | None:
    # multiset matching: every edge needs its own conjugate partner
    pool: dict = {}
    for e in spec.edges:
        pool.setdefault((e.source, e.target, e.shift), []).append(e.weight)
    for e in spec.edges:
        partners = pool.get((e.target, e.source, tuple(-s for s in e.shift)), [])
        want = e.weight.conjugate()
        n_self = sum(1 for w in pool[(e.source, e.target, e.shift)] if w == e.weight)
        n_partner = sum(1 for w in partners if w == want)
        if n_partner < n_self:
            return e
    return None


class FloquetSymbol:
    """Q x Q matrix of lambda-free Laurent polynomials in z."""

    def __init__(self, entries: Sequence[Sequence[LaurentPoly]], dim: int) -> None:
        self.size = len(entries)
        if any(len(row) != self.size for row in entries):
            raise ValueError("symbol must be square")
        self.dim = dim
        self.entries = tuple(tuple(row) for row in entries)
        self._compiled = None

    def __getitem__(self, ij: tuple[int, int]) -> LaurentPoly:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FloquetSymbol):
            return NotImplemented
        return self.size == other.size and all(
            a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    __hash__ = None

    def trace(self) -> LaurentPoly:
        total = LaurentPoly.zero(self.dim)
        for i in range(self.size):
            total = total + self.entries[i][i]
        return total

    def compiled(self) -> list:
        """Per entry: (exponent matrix, complex coefficients) for fast evaluation."""
        if self._compiled is None:
            out = []
            for row in self.entries:
                crow = []
                for p in row:
                    exps = np.array([k[:-1] for k, _ in p.items()], dtype=float).reshape(-1, self.dim)
                    coeffs = np.array([complex(p.coeff(k[:-1])) for k, _ in p.items()], dtype=complex)
                    crow.append((exps, coeffs))
                out.append(crow)
            self._compiled = out
        return self._compiled

    def render(self) -> list[list[str]]:
        return [[p.render() for p in row] for row in self.entries]


def _zero_matrix(q: int, dim: int) -> list[list[LaurentPoly]]:
    return [[LaurentPoly.zero(dim) for _ in range(q)] for _ in range(q)]


def build_schrodinger_symbol(spec: OperatorSpec) -> FloquetSymbol:
    """Delta + V restricted to the fundamental domain with Floquet-Bloch boundary conditions.

    Hops that leave the domain through face j pick up z_j (forward) or
    z_j^-1 (backward); coincident hops for q_j in {1, 2} simply add up.
    """
    if spec.kind != "schrodinger":
        raise SpecError("build_schrodinger_symbol needs a schrodinger spec")
    spec.validate()
    d, q = spec.dimension, spec.periods
    points = spec.domain_points()
    index = {n: i for i, n in enumerate(points)}
    mat = _zero_matrix(len(points), d)
    for n in points:
        i = index[n]
        mat[i][i] = mat[i][i] + LaurentPoly.constant(d, spec.potential[n])
        for j in range(d):
            for step in (1, -1):
                m = list(n)
                m[j] += step
                wrap = 0
                if m[j] == q[j]:
                    m[j], wrap = 0, 1
                elif m[j] < 0:
                    m[j], wrap = q[j] - 1, -1
                k = index[tuple(m)]
                mat[i][k] = mat[i][k] + LaurentPoly.z(d, j, wrap)
    return FloquetSymbol(mat, d)


def build_graph_symbol(spec: OperatorSpec) -> FloquetSymbol:
    if spec.kind != "graph":
        raise SpecError("build_graph_symbol needs a graph spec")
    spec.validate()
    d = spec.dimension
    mat = _zero_matrix(spec.vertices, d)
    for e in spec.edges:
        term = LaurentPoly.monomial(d, e.shift, 0, e.weight)
        mat[e.source][e.target] = mat[e.source][e.target] + term
    for v, c in spec.onsite.items():
        mat[v][v] = mat[v][v] + LaurentPoly.constant(d, c)
    return FloquetSymbol(mat, d)


def build_symbol(spec: OperatorSpec) -> FloquetSymbol:
    if spec.kind == "schrodinger":
        return build_schrodinger_symbol(spec)
    return build_graph_symbol(spec)


@dataclass(frozen=True)
class PotentialSpectrumTable:
    periods: tuple[int, ...]
    values: Mapping[tuple[int, ...], CyclotomicNumber]

    def __getitem__(self, m: Sequence[int]) -> CyclotomicNumber:
        key = tuple(mj % qj for mj, qj in zip(m, self.periods))
        return self.values[key]


def dft_potential(spec: OperatorSpec) -> PotentialSpectrumTable:
    """V_hat(m) = (1/Q) sum_n V(n) omega^(-n . m), exact in Q(zeta_lcm(q))."""
    if spec.kind != "schrodinger":
        raise SpecError("dft_potential needs a schrodinger spec")
    spec.validate()
    q = spec.periods
    order = _lcm_all(q)
    points = spec.domain_points()
    inv_q = Fraction(1, len(points))
    table = {}
    for m in points:
        total = CyclotomicNumber.rational(0)
        for n in points:
            v = spec.potential[n]
            if v:
                k = -sum(nj * mj * (order // qj) for nj, mj, qj in zip(n, m, q))
                total = total + CyclotomicNumber._raw(order, cyc_root_power(order, k)) * v
        table[m] = total * inv_q
    return PotentialSpectrumTable(q, table)


def inverse_dft(table: PotentialSpectrumTable) -> dict[tuple[int, ...], CyclotomicNumber]:
    q = table.periods
    order = _lcm_all(q)
    points = list(itertools.product(*(range(qj) for qj in q)))
    out = {}
    for n in points:
        total = CyclotomicNumber.rational(0)
        for m in points:
            k = sum(nj * mj * (order // qj) for nj, mj, qj in zip(n, m, q))
            total = total + table.values[m] * CyclotomicNumber._raw(order, cyc_root_power(order, k))
        out[n] = total
    return out


def _lcm_all(q: Sequence[int]) -> int:
    out = 1
    for x in q:
        out = lcm(out, x)
    return out


def build_dual_symbol(spec: OperatorSpec) -> FloquetSymbol:
    """B_0 + B_V: kinetic part diagonal over root-of-unity twists, potential via its DFT.

    Unitarily equivalent to the direct symbol evaluated at z^q.
    """
    table = dft_potential(spec)
    d, q = spec.dimension, spec.periods
    order = _lcm_all(q)
    points = spec.domain_points()
    mat = _zero_matrix(len(points), d)
    for i, n in enumerate(points):
        diag = LaurentPoly.zero(d)
        for j in range(d):
            rho = CyclotomicNumber._raw(order, cyc_root_power(order, n[j] * (order // q[j])))
            diag = diag + LaurentPoly.monomial(d, _unit(d, j, 1), 0, rho)
            diag = diag + LaurentPoly.monomial(d, _unit(d, j, -1), 0, rho.conjugate())
        mat[i][i] = diag
        for k, m in enumerate(points):
            diff = tuple(a - b for a, b in zip(n, m))
            vhat = table[diff]
            if vhat:
                mat[i][k] = mat[i][k] + LaurentPoly.constant(d, vhat)
    return FloquetSymbol(mat, d)


def _unit(d: int, j: int, power: int) -> tuple[int, ...]:
    e = [0] * d
    e[j] = power
    return tuple(e)


def eval_symbol_batch(a: FloquetSymbol, ks: np.ndarray, check_tol: float = 1e-12) -> np.ndarray:
    """Evaluate A(k) for a batch of k points (shape (P, d)); returns (P, Q, Q) Hermitian matrices."""
    ks = np.atleast_2d(np.asarray(ks, dtype=float))
    if ks.shape[1] != a.dim:
        raise ValueError(f"k points have {ks.shape[1]} coordinates, expected {a.dim}")
    out = np.zeros((ks.shape[0], a.size, a.size), dtype=complex)
    for i, row in enumerate(a.compiled()):
        for j, (exps, coeffs) in enumerate(row):
            if coeffs.size:
                phase = np.exp(2j * np.pi * (ks @ exps.T))
                out[:, i, j] = phase @ coeffs
    herm = np.conj(np.swapaxes(out, 1, 2))
    scale = 1.0 + np.max(np.abs(out)) if out.size else 1.0
    if out.size and np.max(np.abs(out - herm)) > check_tol * scale:
        raise ValueError("evaluated symbol is not Hermitian")
    return 0.5 * (out + herm)


def eval_symbol(a: FloquetSymbol, k: Sequence[float]) -> np.ndarray:
    """A(k) with z_j = exp(2 pi i k_j), symmetrised to be exactly Hermitian."""
    return eval_symbol_batch(a, np.asarray(k, dtype=float)[None, :])[0]


@dataclass(frozen=True)
class HermitianVerdict:
    ok: bool
    witness: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_hermitian(a: FloquetSymbol) -> HermitianVerdict:
    """Check entry(i, j)(z) == conj-coefficients(entry(j, i))(1/z) for all i <= j."""
    for i in range(a.size):
        for j in range(i, a.size):
            if a.entries[i][j] != a.entries[j][i].reflect_conjugate():
                return HermitianVerdict(False, (i, j))
    return HermitianVerdict(True)


def schrodinger_spec(periods: Sequence[int], potential, name: str = "") -> OperatorSpec:
    """Convenience constructor; ``potential`` is a flat row-major list or a mapping."""
    periods = tuple(int(q) for q in periods)
    points = list(itertools.product(*(range(q) for q in periods)))
    if isinstance(potential, Mapping):
        table = {tuple(k): Fraction(v) for k, v in potential.items()}
    else:
        values = list(potential)
        if len(values) != len(points):
            raise SpecError(f"expected {len(points)} potential values, got {len(values)}")
        table = {n: Fraction(v) for n, v in zip(points, values)}
    spec = OperatorSpec("schrodinger", len(periods), periods, table, name=name)
    spec.validate()
    return spec


def graph_spec(dimension: int, vertices: int, edges, onsite=None, name: str = "") -> OperatorSpec:
    """Edges are (source, target, shift, weight) with weight rational or CyclotomicNumber."""
    built = []
    for s, t, shift, w in edges:
        if not isinstance(w, CyclotomicNumber):
            w = CyclotomicNumber.rational(w)
        built.append(Edge(int(s), int(t), tuple(int(x) for x in shift), w))
    table = {int(v): Fraction(c) for v, c in (onsite or {}).items()}
    spec = OperatorSpec("graph", dimension, vertices=vertices, edges=tuple(built), onsite=table, name=name)
    spec.validate()
    return spec
