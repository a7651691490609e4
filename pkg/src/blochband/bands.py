"""Band functions on the grid L_N^d / N and overlap statistics.

Exact coincidence of band values is replaced by |difference| <= tau; the
report carries the same statistic at tau / 10 and 10 tau so tolerance
sensitivity is visible.
"""
from __future__ import annotations

import io
import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .eigen import hermitian_eigenvalues
from .operators import FloquetSymbol, OperatorSpec, build_symbol, eval_symbol_batch


@dataclass(frozen=True)
class BandGrid:
    dim: int
    n: int
    size: int
    values: np.ndarray  # (n**dim, size), rows in row-major r order

    def points(self) -> np.ndarray:
        return grid_indices(self.n, self.dim)

    def at(self, r: Sequence[int]) -> np.ndarray:
        return self.values[int(np.ravel_multi_index(tuple(x % self.n for x in r), (self.n,) * self.dim))]

    def to_csv(self) -> str:
        buf = io.StringIO()
        header = [f"k_{j + 1}" for j in range(self.dim)] + [f"lambda_{s + 1}" for s in range(self.size)]
        buf.write(",".join(header) + "\n")
        for r, row in zip(self.points(), self.values):
            cells = [_fmt(x / self.n) for x in r] + [_fmt(v) for v in row]
            buf.write(",".join(cells) + "\n")
        return buf.getvalue()


def _fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # no "-0"
    return f"{x:.12g}"


def grid_indices(n: int, dim: int) -> np.ndarray:
    return np.array(list(itertools.product(range(n), repeat=dim)), dtype=np.int64).reshape(-1, dim)


def _eigen_chunk(mats: np.ndarray, out: np.ndarray, start: int) -> None:
    for i, m in enumerate(mats):
        out[start + i] = hermitian_eigenvalues(m)


def sweep_grid(a: FloquetSymbol, n: int, workers: int | None = None) -> BandGrid:
    """Sorted eigenvalues of A(r / N) for every r in L_N^d.

    Chunks write into disjoint slots of a preallocated array, so the result
    does not depend on the number of workers.
    """
    if n < 1:
        raise ValueError("N must be positive")
    ks = grid_indices(n, a.dim) / n
    mats = eval_symbol_batch(a, ks)
    total = mats.shape[0]
    out = np.empty((total, a.size), dtype=float)
    workers = max(1, workers or os.cpu_count() or 1)
    chunk = max(1, -(-total // workers))
    starts = range(0, total, chunk)
    if workers == 1 or total <= chunk:
        _eigen_chunk(mats, out, 0)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda s: _eigen_chunk(mats[s : s + chunk], out, s), starts))
    return BandGrid(a.dim, n, a.size, out)


def shifted_counts(grid: BandGrid, tau: float, target: float = 0.0) -> np.ndarray:
    """counts[m, s, w] = #{r : |lambda^s((r + m)/N) - lambda^w(r/N) - target| <= tau}.

    ``m`` runs over L_N^d in row-major order (index 0 is m = 0).
    """
    pts = grid.points()
    dims = (grid.n,) * grid.dim
    vals = grid.values
    total = vals.shape[0]
    counts = np.zeros((total, grid.size, grid.size), dtype=np.int64)
    for mi, m in enumerate(pts):
        idx = np.ravel_multi_index(tuple(((pts + m) % grid.n).T), dims)
        diff = vals[idx][:, :, None] - vals[:, None, :] - target
        counts[mi] = np.count_nonzero(np.abs(diff) <= tau, axis=0)
    return counts


@dataclass
class OverlapReport:
    n: int
    dim: int
    size: int
    tau: float
    counts: np.ndarray
    rho: float
    rho_by_pair: np.ndarray
    argmax_shift: tuple[int, ...] | None
    argmax_pair: tuple[int, int] | None
    degeneracy: float
    rho_tau_low: float = float("nan")
    rho_tau_high: float = float("nan")
    offsets: dict = field(default_factory=dict)

    def count(self, s: int, w: int, m: Sequence[int]) -> int:
        """Overlap count for 1-based band labels s, w and grid shift m."""
        mi = int(np.ravel_multi_index(tuple(x % self.n for x in m), (self.n,) * self.dim))
        return int(self.counts[mi, s - 1, w - 1])

    def to_json(self) -> dict:
        return {
            "N": self.n,
            "tau": self.tau,
            "rho": self.rho,
            "rho_tau_div_10": self.rho_tau_low,
            "rho_tau_times_10": self.rho_tau_high,
            "rho_by_pair": self.rho_by_pair.tolist(),
            "argmax_shift": list(self.argmax_shift) if self.argmax_shift is not None else None,
            "argmax_pair": list(self.argmax_pair) if self.argmax_pair is not None else None,
            "degeneracy": self.degeneracy,
            "offsets": self.offsets,
        }


def _sup_over_shifts(counts: np.ndarray, npts: int) -> tuple[float, np.ndarray, int | None, tuple | None]:
    if counts.shape[0] <= 1:
        return 0.0, np.zeros(counts.shape[1:]), None, None
    nonzero = counts[1:]
    by_pair = nonzero.max(axis=0) / npts
    flat = int(np.argmax(nonzero))
    mi, s, w = np.unravel_index(flat, nonzero.shape)
    return float(nonzero.max()) / npts, by_pair, int(mi) + 1, (int(s) + 1, int(w) + 1)


def overlap_statistic(grid: BandGrid, tau: float = 1e-8, offsets: Sequence[float] = ()) -> OverlapReport:
    """rho(N) = max over m != 0 and band pairs (s, w) of count / N^d."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    npts = grid.values.shape[0]
    counts = shifted_counts(grid, tau)
    rho, by_pair, mi, pair = _sup_over_shifts(counts, npts)
    low, *_ = _sup_over_shifts(shifted_counts(grid, tau / 10), npts)
    high, *_ = _sup_over_shifts(shifted_counts(grid, tau * 10), npts)
    shift = tuple(int(x) for x in grid.points()[mi]) if mi is not None else None
    report = OverlapReport(
        n=grid.n, dim=grid.dim, size=grid.size, tau=tau, counts=counts, rho=rho, rho_by_pair=by_pair,
        argmax_shift=shift, argmax_pair=pair, degeneracy=degeneracy_statistic(grid, tau),
        rho_tau_low=low, rho_tau_high=high,
    )
    for a in offsets:
        sl = offset_statistic(grid, a, tau)
        report.offsets[str(a)] = {"max_count": sl.max_count, "fraction": sl.fraction}
    return report


def degeneracy_statistic(grid: BandGrid, tau: float = 1e-8) -> float:
    """Fraction of grid points where two distinct bands lie within tau."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    if grid.size < 2:
        return 0.0
    gaps = np.diff(grid.values, axis=1)  # sorted values: adjacent gaps are the minima
    return float(np.count_nonzero(gaps.min(axis=1) <= tau)) / grid.values.shape[0]


@dataclass(frozen=True)
class OffsetSlice:
    a: float
    tau: float
    counts: np.ndarray  # (shifts, Q, Q), m = 0 included
    n: int
    dim: int

    @property
    def max_count(self) -> int:
        return int(self.counts.max()) if self.counts.size else 0

    @property
    def fraction(self) -> float:
        return self.max_count / self.counts.shape[0] if self.counts.size else 0.0

    def count(self, s: int, w: int, m: Sequence[int]) -> int:
        mi = int(np.ravel_multi_index(tuple(x % self.n for x in m), (self.n,) * self.dim))
        return int(self.counts[mi, s - 1, w - 1])


def offset_statistic(grid: BandGrid, a: float, tau: float = 1e-8) -> OffsetSlice:
    """Counts of lambda^s(k + m/N) = lambda^w(k) + a over all (s, w, m), m = 0 included."""
    if a == 0:
        raise ValueError("offset a must be nonzero")
    if tau <= 0:
        raise ValueError("tau must be positive")
    return OffsetSlice(float(a), tau, shifted_counts(grid, tau, float(a)), grid.n, grid.dim)


@dataclass
class DecayTable:
    rows: list[OverlapReport]

    @property
    def ns(self) -> list[int]:
        return [r.n for r in self.rows]

    @property
    def rhos(self) -> list[float]:
        return [r.rho for r in self.rows]

    @property
    def non_increasing(self) -> bool:
        return all(b <= a for a, b in zip(self.rhos, self.rhos[1:]))

    @property
    def strictly_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.rhos, self.rhos[1:]))

    @property
    def non_decaying(self) -> bool:
        """rho(N) fails to decrease from the first to the last grid size."""
        return len(self.rows) > 1 and self.rhos[-1] >= self.rhos[0]

    def trend(self) -> str:
        if self.non_decaying:
            return "non-decaying: period suspected"
        if self.strictly_decreasing:
            return "decaying"
        return "decaying (non-monotone)" if self.rhos[-1] < self.rhos[0] else "inconclusive"

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows], "trend": self.trend(),
                "non_increasing": self.non_increasing}

    def to_csv(self) -> str:
        lines = ["N,rho,rho_tau_div_10,rho_tau_times_10,degeneracy"]
        for r in self.rows:
            lines.append(",".join([str(r.n)] + [_fmt(x) for x in (r.rho, r.rho_tau_low, r.rho_tau_high, r.degeneracy)]))
        return "\n".join(lines) + "\n"


def decay_series(
    spec: OperatorSpec | FloquetSymbol,
    ns: Sequence[int],
    tau: float = 1e-8,
    workers: int | None = None,
    offsets: Sequence[float] = (),
) -> DecayTable:
    ns = list(ns)
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("grid sizes must be non-empty and increasing")
    symbol = spec if isinstance(spec, FloquetSymbol) else build_symbol(spec)
    rows = [overlap_statistic(sweep_grid(symbol, n, workers), tau, offsets) for n in ns]
    return DecayTable(rows)
