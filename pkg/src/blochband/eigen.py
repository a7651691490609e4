"""Eigenvalues of small complex Hermitian matrices.

Householder reflections bring the matrix to Hermitian tridiagonal form; a
diagonal phase similarity makes the off-diagonal real and non-negative, and
the implicit-shift QL iteration (Wilkinson shift) finishes the job.
"""
from __future__ import annotations

import math

import numpy as np


class NotHermitianError(ValueError):
    pass


def tridiagonalize(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (diagonal, off-diagonal) of a real symmetric tridiagonal matrix similar to m."""
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1 :, k]
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        xnorm = math.hypot(abs(x[0]), tail)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * xnorm
        v /= np.linalg.norm(v)
        # a <- H a H with H = I - 2 v v^H acting on rows/cols k+1..n-1
        sub = a[k + 1 :, :]
        sub -= 2.0 * np.outer(v, v.conj() @ sub)
        sub = a[:, k + 1 :]
        sub -= 2.0 * np.outer(sub @ v, v.conj())
    diag = a.diagonal().real.copy()
    off = np.abs(a.diagonal(-1)).astype(float)
    return diag, off


def tridiagonal_eigenvalues(diag, off, max_sweeps: int = 60) -> np.ndarray:
    """Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix."""
    d = [float(x) for x in diag]
    n = len(d)
    e = [float(x) for x in off] + [0.0]
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= 2.2e-16 * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_sweeps:
                raise ArithmeticError("QL iteration did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(np.array(d))


def hermitian_eigenvalues(m, tol: float = 1e-10) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix in non-decreasing order."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    n = m.shape[0]
    if n == 0:
        return np.zeros(0)
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.conj().T)) > tol * scale:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    m = 0.5 * (m + m.conj().T)
    if n == 1:
        return np.array([m[0, 0].real])
    diag, off = tridiagonalize(m)
    return tridiagonal_eigenvalues(diag, off)
