"""Symmetric tridiagonal eigenvalue kernel.

Eigenvalues are located one at a time by bisection on Sturm counts, and the
matching eigenvector is recovered by inverse iteration.  Everything is
deterministic for fixed input.
"""

import math

import numpy as np
from scipy.linalg import solve_banded

_TINY = 1e-300


def sturm_count(diag, off, x):
    """Number of eigenvalues of the tridiagonal matrix strictly below ``x``."""
    count = 0
    pivot = diag[0] - x
    if pivot < 0.0:
        count += 1
    for i in range(1, len(diag)):
        if pivot == 0.0:
            pivot = _TINY
        pivot = (diag[i] - x) - off[i - 1] * off[i - 1] / pivot
        if pivot < 0.0:
            count += 1
    return count


def gershgorin(diag, off):
    """Interval guaranteed to contain the whole spectrum."""
    d = np.asarray(diag, dtype=float)
    e = np.abs(np.asarray(off, dtype=float))
    radius = np.zeros_like(d)
    radius[:-1] += e
    radius[1:] += e
    return float(np.min(d - radius)), float(np.max(d + radius))


def kth_eigenvalue(diag, off, k, bracket=None, max_iter=400):
    """Return the ``k``-th smallest eigenvalue (0-based) by bisection.

    ``bracket`` is an optional ``(lo, hi)`` guess.  It is widened until the
    Sturm counts confirm that it contains the target, so a poor guess only
    costs time.
    """
    n = len(diag)
    if not 0 <= k < n:
        raise IndexError(f"eigenvalue index {k} out of range for size {n}")
    diag = [float(v) for v in diag]
    off = [float(v) for v in off]

    glo, ghi = gershgorin(diag, off)
    if bracket is None:
        lo, hi = glo, ghi
    else:
        lo, hi = bracket
        width = max(hi - lo, 1.0)
        while lo > glo and sturm_count(diag, off, lo) > k:
            lo = max(lo - width, glo)
            width *= 2.0
        width = max(hi - lo, 1.0)
        while hi < ghi and sturm_count(diag, off, hi) <= k:
            hi = min(hi + width, ghi)
            width *= 2.0

    eps = np.finfo(float).eps
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if hi - lo <= 2.0 * eps * max(abs(lo), abs(hi), 1e-30):
            break
        if sturm_count(diag, off, mid) > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def inverse_iteration(diag, off, value, steps=2, seed=0):
    """Unit eigenvector for an (accurately known) eigenvalue ``value``."""
    d = np.asarray(diag, dtype=float)
    e = np.asarray(off, dtype=float)
    n = d.size
    if n == 1:
        return np.ones(1)
    # shift off the exact eigenvalue so the LU stays finite
    shift = value + 4.0 * np.finfo(float).eps * max(abs(value), 1.0)
    ab = np.zeros((3, n))
    ab[0, 1:] = e
    ab[1] = d - shift
    ab[2, :-1] = e
    x = np.random.default_rng(seed).standard_normal(n)
    x /= np.linalg.norm(x)
    for _ in range(steps):
        y = solve_banded((1, 1), ab, x, check_finite=False)
        norm = np.linalg.norm(y)
        if not math.isfinite(norm) or norm == 0.0:
            raise np.linalg.LinAlgError("inverse iteration broke down")
        x = y / norm
    return x


def apply(diag, off, vec):
    """Matrix-vector product with the symmetric tridiagonal matrix."""
    out = np.asarray(diag) * vec
    out[:-1] += np.asarray(off) * vec[1:]
    out[1:] += np.asarray(off) * vec[:-1]
    return out
