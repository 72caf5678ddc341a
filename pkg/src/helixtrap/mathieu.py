"""Pi-periodic Mathieu functions ce_2n and se_2n+2.

Characteristic values and Fourier coefficients come from the symmetric
tridiagonal form of the cosine/sine recurrences:

* ce_2n: diag(0, 4, 16, ...), off-diagonal q, with the first off-diagonal
  entry sqrt(2) q after rescaling A_0 by sqrt(2);
* se_2n+2: diag(4, 16, 36, ...), off-diagonal q.

In the rescaled basis the unit eigenvector is already normalized so that
the function has squared integral pi/2 over [0, pi].
"""

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import tridiag
from .errors import OrderingError, TruncationCapError

R_MAX = 200_000
TAIL_TOL = 1e-14
RESIDUAL_TOL = 1e-10
Q_ASYM_DEFAULT = 1e6

_SQRT2 = math.sqrt(2.0)


class ParityClass(enum.Enum):
    EVEN_COSINE = "ce"  # ce_2n, characteristic value a_2n
    EVEN_SINE = "se"  # se_2n+2, characteristic value b_2n+2


CE = ParityClass.EVEN_COSINE
SE = ParityClass.EVEN_SINE


def unified(m):
    """Map the unified ladder index m to (parity, n).

    m = 2n gives ce_2n and m = 2n + 1 gives se_2n+2; mode m has m zeros
    in (0, pi).
    """
    if m < 0:
        raise ValueError(f"unified index must be >= 0, got {m}")
    return (CE, m // 2) if m % 2 == 0 else (SE, m // 2)


def label(parity, n):
    return f"a{2 * n}" if parity is CE else f"b{2 * n + 2}"


@dataclass(frozen=True)
class MathieuSolution:
    parity: ParityClass
    order_index: int
    q: float
    char_value: float
    coeffs: np.ndarray = field(repr=False)
    truncation: int
    residual: float

    @property
    def order(self):
        """Order of the function: 2n for ce, 2n + 2 for se."""
        return 2 * self.order_index + (0 if self.parity is CE else 2)

    @property
    def unified_index(self):
        return 2 * self.order_index + (0 if self.parity is CE else 1)

    @property
    def harmonics(self):
        """Integer multiples of x carried by each coefficient."""
        start = 0 if self.parity is CE else 2
        return start + 2 * np.arange(self.coeffs.size)

    @property
    def bandwidth(self):
        """Number of leading coefficients that matter at double precision."""
        mag = np.abs(self.coeffs)
        keep = np.nonzero(mag > 1e-18 * mag.max())[0]
        return int(keep[-1]) + 1

    def __call__(self, x, deriv=0):
        return evaluate(self, x, deriv)


def _truncation_start(n, q):
    m = 2 * n + 1
    by_sqrt = math.ceil(1.25 * math.sqrt(q))
    by_width = math.ceil((math.sqrt(2 * m + 1) + 8.0) * q ** 0.25)
    return max(2 * n + 32, min(by_sqrt, by_width) + 32)


def _matrix(parity, q, size):
    r = np.arange(size, dtype=float)
    if parity is CE:
        diag = (2.0 * r) ** 2
        off = np.full(size - 1, float(q))
        off[0] = _SQRT2 * q
    else:
        diag = (2.0 * r + 2.0) ** 2
        off = np.full(size - 1, float(q))
    return diag, off


def _bracket(parity, n, q):
    if q < 100.0:
        return None
    m = 2 * n + (0 if parity is CE else 1)
    centre = char_value_asymptotic(m, q, q_asym=0.0)
    half = 0.25 * (m * m + m + 1) + 2.0
    return centre - 2 * half, centre + half


def _recurrence_defect(parity, q, a, c):
    """Max row defect of the natural (unscaled) three-term recurrence."""
    size = c.size
    r = np.arange(size, dtype=float)
    nxt = np.zeros(size)
    nxt[:-1] = c[1:]
    prv = np.zeros(size)
    prv[1:] = c[:-1]
    if parity is CE:
        diag = (2.0 * r) ** 2
        if size > 1:
            prv[1] = 2.0 * c[0]
    else:
        diag = (2.0 * r + 2.0) ** 2
    return float(np.max(np.abs((a - diag) * c - q * (prv + nxt))))


def _solve(parity, n, q):
    if q < 0:
        raise ValueError(f"q must be non-negative, got {q}")
    if n < 0:
        raise ValueError(f"order index must be non-negative, got {n}")
    q = float(q)
    if q == 0.0:
        size = n + 1
        c = np.zeros(size)
        c[n] = 1.0 / _SQRT2 if (parity is CE and n == 0) else 1.0
        a = float((2 * n) ** 2 if parity is CE else (2 * n + 2) ** 2)
        return a, c, size, 0.0

    size = _truncation_start(n, q)
    while True:
        if size > R_MAX:
            raise TruncationCapError(
                f"q={q:g} needs more than {R_MAX} Fourier terms; "
                "use char_value_asymptotic / the asymptotic axial mode"
            )
        diag, off = _matrix(parity, q, size)
        a = tridiag.kth_eigenvalue(diag, off, n, bracket=_bracket(parity, n, q))
        vec = tridiag.inverse_iteration(diag, off, a, steps=2)
        tail = abs(vec[-1]) / np.max(np.abs(vec))
        if tail <= TAIL_TOL:
            break
        size *= 2

    c = vec.copy()
    if parity is CE:
        c[0] /= _SQRT2
    nz = np.nonzero(c)[0]
    if c[nz[0]] < 0:
        c = -c
    residual = _recurrence_defect(parity, q, a, c)
    if residual > RESIDUAL_TOL * max(abs(a), 2.0 * q):
        # a third inverse-iteration step almost always settles it
        vec = tridiag.inverse_iteration(diag, off, a, steps=4)
        c = vec.copy()
        if parity is CE:
            c[0] /= _SQRT2
        if c[np.nonzero(c)[0][0]] < 0:
            c = -c
        residual = _recurrence_defect(parity, q, a, c)
    return a, c, size, residual


@lru_cache(maxsize=512)
def _cached(parity, n, q):
    a, c, size, residual = _solve(parity, n, q)
    c.setflags(write=False)
    return MathieuSolution(parity, n, q, a, c, size, residual)


def eigenfunction(parity, n, q):
    """Solve for ce_2n (``CE``) or se_2n+2 (``SE``) at parameter ``q``.

    Coefficients are normalized so that the integral of the squared
    function over [0, pi] is pi/2, and the first nonzero coefficient is
    positive.
    """
    parity = ParityClass(parity)
    return _cached(parity, int(n), float(q))


def char_value(parity, n, q):
    """a_2n(q) for ``CE`` or b_2n+2(q) for ``SE``."""
    return eigenfunction(parity, n, q).char_value


def char_value_unified(m, q):
    parity, n = unified(m)
    return char_value(parity, n, q)


def evaluate(sol, x, deriv=0):
    """Sum the Fourier series (or its first/second derivative) at ``x``."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    flat = np.atleast_1d(x).ravel()
    nb = sol.bandwidth
    c = sol.coeffs[:nb]
    k = sol.harmonics[:nb].astype(float)
    if sol.parity is CE:
        basis = [np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t)][deriv]
    else:
        basis = [np.sin, np.cos, lambda t: -np.sin(t)][deriv]
    weights = c * k**deriv
    out = np.empty(flat.size)
    chunk = max(1, 4_000_000 // nb)
    for start in range(0, flat.size, chunk):
        xs = flat[start : start + chunk]
        out[start : start + chunk] = basis(np.outer(xs, k)) @ weights
    out = out.reshape(np.shape(x))
    return float(out) if scalar else out


def char_value_asymptotic(m, q, q_asym=Q_ASYM_DEFAULT):
    """Leading large-q ladder -2q + (4m + 2) sqrt(q) for unified index m."""
    if q < q_asym:
        raise ValueError(f"asymptotic form requested at q={q:g} < q_asym={q_asym:g}")
    return -2.0 * q + (4 * m + 2) * math.sqrt(q)


def ordering_check(q, n_max):
    """Even-class characteristic values a0, b2, a2, b4, ... up to b_{2 n_max + 2}.

    Raises OrderingError unless the sequence is strictly increasing.
    """
    values = []
    for n in range(n_max + 1):
        values.append((label(CE, n), char_value(CE, n, q)))
        values.append((label(SE, n), char_value(SE, n, q)))
    for (l0, v0), (l1, v1) in zip(values, values[1:]):
        if not v0 < v1:
            raise OrderingError(f"{l0}={v0!r} !< {l1}={v1!r} at q={q:g}")
    return values
