"""Brute-force finite-difference solvers used to cross-check the analytic path.

These deliberately share nothing with the Fourier/Sturm machinery in
``mathieu``: the dense three-point matrices are diagonalized with LAPACK
(``scipy.linalg.eigh_tridiagonal``).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import eigh_tridiagonal

from .errors import BoundaryLeakError
from .trap_model import HBAR

DIRICHLET = "dirichlet"
NEUMANN = "neumann"


@dataclass(frozen=True)
class FDResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # (n_states, points), trapezoid-normalized
    grid: tuple  # (lo, hi, points)
    boundary: tuple  # (left, right)

    @property
    def x(self):
        lo, hi, n = self.grid
        return np.linspace(lo, hi, n)

    @property
    def spacing(self):
        lo, hi, n = self.grid
        return (hi - lo) / (n - 1)


def trapezoid_inner(result, i, j):
    w = np.full(result.grid[2], result.spacing)
    w[0] = w[-1] = 0.5 * result.spacing
    return float(np.sum(w * result.eigenvectors[i] * result.eigenvectors[j]))


def richardson(coarse, fine, order=2):
    """Eliminate the leading h^order error from values on grids h and h/2."""
    coarse, fine = np.asarray(coarse, float), np.asarray(fine, float)
    f = 2.0**order
    return (f * fine - coarse) / (f - 1.0)


def _lowest(diag, off, n_states):
    vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, n_states - 1))
    return vals, vecs.T


def _fix_signs(vecs):
    # first sample of appreciable size positive
    for v in vecs:
        idx = np.nonzero(np.abs(v) > 1e-3 * np.max(np.abs(v)))[0][0]
        if v[idx] < 0:
            v *= -1.0
    return vecs


def fd_harmonic(mass, frequency, grid, n_states=6):
    """Dirichlet central-difference oscillator -hbar^2/2m psi'' + m w^2 x^2/2 psi.

    ``grid`` is (lo, hi, points) in meters.  Eigenvalues in joules.
    """
    lo, hi, n = grid
    width = math.sqrt(HBAR / (mass * frequency))
    if n < 2000:
        raise ValueError(f"fd_harmonic needs >= 2000 points, got {n}")
    if (hi - lo) < 8.0 * width:
        raise ValueError(f"grid spans {(hi - lo) / width:.2f} oscillator widths, need >= 8")
    # solve in oscillator units, energies in hbar*omega
    x = np.linspace(lo, hi, n) / width
    h = x[1] - x[0]
    inner = x[1:-1]
    diag = 1.0 / h**2 + 0.5 * inner**2
    off = np.full(inner.size - 1, -0.5 / h**2)
    vals, vecs = _lowest(diag, off, n_states)
    full = np.zeros((n_states, n))
    full[:, 1:-1] = vecs / math.sqrt(h * width)
    return FDResult(vals * HBAR * frequency, _fix_signs(full), (lo, hi, n), (DIRICHLET, DIRICHLET))


def fd_mathieu(q, parity_class, points=4001, n_states=5):
    """Characteristic values from -phi'' + 2q cos(2x) phi = a phi on [0, pi].

    Neumann ends give the cosine family and Dirichlet ends the sine family.
    Both ends also admit the 2pi-periodic solutions (ce_2n+1, se_2n+1), so
    eigenpairs are kept only if they are even (ce_2n) or odd (se_2n+2) about
    x = pi/2.
    """
    if points < 4001:
        raise ValueError(f"fd_mathieu needs >= 4001 points, got {points}")
    if points % 2 == 0:
        points += 1  # x = pi/2 on the grid keeps the reflection exact
    cls = getattr(parity_class, "value", parity_class)
    x = np.linspace(0.0, np.pi, points)
    h = x[1] - x[0]
    pot = 2.0 * q * np.cos(2.0 * x)
    want = 2 * n_states + 2
    if cls == "ce":
        # ghost-point reflection at both ends, symmetrized by sqrt(2) end scaling
        diag = 2.0 / h**2 + pot
        off = np.full(points - 1, -1.0 / h**2)
        off[0] = off[-1] = -math.sqrt(2.0) / h**2
        vals, vecs = _lowest(diag, off, want)
        vecs = vecs.copy()
        vecs[:, 0] *= math.sqrt(2.0)
        vecs[:, -1] *= math.sqrt(2.0)
        full = vecs / math.sqrt(h)
        bc, mirror = (NEUMANN, NEUMANN), 1.0
    elif cls == "se":
        inner = pot[1:-1]
        diag = 2.0 / h**2 + inner
        off = np.full(inner.size - 1, -1.0 / h**2)
        vals, vecs = _lowest(diag, off, want)
        full = np.zeros((want, points))
        full[:, 1:-1] = vecs / math.sqrt(h)
        bc, mirror = (DIRICHLET, DIRICHLET), -1.0
    else:
        raise ValueError(f"unknown parity class {parity_class!r}")
    keep = [j for j, v in enumerate(full) if mirror * np.dot(v, v[::-1]) > 0][:n_states]
    if len(keep) < n_states:
        raise RuntimeError("could not isolate enough pi-periodic eigenpairs")
    return FDResult(vals[keep], _fix_signs(full[keep]), (0.0, np.pi, points), bc)


def fd_pdm(eps_tilde, alpha, grid, n_states=6, leak_tol=1e-6):
    """Dimensionless position-dependent-mass problem on a Dirichlet grid.

    Discretizes -d/dxi[(1 - alpha xi^2) dXi/dxi] - eps_tilde (1 - alpha xi^2) Xi
    with the flux coefficient sampled at half points.
    """
    lo, hi, n = grid
    edge = 1.0 / math.sqrt(alpha)
    if not (-edge < lo < hi < edge):
        raise ValueError("grid must lie strictly inside (-1/sqrt(alpha), 1/sqrt(alpha))")
    xi = np.linspace(lo, hi, n)
    h = xi[1] - xi[0]
    half = 0.5 * (xi[:-1] + xi[1:])
    flux = 1.0 - alpha * half**2
    inner = xi[1:-1]
    diag = (flux[:-1] + flux[1:]) / h**2 - eps_tilde * (1.0 - alpha * inner**2)
    off = -flux[1:-1] / h**2
    vals, vecs = _lowest(diag, off, n_states)
    for j, v in enumerate(vecs):
        peak = np.max(np.abs(v))
        if max(abs(v[0]), abs(v[-1])) > leak_tol * peak:
            raise BoundaryLeakError(
                f"state {j} reaches the grid edge; widen the grid or request fewer states"
            )
    full = np.zeros((n_states, n))
    full[:, 1:-1] = vecs / math.sqrt(h)
    return FDResult(vals, _fix_signs(full), (lo, hi, n), (DIRICHLET, DIRICHLET))


def quadrature(f, lo, hi, n):
    """Composite Simpson rule on n nodes (n bumped to the next odd number)."""
    if n < 2:
        raise ValueError("quadrature needs n >= 2")
    if n % 2 == 0:
        n += 1
    x = np.linspace(lo, hi, n)
    return float(simpson(f(x), x=x))


def sign_changes(values, rel_tol=1e-8):
    """Count sign changes, ignoring samples below rel_tol * max|values|."""
    values = np.asarray(values, float)
    big = values[np.abs(values) > rel_tol * np.max(np.abs(values))]
    return int(np.count_nonzero(np.signbit(big[1:]) != np.signbit(big[:-1])))
