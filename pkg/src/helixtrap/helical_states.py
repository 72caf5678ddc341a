"""Bound states of an atom in the helical tube.

A state is labelled by (n_rho, n_nu, n_xi).  The radial and binormal
factors are harmonic-oscillator eigenfunctions; the axial factor solves the
position-dependent-mass equation

    -d/dxi[(1 - alpha xi^2) dXi/dxi] - eps_t (1 - alpha xi^2) Xi = E_t Xi

through u = asin(sqrt(alpha) xi)/sqrt(alpha), x = sqrt(alpha) u + pi/2,
which turns it into the Mathieu equation with q = eps_t / (4 alpha).

Each factor is normalized with the flat measure of its own coordinate
(rho, v, xi); the curvilinear Jacobian of the tube frame is ignored.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import mathieu
from .errors import DomainError, TruncationCapError, UntrappedStateError
from .trap_model import HBAR, fold_phase


def hermite_function(n, x):
    """Normalized Hermite function H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi))."""
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.pi**-0.25 * np.exp(-0.5 * x**2)
    for j in range(n):
        prev, cur = cur, math.sqrt(2.0 / (j + 1)) * x * cur - math.sqrt(j / (j + 1)) * prev
    return cur


def ho_eigenfunction(n, mass, omega, s):
    """1D oscillator eigenfunction (m^-1/2) at displacement ``s`` (m)."""
    inv_len = math.sqrt(mass * omega / HBAR)
    return math.sqrt(inv_len) * hermite_function(n, inv_len * np.asarray(s, float))


def ho_width(mass, omega):
    return math.sqrt(HBAR / (mass * omega))


@dataclass(frozen=True)
class StateIndex:
    n_rho: int
    n_nu: int
    n_xi: int

    def __post_init__(self):
        if min(self.n_rho, self.n_nu, self.n_xi) < 0:
            raise ValueError("quantum numbers must be >= 0")

    def as_tuple(self):
        return (self.n_rho, self.n_nu, self.n_xi)

    def __str__(self):
        return f"({self.n_rho},{self.n_nu},{self.n_xi})"


@dataclass(frozen=True)
class EnergyLevel:
    index: StateIndex
    total: float
    parts: tuple  # (E_rho, E_nu, E_xi), E_xi includes -epsilon

    @property
    def bound(self):
        return self.total < 0


def _check_trapped(params, n_xi):
    if n_xi >= math.floor(params.n_bound):
        raise UntrappedStateError(
            f"n_xi = {n_xi} is not below floor(N_bound) = {math.floor(params.n_bound)}"
        )


def radial_mode(params, n_rho, r, z):
    rho = np.asarray(r, float) - math.sqrt(params.winding / 2.0) * params.width(z)
    return ho_eigenfunction(n_rho, params.mass, params.omega_rho, rho)


def binormal_coordinate(params, phi, z):
    """v in meters on the principal tube branch."""
    theta = params.winding * np.asarray(phi, float) + params.k * np.asarray(z, float)
    return fold_phase(theta) / params.k


def binormal_mode(params, n_nu, phi, z):
    v = binormal_coordinate(params, phi, z)
    return ho_eigenfunction(n_nu, params.mass, params.omega_nu, v)


def _axial_energy(params, m):
    """Axial level -eps + alpha^(3/4)/(2|l|) (4m+2) sqrt(eps E_r), joules."""
    return -params.epsilon + params.alpha**0.75 / (2.0 * params.winding) * (4 * m + 2) * math.sqrt(
        params.epsilon * params.recoil_energy
    )


@dataclass(frozen=True)
class PCTMaps:
    """Point canonical transformation u = g(xi) for the mass 1/(1 - alpha xi^2)."""

    alpha: float

    @property
    def xi_max(self):
        return 1.0 / math.sqrt(self.alpha)

    def _check(self, xi):
        if np.any(self.alpha * np.asarray(xi, float) ** 2 >= 1.0):
            raise DomainError("xi outside (-1/sqrt(alpha), 1/sqrt(alpha))")

    def g(self, xi):
        self._check(xi)
        sa = math.sqrt(self.alpha)
        return np.arcsin(sa * np.asarray(xi, float)) / sa

    def g_inv(self, u):
        sa = math.sqrt(self.alpha)
        u = np.asarray(u, float)
        if np.any(np.abs(sa * u) >= np.pi / 2):
            raise DomainError("|sqrt(alpha) u| must be < pi/2")
        return np.sin(sa * u) / sa

    def g_prime(self, xi):
        self._check(xi)
        return 1.0 / np.sqrt(1.0 - self.alpha * np.asarray(xi, float) ** 2)

    def weight(self, xi):
        """(1 - alpha xi^2)^(-1/4) = sqrt(g'(xi))."""
        self._check(xi)
        return (1.0 - self.alpha * np.asarray(xi, float) ** 2) ** -0.25

    def superpotential(self, u):
        """W(u) = -(sqrt(alpha)/2) tan(sqrt(alpha) u)."""
        sa = math.sqrt(self.alpha)
        return -0.5 * sa * np.tan(sa * np.asarray(u, float))

    def integrated_superpotential(self, u):
        """Closed form of the integral of W from 0 to u: ln sqrt|cos(sqrt(alpha) u)|."""
        sa = math.sqrt(self.alpha)
        return 0.5 * np.log(np.abs(np.cos(sa * np.asarray(u, float))))

    def weight_from_superpotential(self, u):
        return np.exp(-self.integrated_superpotential(u))


def pct_transform(params):
    return PCTMaps(params.alpha)


def pct_effective_potential(params, u):
    """(full, simplified) effective potential of the transformed axial equation.

    full = -eps_t cos^2(sqrt(alpha) u) - (alpha/4)(sec^2(sqrt(alpha) u) + 1)
    """
    sa = math.sqrt(params.alpha)
    t = sa * np.asarray(u, float)
    if np.any(np.abs(t) >= np.pi / 2):
        raise DomainError("|sqrt(alpha) u| must be < pi/2")
    simplified = -params.eps_tilde * np.cos(t) ** 2
    full = simplified - 0.25 * params.alpha * (1.0 / np.cos(t) ** 2 + 1.0)
    return full, simplified


@dataclass(frozen=True)
class AxialMode:
    """Axial factor Xi_m(xi) for unified index m.

    ``mode`` is "exact" (Fourier-series Mathieu function) or "asymptotic"
    (harmonic limit of the Mathieu equation around x = pi/2, used when the
    Fourier truncation would exceed the cap).
    """

    m: int
    alpha: float
    q: float
    energy: float
    mode: str
    solution: mathieu.MathieuSolution | None = None

    @property
    def prefactor(self):
        # sqrt(2/pi) alone integrates to 1/sqrt(alpha); alpha^(1/4) restores unit norm
        return math.sqrt(2.0 / math.pi) * self.alpha**0.25

    @property
    def xi_max(self):
        return 1.0 / math.sqrt(self.alpha)

    def mathieu_part(self, x):
        """ce_2n / se_2n+2 (or its harmonic surrogate) at Mathieu argument x."""
        if self.mode == "exact":
            return mathieu.evaluate(self.solution, x)
        omega = 2.0 * math.sqrt(self.q)
        y = np.asarray(x, float) - np.pi / 2
        return math.sqrt(np.pi / 2) * omega**0.25 * hermite_function(self.m, math.sqrt(omega) * y)

    def phi_u(self, u):
        """Unit-normalized solution of the transformed equation in u."""
        x = math.sqrt(self.alpha) * np.asarray(u, float) + np.pi / 2
        return self.prefactor * self.mathieu_part(x)

    def __call__(self, xi):
        xi = np.asarray(xi, float)
        if np.any(self.alpha * xi**2 >= 1.0):
            raise DomainError("xi outside (-1/sqrt(alpha), 1/sqrt(alpha))")
        s = math.sqrt(self.alpha) * xi
        x = np.arcsin(s) + np.pi / 2
        return self.prefactor * (1.0 - s**2) ** -0.25 * self.mathieu_part(x)

    def width_xi(self):
        """Rough extent scale of the mode in xi (oscillator length of the harmonic limit)."""
        return (2.0 * math.sqrt(self.q)) ** -0.5 / math.sqrt(self.alpha)


@lru_cache(maxsize=256)
def _axial_mode(params, n_xi, solver):
    parity, n = mathieu.unified(n_xi)
    energy = _axial_energy(params, n_xi)
    if solver != "asymptotic":
        try:
            sol = mathieu.eigenfunction(parity, n, params.q)
            return AxialMode(n_xi, params.alpha, params.q, energy, "exact", sol)
        except TruncationCapError:
            if solver == "exact":
                raise
    return AxialMode(n_xi, params.alpha, params.q, energy, "asymptotic")


def axial_mode(params, n_xi, solver="exact"):
    """Build Xi_{n_xi}.

    ``solver`` is "exact", "auto" (exact, falling back to the harmonic
    surrogate past the truncation cap) or "asymptotic".
    """
    if solver not in ("exact", "auto", "asymptotic"):
        raise ValueError(f"unknown axial solver {solver!r}")
    _check_trapped(params, n_xi)
    return _axial_mode(params, int(n_xi), solver)


def total_energy(params, index):
    _check_trapped(params, index.n_xi)
    e_rho = HBAR * params.omega_rho * (index.n_rho + 0.5)
    e_nu = HBAR * params.omega_nu * (index.n_nu + 0.5)
    e_xi = _axial_energy(params, index.n_xi)
    return EnergyLevel(index, e_rho + e_nu + e_xi, (e_rho, e_nu, e_xi))


def spectrum(params, max_n_rho, max_n_nu, max_n_xi):
    """All levels with quantum numbers up to the bounds, ascending in energy."""
    if min(max_n_rho, max_n_nu, max_n_xi) < 0:
        raise ValueError("bounds must be >= 0")
    levels = [
        total_energy(params, StateIndex(a, b, c))
        for a in range(max_n_rho + 1)
        for b in range(max_n_nu + 1)
        for c in range(max_n_xi + 1)
    ]
    levels.sort(key=lambda lv: (lv.total, lv.index.as_tuple()))
    return levels


@dataclass(frozen=True)
class Wavefunction:
    params: object
    index: StateIndex
    axial: AxialMode

    def __call__(self, r, phi, z):
        z = np.asarray(z, float)
        xi = z / self.params.h
        if np.any(self.params.alpha * xi**2 >= 1.0):
            raise DomainError("z outside the axial domain alpha (z/h)^2 < 1")
        # grids repeat each z many times; sum the axial series once per value
        uniq, inverse = np.unique(xi, return_inverse=True)
        axial = self.axial(uniq)[inverse].reshape(xi.shape)
        return (
            radial_mode(self.params, self.index.n_rho, r, z)
            * binormal_mode(self.params, self.index.n_nu, phi, z)
            * axial
        )

    def density(self, r, phi, z):
        return self(r, phi, z) ** 2


def wavefunction(params, index, solver="exact"):
    return Wavefunction(params, index, axial_mode(params, index.n_xi, solver))


def evaluate_psi(params, index, r, phi, z, solver="exact"):
    """psi_(n_rho, n_nu, n_xi)(r, phi, z) as the product of the three factors."""
    return wavefunction(params, index, solver)(r, phi, z)
