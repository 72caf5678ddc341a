"""Trap parameters and dipole potential of a helical optical tube.

All frequencies (detuning, linewidth, Rabi frequency) are angular, in rad/s.
Only |l| enters any result, so l and -l give identical traps.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import constants

from .errors import DomainError

HBAR = constants.hbar
H_PLANCK = constants.h
C_LIGHT = constants.c
AMU = constants.atomic_mass

H_OVER_W0_WARN = 0.1


class TrapWarning(UserWarning):
    """An approximation behind the separable solution is questionable."""


@dataclass(frozen=True)
class AtomSpec:
    mass: float
    transition_wavelength: float
    linewidth: float
    saturation_intensity: float | None = None
    label: str = ""

    def __post_init__(self):
        for name in ("mass", "transition_wavelength", "linewidth"):
            if not getattr(self, name) > 0:
                raise ValueError(f"atom.{name} must be positive")
        if self.saturation_intensity is not None and not self.saturation_intensity > 0:
            raise ValueError("atom.saturation_intensity must be positive")
        if not 100e-9 < self.transition_wavelength < 10e-6:
            raise ValueError(
                f"atom.transition_wavelength={self.transition_wavelength:g} m "
                "outside (100 nm, 10 um)"
            )


@dataclass(frozen=True)
class BeamSpec:
    power: float
    detuning: float
    waist: float
    winding_number: int
    wavelength: float
    radial_index: int = 0

    def __post_init__(self):
        if not self.power >= 0:
            raise ValueError("beam.power must be non-negative")
        if not self.waist > 0:
            raise ValueError("beam.waist must be positive")
        if not self.wavelength > 0:
            raise ValueError("beam.wavelength must be positive")
        if int(self.winding_number) != self.winding_number or self.winding_number == 0:
            raise ValueError("beam.winding_number must be a nonzero integer")
        if self.radial_index < 0:
            raise ValueError("beam.radial_index must be >= 0")


# Rb-85 D2 line; linewidth and saturation intensity of the cycling transition
RB85_D2 = AtomSpec(
    mass=84.911789738 * AMU,
    transition_wavelength=780.241e-9,
    linewidth=2 * math.pi * 6.07e6,
    saturation_intensity=16.7,
    label="85Rb D2",
)


@dataclass(frozen=True)
class TrapParams:
    mass: float
    waist: float
    wavelength: float
    winding: int  # |l|
    detuning_abs: float
    k: float
    z_R: float
    h: float
    alpha: float
    alpha_formula: float
    rabi_sq: float
    epsilon: float
    recoil_energy: float
    omega_rho: float
    omega_nu: float
    eps_tilde: float
    q: float
    delta_E: float
    n_bound: float
    overrides: tuple = field(default=())

    @property
    def epsilon_recoils(self):
        return self.epsilon / self.recoil_energy

    @property
    def h_over_w0(self):
        return self.h / self.waist

    @property
    def ring_radius(self):
        """Radius sqrt(|l|/2) w0 of the intensity maximum at the focus."""
        return math.sqrt(self.winding / 2.0) * self.waist

    @property
    def axial_energy_unit(self):
        """Joules per unit of the dimensionless axial energy."""
        return self.epsilon / self.eps_tilde

    def width(self, z):
        return self.waist * np.sqrt(1.0 + (np.asarray(z) / self.z_R) ** 2)

    def width_xi(self, xi):
        return self.waist * np.sqrt(1.0 + self.alpha * np.asarray(xi) ** 2)


def _depth_factor(ell):
    return ell**ell * math.exp(-ell) / math.factorial(ell)


def saturation_intensity(atom):
    """Two-level saturation intensity pi h c Gamma / (3 lambda^3)."""
    if atom.saturation_intensity is not None:
        return atom.saturation_intensity
    return math.pi * H_PLANCK * C_LIGHT * atom.linewidth / (3.0 * atom.transition_wavelength**3)


def rabi_sq_from_power(atom, beam):
    """Squared peak Rabi frequency Gamma^2 I0 / (2 I_sat), I0 = 2P / (pi w0^2)."""
    if atom.linewidth is None:
        raise ValueError("rabi_sq_from_power needs atom.linewidth")
    if atom.saturation_intensity is None and atom.transition_wavelength is None:
        raise ValueError("rabi_sq_from_power needs atom.saturation_intensity or atom.transition_wavelength")
    peak_intensity = 2.0 * beam.power / (math.pi * beam.waist**2)
    return atom.linewidth**2 * peak_intensity / (2.0 * saturation_intensity(atom))


def derive_trap_params(atom, beam, epsilon_recoils=None, alpha=None, rabi_sq=None):
    """Derive every trap scalar from the atom and beam.

    ``epsilon_recoils``, ``alpha`` and ``rabi_sq`` override the corresponding
    derivations.  With an ``alpha`` override, q is taken from
    |l|^2 eps / (4 alpha^(3/2) E_r) and eps_tilde = 4 alpha q so that the
    axial problem stays self-consistent; the formula value is kept in
    ``alpha_formula``.
    """
    if beam.radial_index != 0:
        raise ValueError(f"only p = 0 beams are supported (got p = {beam.radial_index})")
    if beam.detuning == 0:
        raise ValueError("beam.detuning must be nonzero")
    if beam.detuning > 0:
        raise ValueError("blue detuning (> 0) repels atoms from the tube; use red detuning")

    ell = abs(int(beam.winding_number))
    lam, w0, m = beam.wavelength, beam.waist, atom.mass
    k = 2.0 * math.pi / lam
    z_R = math.pi * w0**2 / lam
    h = ell * lam / (2.0 * math.pi)
    alpha_formula = ell**2 * lam**4 / (4.0 * math.pi**4 * w0**4)
    recoil = HBAR**2 * k**2 / (2.0 * m)
    delta = abs(beam.detuning)

    overrides = []
    if epsilon_recoils is not None:
        if not epsilon_recoils > 0:
            raise ValueError("epsilon override must be positive")
        epsilon = epsilon_recoils * recoil
        rabi_sq = epsilon * delta / (HBAR * _depth_factor(ell))
        overrides.append("epsilon_recoils")
    else:
        if rabi_sq is None:
            rabi_sq = rabi_sq_from_power(atom, beam)
        else:
            overrides.append("rabi_sq")
        epsilon = HBAR * rabi_sq * _depth_factor(ell) / delta
    if not epsilon > 0:
        raise ValueError("trap depth is zero; check beam.power")

    if alpha is not None:
        if not alpha > 0:
            raise ValueError("alpha override must be positive")
        overrides.append("alpha")
    else:
        alpha = alpha_formula

    omega_rho = math.sqrt(8.0 * epsilon / (m * w0**2))
    omega_nu = math.sqrt(2.0 * epsilon * k**2 / m)
    q = ell**2 * epsilon / (4.0 * alpha**1.5 * recoil)
    if "alpha" in overrides:
        eps_tilde = 4.0 * alpha * q
    else:
        eps_tilde = ell * m * w0**2 * epsilon / HBAR**2
    delta_E = 2.0 * alpha**0.75 / ell * math.sqrt(epsilon * recoil)
    n_bound = ell * math.sqrt(epsilon / recoil) / (2.0 * alpha**0.75)

    if h / w0 > H_OVER_W0_WARN:
        warnings.warn(f"h/w0 = {h / w0:.3g} > {H_OVER_W0_WARN}: thin-tube approximation is poor", TrapWarning)
    if alpha >= 1:
        warnings.warn(f"alpha = {alpha:.3g} >= 1: small-alpha expansion is invalid", TrapWarning)

    return TrapParams(
        mass=m, waist=w0, wavelength=lam, winding=ell, detuning_abs=delta,
        k=k, z_R=z_R, h=h, alpha=alpha, alpha_formula=alpha_formula,
        rabi_sq=rabi_sq, epsilon=epsilon, recoil_energy=recoil,
        omega_rho=omega_rho, omega_nu=omega_nu, eps_tilde=eps_tilde, q=q,
        delta_E=delta_E, n_bound=n_bound, overrides=tuple(overrides),
    )


def _intensity_profile(ell, w0, w, r):
    # normalized so that its maximum at z = 0 is |l|^|l| e^-|l| / |l|!
    s = 2.0 * r**2 / w**2
    return (w0 / w) ** 2 * s**ell * np.exp(-s) / math.factorial(ell)


def dipole_potential_lab(params, r, phi, z):
    """Potential U(r, phi, z) in joules; <= 0, minimum -epsilon at the focus ring."""
    r, phi, z = np.asarray(r, float), np.asarray(phi, float), np.asarray(z, float)
    w = params.width(z)
    u2 = _intensity_profile(params.winding, params.waist, w, r)
    amp = HBAR * params.rabi_sq / params.detuning_abs
    return -amp * u2 * np.cos(params.winding * phi + params.k * z) ** 2


def _check_xi(params, xi):
    if np.any(params.alpha * np.asarray(xi, float) ** 2 >= 1.0):
        raise DomainError("alpha * xi^2 must be < 1")


def dipole_potential_frenet(params, rho, xi, v):
    """Potential in the tube frame, without the harmonic expansion."""
    _check_xi(params, xi)
    rho, xi, v = np.asarray(rho, float), np.asarray(xi, float), np.asarray(v, float)
    w = params.width_xi(xi)
    r = math.sqrt(params.winding / 2.0) * w + rho
    u2 = _intensity_profile(params.winding, params.waist, w, r)
    amp = HBAR * params.rabi_sq / params.detuning_abs
    return -amp * u2 * np.cos(params.k * v) ** 2


def harmonic_expansion(params, rho, xi, v):
    """Quadratic approximation -eps + 4 eps rho^2/w0^2 + eps alpha xi^2 + eps k^2 v^2."""
    eps = params.epsilon
    rho, xi, v = np.asarray(rho, float), np.asarray(xi, float), np.asarray(v, float)
    return (
        -eps
        + 4.0 * eps * rho**2 / params.waist**2
        + eps * params.alpha * xi**2
        + eps * params.k**2 * v**2
    )


def fold_phase(theta):
    """Fold a binormal phase into the principal tube branch (-pi/2, pi/2]."""
    folded = np.pi / 2 - np.mod(np.pi / 2 - np.asarray(theta, float), np.pi)
    return folded


def frenet_from_lab(params, r, phi, z):
    """(rho, xi, v) of a lab point; v is folded onto the tube through the origin."""
    r, phi, z = np.asarray(r, float), np.asarray(phi, float), np.asarray(z, float)
    rho = r - math.sqrt(params.winding / 2.0) * params.width(z)
    xi = z / params.h
    v = fold_phase(params.winding * phi + params.k * z) / params.k
    return rho, xi, v


def lab_from_frenet(params, rho, xi, v):
    """Inverse of ``frenet_from_lab`` with phi wrapped to (-pi, pi]."""
    rho, xi, v = np.asarray(rho, float), np.asarray(xi, float), np.asarray(v, float)
    z = params.h * xi
    r = rho + math.sqrt(params.winding / 2.0) * params.width(z)
    phi = (params.k * v - params.k * z) / params.winding
    phi = np.pi - np.mod(np.pi - phi, 2.0 * np.pi)
    return r, phi, z
