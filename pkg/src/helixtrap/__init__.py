"""Bound states of a two-level atom in a helical optical tube trap."""

__version__ = "0.1.0"

from .trap_model import AtomSpec, BeamSpec, TrapParams, RB85_D2, derive_trap_params  # noqa: E402
from .helical_states import StateIndex, EnergyLevel, axial_mode, total_energy, spectrum, evaluate_psi  # noqa: E402

__all__ = [
    "AtomSpec",
    "BeamSpec",
    "TrapParams",
    "RB85_D2",
    "derive_trap_params",
    "StateIndex",
    "EnergyLevel",
    "axial_mode",
    "total_energy",
    "spectrum",
    "evaluate_psi",
]
