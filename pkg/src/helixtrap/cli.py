"""Command-line interface.

    helixtrap params       trap parameters and consistency diagnostics
    helixtrap spectrum     energy levels (n_rho, n_nu, n_xi), sorted
    helixtrap axial-modes  sampled axial profiles Xi_m(xi)
    helixtrap density      |psi|^2 on a cartesian or cylindrical grid
    helixtrap validate     analytic-vs-oracle invariant suites

All frequencies are angular (rad/s).  Exit codes: 0 success, 1 validation
failure, 2 usage or configuration error.
"""

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import checks, export
from .config import KEYS, parse_config
from .errors import ConfigError, DomainError, TruncationCapError, UntrappedStateError
from .helical_states import StateIndex, axial_mode, ho_width, spectrum, wavefunction
from .oracles import sign_changes
from .trap_model import HBAR, TrapWarning, derive_trap_params

# alpha that, with eps = 4.44 E_r and l = 1, gives the often-quoted N ~ 22030
REFERENCE_CHAIN_ALPHA = 1.72e-6


class UsageError(Exception):
    pass


def _trap(config):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TrapWarning)
        params = derive_trap_params(config.atom, config.beam, **config.overrides)
    notes = [str(w.message) for w in caught if issubclass(w.category, TrapWarning)]
    return params, notes


def _warn(message):
    print(f"WARNING: {message}", file=sys.stderr)


def _out_dir(config):
    config.output_dir.mkdir(parents=True, exist_ok=True)
    return config.output_dir


def _suffix(config):
    return "tsv" if config.output_format == "tsv" else "csv"


# -- params ---------------------------------------------------------------

def params_rows(params):
    er = params.recoil_energy
    yes = lambda flag: "yes" if flag else "no"  # noqa: E731
    return [
        ("k", params.k, "1/m"),
        ("z_R", params.z_R, "m"),
        ("h", params.h, "m"),
        ("h_over_w0", params.h_over_w0, "1"),
        ("alpha", params.alpha, "1"),
        ("alpha_formula", params.alpha_formula, "1"),
        ("alpha_overridden", yes("alpha" in params.overrides), "flag"),
        ("epsilon_overridden", yes("epsilon_recoils" in params.overrides), "flag"),
        ("rabi_sq", params.rabi_sq, "rad^2/s^2"),
        ("epsilon", params.epsilon, "J"),
        ("epsilon_recoils", params.epsilon / er, "E_r"),
        ("recoil_energy", er, "J"),
        ("omega_rho", params.omega_rho, "rad/s"),
        ("omega_nu", params.omega_nu, "rad/s"),
        ("hbar_omega_rho_recoils", HBAR * params.omega_rho / er, "E_r"),
        ("hbar_omega_nu_recoils", HBAR * params.omega_nu / er, "E_r"),
        ("eps_tilde", params.eps_tilde, "1"),
        ("q", params.q, "1"),
        ("sqrt_q", math.sqrt(params.q), "1"),
        ("delta_E", params.delta_E, "J"),
        ("delta_E_recoils", params.delta_E / er, "E_r"),
        ("n_bound", params.n_bound, "1"),
        ("n_bound_times_delta_E_over_epsilon", params.n_bound * params.delta_E / params.epsilon, "1"),
    ]


def cmd_params(config, args):
    params, notes = _trap(config)
    for note in notes:
        _warn(note)
    if "alpha" not in params.overrides:
        _warn(
            f"alpha discrepancy: formula alpha = {params.alpha_formula:.4g} while the "
            f"reference chain (eps = 4.44 E_r, N ~ 2.2e4) uses alpha ~ {REFERENCE_CHAIN_ALPHA:.3g}; "
            "set override.alpha to reproduce it"
        )
    rows = params_rows(params)
    out = _out_dir(config) / f"params.{_suffix(config)}"
    header = export.header_lines("params", config)
    export.write_table(out, ["quantity", "value", "unit"], rows, config.digits, config.delimiter, header)
    width = max(len(name) for name, _, _ in rows)
    for name, value, unit in rows:
        shown = value if isinstance(value, str) else export.fmt(value, config.digits)
        print(f"{name:<{width}}  {shown:>22}  {unit}")
    return 0


# -- spectrum -------------------------------------------------------------

def cmd_spectrum(config, args):
    params, notes = _trap(config)
    for note in notes:
        _warn(note)
    levels = spectrum(params, args.max_n_rho, args.max_n_nu, args.max_n_xi)
    er = params.recoil_energy
    rows = [
        (str(lv.index.n_rho), str(lv.index.n_nu), str(lv.index.n_xi),
         lv.total / er, lv.parts[0] / er, lv.parts[1] / er, lv.parts[2] / er)
        for lv in levels
    ]
    cols = ["n_rho", "n_nu", "n_xi", "E/E_r", "E_rho/E_r", "E_nu/E_r", "E_xi/E_r"]
    out = _out_dir(config) / f"spectrum.{_suffix(config)}"
    export.write_table(out, cols, rows, config.digits, config.delimiter, export.header_lines("spectrum", config))
    print(f"{len(rows)} levels -> {out}")
    return 0


# -- axial modes ----------------------------------------------------------

def cmd_axial_modes(config, args):
    params, notes = _trap(config)
    for note in notes:
        _warn(note)
    xi_max = 1.0 / math.sqrt(params.alpha)
    span = args.span * xi_max
    n = args.samples
    step = 2.0 * span / n
    xi = -span + (np.arange(n) + 0.5) * step
    out_dir = _out_dir(config)
    for m in _int_list(args.m):
        mode = axial_mode(params, m, solver=args.solver)
        values = mode(xi)
        nodes = sign_changes(values)
        norm = float(np.sum(values**2) * step)
        header = export.header_lines(
            "axial-modes", config,
            [f"m={m}", f"axial_solver={mode.mode}", f"q={export.fmt(params.q, config.digits)}",
             f"nodes={nodes}", f"norm={export.fmt(norm, config.digits)}"],
        )
        rows = zip(xi, xi * params.h / params.z_R, values, values**2)
        path = out_dir / f"axial_mode_{m}.{_suffix(config)}"
        export.write_table(path, ["xi", "z/z_R", "Xi", "Xi^2"], rows, config.digits, config.delimiter, header)
        print(f"m={m} solver={mode.mode} nodes={nodes} norm={norm:.6f} -> {path}")
    return 0


# -- density --------------------------------------------------------------

def _axis(name, text, default):
    if text is None:
        return export.Axis(name, *default)
    try:
        lo, hi, count = text.split(":")
        return export.Axis(name, float(lo), float(hi), int(count))
    except ValueError as exc:
        raise UsageError(f"--{name} expects lo:hi:count, got {text!r} ({exc})") from None


def default_axes(params, state, kind, mode):
    sigma = ho_width(params.mass, params.omega_rho)
    ring = params.ring_radius
    reach = 6.0 + math.sqrt(2 * state.n_rho + 1)
    z_half = params.h * mode.width_xi() * (4.0 + math.sqrt(2 * state.n_xi + 1))
    z_half = min(z_half, 0.9 * params.h / math.sqrt(params.alpha), 0.9 * params.z_R)
    z = (-z_half, z_half, 9)
    if kind == "cartesian":
        edge = ring + reach * sigma
        return {"x": (-edge, edge, 61), "y": (-edge, edge, 61), "z": z}
    return {
        "r": (max(ring - reach * sigma, 0.0), ring + reach * sigma, 41),
        "phi": (-math.pi, math.pi, 121),
        "z": z,
    }


def sample_density(psi, kind, axes, threads=None):
    """|psi|^2 on the grid; slabs are z-planes, merged in order."""
    z_ax, a_ax, b_ax = axes
    za, aa, ba = z_ax.values, a_ax.values, b_ax.values
    A, B = np.meshgrid(aa, ba, indexing="ij")
    if kind == "cartesian":
        R, PHI = np.hypot(A, B), np.arctan2(B, A)
    else:
        R, PHI = A, B

    def slab(i):
        return (psi(R, PHI, np.full_like(R, za[i])) ** 2).ravel()

    return np.concatenate(export.sample_slabs(slab, z_ax.count, threads))


def cmd_density(config, args):
    params, notes = _trap(config)
    for note in notes:
        _warn(note)
    state = StateIndex(*_int_list(args.state))
    psi = wavefunction(params, state, solver=args.solver)
    kind = args.grid
    defaults = default_axes(params, state, kind, psi.axial)
    names = ("z", "x", "y") if kind == "cartesian" else ("z", "r", "phi")
    axes = tuple(_axis(name, getattr(args, name), defaults[name]) for name in names)
    z_ax = axes[0]
    z_lim = params.h / math.sqrt(params.alpha)
    if max(abs(z_ax.lo), abs(z_ax.hi)) >= min(z_lim, params.z_R):
        raise DomainError(f"|z| must stay below {min(z_lim, params.z_R):.6g} m")
    values = sample_density(psi, kind, axes)
    grid = export.DensityGrid(
        axes, values,
        {
            "state": f"{state.n_rho},{state.n_nu},{state.n_xi}",
            "grid": kind,
            "axial_solver": psi.axial.mode,
            "measure": "factorized-flat (each factor normalized in its own coordinate)",
            "units": "m^-2 per unit xi",
            "order": "row-major, axis2 fastest",
        },
    )
    out_dir = _out_dir(config)
    tag = f"{state.n_rho}_{state.n_nu}_{state.n_xi}"
    path = out_dir / f"density_{tag}.grid"
    export.write_grid(path, grid, config.digits, export.header_lines("density", config))
    print(f"state {state} grid {kind} {grid.shape} solver={psi.axial.mode} -> {path}")
    if args.slices:
        arr = grid.array()
        a_ax, b_ax = axes[1], axes[2]
        A, B = np.meshgrid(a_ax.values, b_ax.values, indexing="ij")
        for k, zk in enumerate(z_ax.values):
            spath = out_dir / f"density_{tag}_z{k:03d}.{_suffix(config)}"
            header = export.header_lines("density", config, [f"z={export.fmt(zk, config.digits)}", f"slice={k}"])
            rows = zip(A.ravel(), B.ravel(), arr[k].ravel())
            export.write_table(spath, [a_ax.name, b_ax.name, "density"], rows, config.digits, config.delimiter, header)
    return 0


# -- validate -------------------------------------------------------------

def cmd_validate(config, args):
    results = checks.run_suite(args.suite)
    failed = [c for c in results if not c.passed]
    for c in results:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name} measured={c.measured:.3e} tol={c.tolerance:.3e} {c.detail}".rstrip())
    report = {
        "suite": args.suite,
        "passed": not failed,
        "checks": [c.as_dict() for c in results],
    }
    path = _out_dir(config) / "validate.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(f"{len(results) - len(failed)}/{len(results)} checks passed -> {path}")
    return 1 if failed else 0


# -- argument parsing -----------------------------------------------------

def _int_list(text):
    try:
        return [int(part) for part in str(text).split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _add_common(parser):
    s = argparse.SUPPRESS
    parser.add_argument("--config", default=s, help="key = value config file")
    parser.add_argument("--out", default=s, help="output directory (output.dir)")
    parser.add_argument("--digits", default=s, help="significant digits, 6..17 (output.digits)")
    parser.add_argument("--format", default=s, choices=["csv", "tsv"], help="table format (output.format)")
    group = parser.add_argument_group("configuration keys (override the config file)")
    for key, (_, _, help_text) in KEYS.items():
        group.add_argument(f"--{key}", dest=key, default=s, metavar="VALUE", help=help_text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="helixtrap",
        description="Quantized states of a two-level atom in a helical optical tube. "
        "All frequencies are angular (rad/s).",
    )
    _add_common(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="derived trap parameters")
    _add_common(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("spectrum", help="energy levels")
    _add_common(p)
    p.add_argument("--max-n-rho", type=int, default=1)
    p.add_argument("--max-n-nu", type=int, default=1)
    p.add_argument("--max-n-xi", type=int, default=3)
    p.set_defaults(func=cmd_spectrum)

    solver_help = "axial solver: exact, auto (exact with asymptotic fallback) or asymptotic"
    p = sub.add_parser("axial-modes", help="axial mode profiles")
    _add_common(p)
    p.add_argument("--m", default="0,1,2,3", help="comma-separated unified indices")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--span", type=float, default=1.0, help="fraction of the xi domain to sample")
    p.add_argument("--solver", choices=["exact", "auto", "asymptotic"], default="auto", help=solver_help)
    p.set_defaults(func=cmd_axial_modes)

    p = sub.add_parser("density", help="3D probability density grid")
    _add_common(p)
    p.add_argument("--state", default="0,0,0", help="n_rho,n_nu,n_xi")
    p.add_argument("--grid", choices=["cartesian", "cylindrical"], default="cylindrical")
    for name in ("x", "y", "r", "phi", "z"):
        p.add_argument(f"--{name}", default=None, metavar="LO:HI:COUNT", help="axis range; write --NAME=LO:HI:COUNT when LO is negative")
    p.add_argument("--slices", action="store_true", help="also write one table per z-plane")
    p.add_argument("--solver", choices=["exact", "auto", "asymptotic"], default="auto", help=solver_help)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("validate", help="run invariant suites against the FD oracles")
    _add_common(p)
    p.add_argument("--suite", choices=["mathieu", "pdm", "ho", "pct", "all"], default="all")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    given = vars(args)
    flags = {key: given[key] for key in KEYS if key in given}
    for flag, key in (("out", "output.dir"), ("digits", "output.digits"), ("format", "output.format")):
        if flag in given:
            flags[key] = given[flag]
    try:
        config = parse_config(given.get("config"), flags)
        return args.func(config, args)
    except (ConfigError, DomainError, UntrappedStateError, TruncationCapError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
