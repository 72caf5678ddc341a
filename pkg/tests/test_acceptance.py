"""Acceptance gate: one group of tests per criterion, tolerances pinned below.

A per-criterion PASS/FAIL summary is printed at the end of the pytest run.
"""

import math
import time

import numpy as np
import pytest

from helixtrap import checks, export, helical_states, mathieu, oracles
from helixtrap.cli import main
from helixtrap.helical_states import StateIndex, axial_mode, binormal_mode, ho_width, radial_mode, total_energy
from helixtrap.trap_model import HBAR

from test_config_cli import REFERENCE_CFG

# AC1 numeric chain
DELTA_E_RANGE = (1.9e-4, 2.1e-4)  # E_r
N_RANGE = (21500.0, 22500.0)
AC1_SECONDS = 1.0
# AC2 Mathieu vs FD
AC2_QS = (1.0, 5.0, 25.0)
AC2_N_MAX = 4
AC2_TOL = 1e-8  # times max(1, |a|)
AC2_SECONDS = 30.0
# AC3 asymptotic ladder
AC3_Q = 1e4
AC3_M_MAX = 3
AC3_OFFSET = 8.0
AC3_GAP_REL = 0.02
AC3_SECONDS = 10.0
# AC4 Gram matrix
AC4_Q = 25.0
AC4_TOL = 1e-8
# AC5 PDM pipeline
SYN_EPS_TILDE, SYN_ALPHA = 4000.0, 0.1
AC5_M_MAX = 5
AC5_CLOSED_FORM_REL = 1e-3
AC5_L2 = 1e-3
AC5_SECONDS = 60.0
# AC6 normalization and PCT identity
AC6_NORM = 1e-6
AC6_PCT = 1e-10
# AC7 harmonic factors
AC7_REL = 1e-6
# AC9 determinism
THREAD_SETTINGS = ("1", "4")


def clear_caches():
    mathieu._cached.cache_clear()
    helical_states._axial_mode.cache_clear()


def timed(func, *args, **kw):
    start = time.perf_counter()
    out = func(*args, **kw)
    return out, time.perf_counter() - start


# -- AC1 -----------------------------------------------------------------------

AC1 = pytest.mark.criterion(1, "numeric chain: Delta E and N with eps = 4.44 E_r, alpha = 1.72e-6")


@AC1
def test_ac1_reference_chain(tmp_path, capsys):
    clear_caches()
    code, seconds = timed(main, ["--config", str(REFERENCE_CFG), "--out", str(tmp_path), "params"])
    assert code == 0
    _, rows = export.read_table(tmp_path / "params.csv")
    table = {r[0]: r[1] for r in rows}
    delta_e = float(table["delta_E_recoils"])
    n_bound = float(table["n_bound"])
    print(f"AC1 delta_E = {delta_e:.4e} E_r, N = {n_bound:.1f}, {seconds:.3f} s")
    assert DELTA_E_RANGE[0] <= delta_e <= DELTA_E_RANGE[1]
    assert N_RANGE[0] <= n_bound <= N_RANGE[1]
    assert seconds < AC1_SECONDS
    assert "alpha discrepancy" not in capsys.readouterr().err


@AC1
def test_ac1_formula_path_warns(tmp_path, capsys):
    assert main(["--out", str(tmp_path), "params"]) == 0
    err = capsys.readouterr().err
    assert "alpha discrepancy" in err and "1.174e-09" in err
    _, rows = export.read_table(tmp_path / "params.csv")
    assert float({r[0]: r[1] for r in rows}["alpha"]) == pytest.approx(1.174e-9, rel=1e-3)


# -- AC2 -----------------------------------------------------------------------

@pytest.mark.criterion(2, "Mathieu characteristic values vs FD oracle with Richardson")
def test_ac2_mathieu_vs_fd():
    clear_caches()
    start = time.perf_counter()
    worst = {}
    for q in AC2_QS:
        for parity in (mathieu.CE, mathieu.SE):
            worst[(q, parity.value)] = checks.mathieu_fd_discrepancy(q, parity, n_max=AC2_N_MAX)
    seconds = time.perf_counter() - start
    print(f"AC2 worst scaled discrepancy {max(worst.values()):.3e}, {seconds:.2f} s")
    assert max(worst.values()) <= AC2_TOL, worst
    assert seconds < AC2_SECONDS


# -- AC3 -----------------------------------------------------------------------

@pytest.mark.criterion(3, "asymptotic ladder at q = 1e4")
def test_ac3_asymptotic_ladder():
    clear_caches()
    (offsets, gap_err), seconds = timed(checks.asymptotic_ladder, AC3_Q, AC3_M_MAX)
    print(f"AC3 offsets {np.round(offsets, 4).tolist()}, gap errors {np.round(gap_err, 5).tolist()}")
    assert np.all(offsets <= AC3_OFFSET)
    assert np.all(gap_err <= AC3_GAP_REL)
    assert seconds < AC3_SECONDS


# -- AC4 -----------------------------------------------------------------------

@pytest.mark.criterion(4, "Gram matrix of ce_2n, se_2n+2 at q = 25")
def test_ac4_orthonormality():
    gram = checks.gram_matrix(AC4_Q, n_max=4)
    assert gram.shape == (10, 10)
    err = np.abs(gram - np.pi / 2 * np.eye(10)).max()
    print(f"AC4 max |G - (pi/2) I| = {err:.2e}")
    assert err <= AC4_TOL


# -- AC5 -----------------------------------------------------------------------

AC5 = pytest.mark.criterion(5, "position-dependent-mass pipeline at eps_t = 4000, alpha = 0.1")


@pytest.fixture(scope="module")
def pdm():
    clear_caches()
    result, seconds = timed(checks.pdm_comparison, SYN_EPS_TILDE, SYN_ALPHA, AC5_M_MAX)
    result["seconds"] = seconds
    return result


@AC5
def test_ac5_closed_form(pdm):
    rel = np.abs(pdm["fd"] - pdm["ladder"]) / np.abs(pdm["ladder"])
    print(f"AC5 closed-form relative errors {rel.max():.2e}")
    assert rel.max() <= AC5_CLOSED_FORM_REL
    assert pdm["seconds"] < AC5_SECONDS


@AC5
def test_ac5_mapping_within_discretization_bound(pdm):
    """Literal check: |FD - (-eps_t/2 + alpha a_m)| within the FD discretization estimate.

    The mapping drops an O(alpha) term of the transformed potential, so this
    is expected to fail by about alpha/2; see the corrected check below.
    """
    gap = np.abs(pdm["fd"] - pdm["mapped"])
    print(f"AC5 |FD - mapped| = {np.round(gap, 5).tolist()}, bound = {pdm['disc'].tolist()}")
    assert np.all(gap <= pdm["disc"])


@AC5
def test_ac5_mapping_with_dropped_term(pdm):
    gap = np.abs(pdm["fd"] - pdm["mapped"] - pdm["shift"])
    assert np.all(gap <= pdm["disc"])
    # the uncorrected gap is within the sup of the dropped term
    assert np.all(np.abs(pdm["fd"] - pdm["mapped"]) <= pdm["disc"] + pdm["dropped_sup"])


@AC5
def test_ac5_eigenfunctions(pdm):
    print(f"AC5 L2 distances {pdm['l2'].max():.2e}")
    assert pdm["l2"].max() <= AC5_L2


# -- AC6 -----------------------------------------------------------------------

AC6 = pytest.mark.criterion(6, "axial normalization and PCT identity")


@AC6
def test_ac6_normalization():
    norms = checks.axial_norms(SYN_EPS_TILDE, SYN_ALPHA, m_max=5)
    print(f"AC6 norm deviations {np.abs(norms - 1).max():.2e}")
    assert np.all(np.abs(norms - 1.0) <= AC6_NORM)


@AC6
def test_ac6_pct_identity():
    err = checks.pct_identity_error(SYN_EPS_TILDE, SYN_ALPHA, m_max=5)
    assert err <= AC6_PCT


# -- AC7 -----------------------------------------------------------------------

AC7 = pytest.mark.criterion(7, "harmonic factors")


@AC7
def test_ac7_fd_harmonic():
    omega = 2 * math.pi * 100.0
    res, exact = checks.ho_errors(8001, omega=omega)
    rel = np.abs(res.eigenvalues - exact) / exact
    print(f"AC7 FD oscillator relative errors {rel.max():.2e}")
    assert np.all(rel <= AC7_REL)


@AC7
def test_ac7_spectrum_spacing(reference_params):
    p = reference_params
    for n in range(4):
        a = total_energy(p, StateIndex(n, 0, 0))
        b = total_energy(p, StateIndex(n + 1, 0, 0))
        assert b.parts[0] - a.parts[0] == pytest.approx(HBAR * p.omega_rho, rel=1e-14)
        assert abs((b.total - a.total) - HBAR * p.omega_rho) <= 1e-14 * p.epsilon
        a = total_energy(p, StateIndex(0, n, 0))
        b = total_energy(p, StateIndex(0, n + 1, 0))
        assert b.parts[1] - a.parts[1] == pytest.approx(HBAR * p.omega_nu, rel=1e-14)
        assert abs((b.total - a.total) - HBAR * p.omega_nu) <= 1e-14 * p.epsilon


# -- AC8 -----------------------------------------------------------------------

AC8 = pytest.mark.criterion(8, "node counts, nodal line, ground-state argmax")


@AC8
def test_ac8_node_counts(reference_params, synthetic_params):
    p = reference_params
    ring = math.sqrt(p.winding / 2) * p.waist
    s_rho, s_nu = ho_width(p.mass, p.omega_rho), ho_width(p.mass, p.omega_nu)
    r = np.linspace(ring - 9 * s_rho, ring + 9 * s_rho, 20001)
    v = np.linspace(-0.499, 0.499, 20001) * math.pi / p.k
    for n in range(6):
        assert oracles.sign_changes(radial_mode(p, n, r, 0.0)) == n
        assert oracles.sign_changes(binormal_mode(p, n, p.k * v / p.winding, 0.0)) == n
    for params in (p, synthetic_params):
        xi = np.linspace(-0.999, 0.999, 40001) / math.sqrt(params.alpha)
        for m in range(6):
            assert oracles.sign_changes(axial_mode(params, m)(xi)) == m


def _density(tmp_path, state, *extra):
    code = main(["--config", str(REFERENCE_CFG), "--out", str(tmp_path), "density", "--state", state, *extra])
    assert code == 0
    return export.read_grid(tmp_path / f"density_{state.replace(',', '_')}.grid")


@AC8
def test_ac8_nodal_line(tmp_path, reference_params):
    p = reference_params
    grid = _density(tmp_path, "0,1,0")
    psi = helical_states.wavefunction(p, StateIndex(0, 1, 0))
    ground = helical_states.wavefunction(p, StateIndex(0, 0, 0))
    z = grid.axes[0].values
    r = math.sqrt(p.winding / 2) * p.width(z)
    for turn in range(-2, 3):
        phi = (-p.k * z + turn * math.pi) / p.winding
        on_line = psi.density(r, phi, z)
        assert np.all(on_line <= 1e-20 * ground.density(r, phi, z).max())
    # and the sampled grid is positive away from the line
    assert grid.values.max() > 0


@AC8
def test_ac8_ground_state_argmax(tmp_path, reference_params):
    p = reference_params
    grid = _density(tmp_path, "0,0,0", "--grid", "cylindrical")
    z_ax, r_ax, phi_ax = grid.axes
    assert (z_ax.name, r_ax.name, phi_ax.name) == ("z", "r", "phi")
    dens = grid.array()
    for k, z in enumerate(z_ax.values):
        i, j = np.unravel_index(np.argmax(dens[k]), dens[k].shape)
        ring = math.sqrt(p.winding / 2) * p.width(z)
        assert abs(r_ax.values[i] - ring) <= r_ax.step
        # bright tubes repeat every pi in |l| phi + k z
        phase = math.remainder(p.winding * phi_ax.values[j] + p.k * z, math.pi)
        assert abs(phase) <= p.winding * phi_ax.step


# -- AC9 -----------------------------------------------------------------------

COMMANDS = {
    "params": ["params"],
    "spectrum": ["spectrum", "--max-n-rho", "1", "--max-n-nu", "1", "--max-n-xi", "3"],
    "axial-modes": ["axial-modes", "--m", "0,1,2,3"],
    "density-cyl": ["density", "--state", "0,0,0", "--slices"],
    "density-cart": ["density", "--state", "0,1,1", "--grid", "cartesian"],
    "validate": ["validate", "--suite", "all"],
}


def _snapshot(folder):
    return {path.name: path.read_bytes() for path in sorted(folder.iterdir())}


@pytest.mark.criterion(9, "byte-identical CLI output across runs and thread counts")
@pytest.mark.parametrize("command", sorted(COMMANDS))
def test_ac9_determinism(tmp_path, monkeypatch, command):
    snapshots = []
    for threads in THREAD_SETTINGS:
        for run in range(2):
            monkeypatch.setenv("HELIXTRAP_THREADS", threads)
            clear_caches()
            out = tmp_path / f"t{threads}_{run}"
            assert main(["--config", str(REFERENCE_CFG), "--out", str(out), *COMMANDS[command]]) == 0
            snapshots.append(_snapshot(out))
    assert snapshots[0], "no output written"
    for snap in snapshots[1:]:
        assert snap == snapshots[0]
