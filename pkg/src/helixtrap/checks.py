"""Invariant suites that pit the analytic path against the FD oracles.

Each suite returns a list of ``Check`` records; ``validate`` in the CLI
turns them into a report and an exit code.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import mathieu, oracles
from .helical_states import AxialMode, PCTMaps, hermite_function
from .trap_model import RB85_D2

# synthetic axial problem with q = 1e4, small enough for dense FD
SYNTH_EPS_TILDE = 4000.0
SYNTH_ALPHA = 0.1


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def as_dict(self):
        return asdict(self)


def _check(name, measured, tolerance, detail=""):
    measured = float(measured)
    return Check(name, bool(measured <= tolerance), measured, float(tolerance), detail)


# -- harmonic oscillator -------------------------------------------------

def ho_errors(points, n_states=6, mass=RB85_D2.mass, omega=2 * math.pi * 100.0, half_span=6.0):
    width = math.sqrt(oracles.HBAR / (mass * omega))
    res = oracles.fd_harmonic(mass, omega, (-half_span * width, half_span * width, points), n_states)
    exact = oracles.HBAR * omega * (np.arange(n_states) + 0.5)
    return res, exact


def suite_ho():
    coarse, exact = ho_errors(4001)
    fine, _ = ho_errors(8001)
    err_c = np.abs(coarse.eigenvalues - exact) / exact
    err_f = np.abs(fine.eigenvalues - exact) / exact
    rich = oracles.richardson(coarse.eigenvalues, fine.eigenvalues)
    ratios = err_c / err_f
    nodes = [oracles.sign_changes(v) for v in fine.eigenvectors]
    return [
        _check("ho.levels_8001_rel", err_f.max(), 1e-6, "FD vs hbar*w*(n+1/2), n<=5"),
        _check("ho.levels_richardson_rel", (np.abs(rich - exact) / exact).max(), 1e-6),
        _check("ho.convergence_ratio_dev", np.abs(ratios - 4.0).max(), 0.5, f"ratios={np.round(ratios, 4).tolist()}"),
        _check("ho.node_count_mismatch", sum(n != j for j, n in enumerate(nodes)), 0),
        _check("ho.hermite_norm", _hermite_norm_error(), 1e-10),
    ]


# -- Mathieu -------------------------------------------------------------

def mathieu_fd_discrepancy(q, parity, n_max=4, points=4001):
    """Worst |exact - FD(Richardson)| / max(1, |a|) over orders n <= n_max."""
    coarse = oracles.fd_mathieu(q, parity, points, n_max + 1)
    fine = oracles.fd_mathieu(q, parity, 2 * points - 1, n_max + 1)
    rich = oracles.richardson(coarse.eigenvalues, fine.eigenvalues)
    exact = np.array([mathieu.char_value(parity, n, q) for n in range(n_max + 1)])
    return float(np.max(np.abs(exact - rich) / np.maximum(1.0, np.abs(exact))))


def gram_matrix(q, n_max=4, points=128):
    """Gram matrix of ce_0..ce_2n_max, se_2..se_2n_max+2 on [0, pi].

    Periodic trapezoid rule with ``points`` nodes per pi.
    """
    x = np.arange(points) * np.pi / points
    funcs = [mathieu.evaluate(mathieu.eigenfunction(mathieu.CE, n, q), x) for n in range(n_max + 1)]
    funcs += [mathieu.evaluate(mathieu.eigenfunction(mathieu.SE, n, q), x) for n in range(n_max + 1)]
    f = np.array(funcs)
    return f @ f.T * (np.pi / points)


def asymptotic_ladder(q, m_max=3):
    """(|(a_m + 2q) - (4m+2) sqrt q|, relative gap errors vs 4 sqrt q)."""
    vals = np.array([mathieu.char_value_unified(m, q) for m in range(m_max + 1)])
    offsets = np.abs(vals + 2 * q - (4 * np.arange(m_max + 1) + 2) * math.sqrt(q))
    gaps = np.diff(vals)
    gap_err = np.abs(gaps - 4 * math.sqrt(q)) / (4 * math.sqrt(q))
    return offsets, gap_err


def suite_mathieu():
    out = []
    worst = max(
        mathieu_fd_discrepancy(q, parity)
        for q in (1.0, 5.0, 25.0)
        for parity in (mathieu.CE, mathieu.SE)
    )
    out.append(_check("mathieu.fd_richardson_scaled", worst, 1e-8, "q in {1,5,25}, n<=4, ce and se"))
    gram = gram_matrix(25.0)
    out.append(_check("mathieu.gram_q25", np.abs(gram - np.pi / 2 * np.eye(gram.shape[0])).max(), 1e-8))
    offsets, gap_err = asymptotic_ladder(1e4)
    out.append(_check("mathieu.asym_offset_q1e4", offsets.max(), 8.0))
    out.append(_check("mathieu.asym_gap_q1e4", gap_err.max(), 0.02))
    bad = 0
    for q in (0.1, 1.0, 10.0, 1e3, 1e6):
        try:
            mathieu.ordering_check(q, 3)
        except Exception:
            bad += 1
    out.append(_check("mathieu.interleaving_failures", bad, 0))
    return out


# -- position-dependent mass --------------------------------------------

def pdm_comparison(eps_tilde=SYNTH_EPS_TILDE, alpha=SYNTH_ALPHA, m_max=5, points=4001, span=0.9):
    """Compare FD eigenpairs of the PDM equation with the Mathieu solution.

    Returns a dict of arrays indexed by m: FD (Richardson) energies, the
    closed-form ladder, the exact-Mathieu mapping, the first-order shift from
    the -(alpha/4)(sec^2 + 1) term neglected by the Mathieu reduction, the
    discretization estimate, and the L2 distance of the eigenfunctions.
    """
    q = eps_tilde / (4 * alpha)
    edge = span / math.sqrt(alpha)
    coarse = oracles.fd_pdm(eps_tilde, alpha, (-edge, edge, points), m_max + 1)
    fine = oracles.fd_pdm(eps_tilde, alpha, (-edge, edge, 2 * points - 1), m_max + 1)
    fd = oracles.richardson(coarse.eigenvalues, fine.eigenvalues)
    disc = np.abs(fine.eigenvalues - coarse.eigenvalues) / 3.0

    xi = fine.x
    pct = PCTMaps(alpha)
    t = math.sqrt(alpha) * pct.g(xi)
    dropped = -0.25 * alpha * (1.0 / np.cos(t) ** 2 + 1.0)
    ladder, mapped, shift, l2 = [], [], [], []
    for m in range(m_max + 1):
        parity, n = mathieu.unified(m)
        sol = mathieu.eigenfunction(parity, n, q)
        ladder.append(-4 * alpha * q + alpha * (4 * m + 2) * math.sqrt(q))
        mapped.append(-eps_tilde / 2 + alpha * sol.char_value)
        mode = AxialMode(m, alpha, q, 0.0, "exact", sol)
        psi = mode(xi)
        shift.append(np.trapezoid(psi**2 * dropped, xi))
        fdv = fine.eigenvectors[m]
        sign = 1.0 if np.dot(psi, fdv) >= 0 else -1.0
        l2.append(math.sqrt(np.trapezoid((sign * psi - fdv) ** 2, xi)))
    return {
        "fd": fd,
        "ladder": np.array(ladder),
        "mapped": np.array(mapped),
        "shift": np.array(shift),
        "disc": disc,
        "l2": np.array(l2),
        "dropped_sup": float(np.max(np.abs(dropped))),
        "fd_result": fine,
    }


def suite_pdm():
    r = pdm_comparison()
    rel = np.abs(r["fd"] - r["ladder"]) / np.abs(r["ladder"])
    corrected = np.abs(r["fd"] - (r["mapped"] + r["shift"]))
    raw = np.abs(r["fd"] - r["mapped"])
    return [
        _check("pdm.closed_form_rel", rel.max(), 1e-3, "FD vs -4aq + a(4m+2)sqrt(q), m<=5"),
        _check("pdm.mathieu_mapping_vs_disc", (corrected - r["disc"]).max(), 0.0,
               "|FD - (mapped + <dropped term>)| minus discretization estimate"),
        _check("pdm.mathieu_mapping_raw", (raw - r["disc"] - r["dropped_sup"]).max(), 0.0,
               "|FD - mapped| bounded by discretization + sup of dropped term"),
        _check("pdm.eigenfunction_l2", r["l2"].max(), 1e-3),
    ]


# -- point canonical transformation / normalization ---------------------

def axial_norms(eps_tilde=SYNTH_EPS_TILDE, alpha=SYNTH_ALPHA, m_max=5, points=40001):
    q = eps_tilde / (4 * alpha)
    edge = 0.999 / math.sqrt(alpha)
    norms = []
    for m in range(m_max + 1):
        parity, n = mathieu.unified(m)
        mode = AxialMode(m, alpha, q, 0.0, "exact", mathieu.eigenfunction(parity, n, q))
        norms.append(oracles.quadrature(lambda x: mode(x) ** 2, -edge, edge, points))
    return np.array(norms)


def pct_identity_error(eps_tilde=SYNTH_EPS_TILDE, alpha=SYNTH_ALPHA, m_max=5, samples=2001):
    q = eps_tilde / (4 * alpha)
    pct = PCTMaps(alpha)
    xi = np.linspace(-0.99, 0.99, samples) / math.sqrt(alpha)
    worst = 0.0
    for m in range(m_max + 1):
        parity, n = mathieu.unified(m)
        mode = AxialMode(m, alpha, q, 0.0, "exact", mathieu.eigenfunction(parity, n, q))
        direct = mode(xi)
        via_pct = mode.phi_u(pct.g(xi)) * np.sqrt(pct.g_prime(xi))
        scale = np.max(np.abs(direct))
        worst = max(worst, float(np.max(np.abs(direct - via_pct)) / scale))
    return worst


def superpotential_error(alpha=SYNTH_ALPHA, n_points=25):
    pct = PCTMaps(alpha)
    us = np.linspace(-1.4, 1.4, n_points) / math.sqrt(alpha)
    worst = 0.0
    for u in us:
        numeric = oracles.quadrature(pct.superpotential, 0.0, u, 4001)
        worst = max(worst, abs(numeric - float(pct.integrated_superpotential(u))))
    return worst


def suite_pct():
    norms = axial_norms()
    pct = PCTMaps(SYNTH_ALPHA)
    u = np.linspace(-1.5, 1.5, 1001) / math.sqrt(SYNTH_ALPHA)
    weight_err = np.max(np.abs(pct.weight(pct.g_inv(u)) - pct.weight_from_superpotential(u)))
    return [
        _check("pct.norm_dev", np.abs(norms - 1.0).max(), 1e-6, "m<=5 at synthetic q=1e4"),
        _check("pct.identity_rel", pct_identity_error(), 1e-10),
        _check("pct.superpotential_integral", superpotential_error(), 1e-10),
        _check("pct.weight_identity", weight_err, 1e-12),
    ]


def _hermite_norm_error():
    # guards the Hermite recurrence used by both HO factors
    x = np.linspace(-12, 12, 24001)
    worst = 0.0
    for n in range(6):
        worst = max(worst, abs(np.trapezoid(hermite_function(n, x) ** 2, x) - 1.0))
    return worst


SUITES = {
    "ho": suite_ho,
    "mathieu": suite_mathieu,
    "pdm": suite_pdm,
    "pct": suite_pct,
}


def run_suite(name):
    if name == "all":
        out = []
        for key in ("mathieu", "pdm", "ho", "pct"):
            out.extend(SUITES[key]())
        return out
    return SUITES[name]()
