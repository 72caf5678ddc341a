import math

import pytest

from helixtrap.trap_model import RB85_D2, BeamSpec, derive_trap_params

REFERENCE_BEAM = BeamSpec(power=1e-3, detuning=-2e15, waist=30e-6, winding_number=1, wavelength=780.24e-9)


@pytest.fixture(scope="session")
def formula_params():
    return derive_trap_params(RB85_D2, REFERENCE_BEAM)


@pytest.fixture(scope="session")
def reference_params():
    return derive_trap_params(RB85_D2, REFERENCE_BEAM, epsilon_recoils=4.44, alpha=1.72e-6)


@pytest.fixture(scope="session")
def synthetic_params():
    """Small-q trap (q = 1e4 range) where the exact axial solver is cheap."""
    return derive_trap_params(RB85_D2, REFERENCE_BEAM, epsilon_recoils=4.44, alpha=2e-3)


# -- acceptance summary ------------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = dict(report.user_properties).get("criterion")
    if not crit:
        return
    number, title = crit
    entry = _criteria.setdefault(number, {"title": title, "passed": 0, "failed": []})
    if report.passed:
        entry["passed"] += 1
    else:
        entry["failed"].append(report.nodeid.split("::")[-1])


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        item.user_properties.append(("criterion", tuple(marker.args)))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        total = entry["passed"] + len(entry["failed"])
        status = "PASS" if not entry["failed"] else "FAIL"
        line = f"AC{number} {status} {entry['title']} ({entry['passed']}/{total} checks)"
        if entry["failed"]:
            line += " failing: " + ", ".join(entry["failed"])
        terminalreporter.write_line(line)


def rel(a, b):
    return abs(a - b) / max(abs(b), math.ulp(1.0))
