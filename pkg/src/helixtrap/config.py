"""Run configuration: ``key = value`` text files plus command-line overrides.

Keys are namespaced (``atom.*``, ``beam.*``, ``override.*``, ``output.*``).
Every physical key has a default reproducing the reference Rb-85 setup
(P = 1 mW, detuning -2e15 rad/s, w0 = 30 um, l = 1).  Unknown keys are
rejected; a repeated key keeps its last value and emits a warning.
"""

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .trap_model import AtomSpec, BeamSpec, RB85_D2


def _optional_float(text):
    if text.strip().lower() in ("none", ""):
        return None
    return float(text)


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


# key -> (parser, default, help)
KEYS = {
    "atom.label": (str, RB85_D2.label, "free-form atom label"),
    "atom.mass_kg": (float, RB85_D2.mass, "atomic mass [kg]"),
    "atom.transition_wavelength_m": (float, RB85_D2.transition_wavelength, "transition wavelength [m]"),
    "atom.linewidth_rad_s": (float, RB85_D2.linewidth, "natural linewidth [rad/s]"),
    "atom.saturation_intensity_W_m2": (_optional_float, RB85_D2.saturation_intensity, "saturation intensity [W/m^2]; none = two-level formula"),
    "beam.power_W": (float, 1e-3, "power per beam [W]"),
    "beam.detuning_rad_s": (float, -2e15, "detuning [rad/s, angular], must be < 0"),
    "beam.waist_m": (float, 30e-6, "beam waist w0 [m]"),
    "beam.winding": (_int, 1, "winding number l (nonzero integer)"),
    "beam.wavelength_m": (float, 780.24e-9, "beam wavelength [m]"),
    "beam.radial_index": (_int, 0, "radial index p (must be 0)"),
    "override.epsilon_recoils": (_optional_float, None, "trap depth in recoil energies"),
    "override.alpha": (_optional_float, None, "dimensionless alpha"),
    "override.rabi_sq": (_optional_float, None, "squared Rabi frequency [(rad/s)^2]"),
    "output.dir": (str, "helixtrap_out", "output directory"),
    "output.digits": (_int, 12, "significant digits, 6..17"),
    "output.format": (str, "csv", "csv or tsv"),
}


@dataclass(frozen=True)
class RunConfig:
    atom: AtomSpec
    beam: BeamSpec
    overrides: dict = field(default_factory=dict)
    output_dir: Path = Path("helixtrap_out")
    output_format: str = "csv"
    digits: int = 12
    values: dict = field(default_factory=dict)  # every key, for echoing

    @property
    def delimiter(self):
        return "\t" if self.output_format == "tsv" else ","

    def echo(self):
        """Stable ``key=value`` lines for output headers (output.* excluded)."""
        return [
            f"{key}={self.values[key]!r}"
            for key in sorted(self.values)
            if not key.startswith("output.")
        ]


def read_config_file(path):
    """Parse a config file into a raw ``{key: text}`` dict."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    raw = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in raw:
            warnings.warn(f"{path}:{lineno}: duplicate key {key!r}, last value wins", stacklevel=2)
        raw[key] = value
    return raw


def build_config(raw):
    """Turn raw text values (file merged with flags) into a RunConfig."""
    values = {}
    for key, (parse, default, _) in KEYS.items():
        if key not in raw:
            values[key] = default
            continue
        text = raw[key]
        if text is None or (isinstance(text, str) and text.strip() == "" and parse is not _optional_float):
            raise ConfigError(f"missing value for required key {key!r}")
        try:
            values[key] = parse(text) if isinstance(text, str) else text
        except ValueError as exc:
            raise ConfigError(f"cannot parse {key} = {text!r}: {exc}") from None
    for key, value in values.items():
        if isinstance(value, float) and not math.isfinite(value):
            raise ConfigError(f"{key} must be finite")

    digits = values["output.digits"]
    if not 6 <= digits <= 17:
        raise ConfigError(f"output.digits must be in [6, 17], got {digits}")
    if values["output.format"] not in ("csv", "tsv"):
        raise ConfigError(f"output.format must be csv or tsv, got {values['output.format']!r}")

    try:
        atom = AtomSpec(
            mass=values["atom.mass_kg"],
            transition_wavelength=values["atom.transition_wavelength_m"],
            linewidth=values["atom.linewidth_rad_s"],
            saturation_intensity=values["atom.saturation_intensity_W_m2"],
            label=values["atom.label"],
        )
        beam = BeamSpec(
            power=values["beam.power_W"],
            detuning=values["beam.detuning_rad_s"],
            waist=values["beam.waist_m"],
            winding_number=values["beam.winding"],
            wavelength=values["beam.wavelength_m"],
            radial_index=values["beam.radial_index"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    overrides = {
        name: values[f"override.{name}"]
        for name in ("epsilon_recoils", "alpha", "rabi_sq")
        if values[f"override.{name}"] is not None
    }
    return RunConfig(
        atom=atom,
        beam=beam,
        overrides=overrides,
        output_dir=Path(values["output.dir"]),
        output_format=values["output.format"],
        digits=digits,
        values=values,
    )


def parse_config(path=None, flags=None):
    """Load ``path`` (optional) and apply ``flags`` ({key: text}) on top."""
    raw = read_config_file(path) if path is not None else {}
    for key, value in (flags or {}).items():
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}")
        raw[key] = value
    return build_config(raw)
