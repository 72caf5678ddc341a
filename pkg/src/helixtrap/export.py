"""Deterministic text output: tables and 3D density grids.

Numbers are written in fixed scientific notation with a configurable number
of significant digits, so a value read back and re-formatted reproduces the
same text.  Header lines start with '#'.

Density grid layout::

    # helixtrap <version>
    # key=value            (metadata, one per line)
    # axis0=name,lo,hi,count
    # axis1=...
    # axis2=...
    <value>                (one per line, row-major: axis2 varies fastest)
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__


def fmt(value, digits):
    return f"{float(value):.{digits - 1}e}"


def header_lines(command, config, extra=()):
    lines = [f"# helixtrap {__version__}", f"# command={command}"]
    lines += [f"# config.{line}" for line in config.echo()]
    lines += [f"# {line}" for line in extra]
    return lines


def write_table(path, columns, rows, digits, delimiter=",", header=()):
    """Write a delimited table; numeric cells formatted, strings verbatim."""
    out = list(header)
    out.append(delimiter.join(columns))
    for row in rows:
        cells = [cell if isinstance(cell, str) else fmt(cell, digits) for cell in row]
        out.append(delimiter.join(cells))
    Path(path).write_text("\n".join(out) + "\n")


def read_table(path, delimiter=","):
    """Read a table written by ``write_table`` -> (columns, rows of str)."""
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    columns = lines[0].split(delimiter)
    return columns, [ln.split(delimiter) for ln in lines[1:]]


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"axis {self.name} needs count >= 2")

    @property
    def values(self):
        return np.linspace(self.lo, self.hi, self.count)

    @property
    def step(self):
        return (self.hi - self.lo) / (self.count - 1)


@dataclass
class DensityGrid:
    axes: tuple  # three Axis records
    values: np.ndarray  # flat, row-major
    metadata: dict = field(default_factory=dict)

    @property
    def shape(self):
        return tuple(ax.count for ax in self.axes)

    def array(self):
        return self.values.reshape(self.shape)


def thread_count():
    env = os.environ.get("HELIXTRAP_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sample_slabs(func, n_slabs, threads=None):
    """Evaluate ``func(i)`` for i in range(n_slabs), merged in index order."""
    threads = threads or thread_count()
    if threads == 1 or n_slabs == 1:
        return [func(i) for i in range(n_slabs)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, range(n_slabs)))


def write_grid(path, grid, digits, header=()):
    out = list(header)
    out += [f"# {key}={value}" for key, value in grid.metadata.items()]
    for i, ax in enumerate(grid.axes):
        out.append(f"# axis{i}={ax.name},{fmt(ax.lo, digits)},{fmt(ax.hi, digits)},{ax.count}")
    out += [fmt(v, digits) for v in grid.values]
    Path(path).write_text("\n".join(out) + "\n")


def read_grid(path):
    axes, meta, values = {}, {}, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# axis"):
            key, spec = line[2:].split("=", 1)
            name, lo, hi, count = spec.split(",")
            axes[int(key[4:])] = Axis(name, float(lo), float(hi), int(count))
        elif line.startswith("#"):
            if "=" in line:
                key, value = line[2:].split("=", 1)
                meta[key] = value
        else:
            values.append(float(line))
    ordered = tuple(axes[i] for i in sorted(axes))
    return DensityGrid(ordered, np.array(values), meta)
