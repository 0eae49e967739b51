"""CSV and report serialization.

Floats are written with Python's shortest round-trip ``repr`` so files are
byte-stable and parse back to the exact in-memory values.
"""

from __future__ import annotations

import csv
import io
import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError
from .loop import RunReport
from .signals import ElectricalWaveform, OpticalEnvelope, SamplingGrid, Spectrum


def write_atomic(path: Path, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp")
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def columns_csv(header: Sequence[str], columns: Iterable[np.ndarray]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(zip(*(np.asarray(c, dtype=float).tolist() for c in columns)))
    return buf.getvalue()


def time_csv(w: ElectricalWaveform) -> str:
    return columns_csv(("time_s", "value"), (w.grid.times(), w.samples))


def spectrum_csv(s: Spectrum) -> str:
    freqs, power_db = s.one_sided_db()
    return columns_csv(("freq_hz", "power_db"), (freqs, power_db))


def envelope_csv(env: OpticalEnvelope) -> str:
    return columns_csv(("time_s", "re", "im"), (env.grid.times(), env.samples.real, env.samples.imag))


def read_columns(text: str, header: Sequence[str]) -> list[np.ndarray]:
    """Parse a CSV with the exact ``header``; returns one float array per column."""
    rows = csv.reader(io.StringIO(text))
    try:
        first = next(rows)
    except StopIteration:
        raise ParseError("empty CSV") from None
    if [h.strip() for h in first] != list(header):
        raise ParseError(f"expected header {','.join(header)}, got {','.join(first)}")
    values = []
    for lineno, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            values.append([float(x) for x in row])
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric field") from None
    table = np.array(values, dtype=float).reshape(-1, len(header))
    return [table[:, i] for i in range(len(header))]


def read_envelope_csv(text: str, grid: SamplingGrid, wavelength: float = 1550.0) -> OpticalEnvelope:
    """Target waveform from ``time_s,re,im`` rows; the row count must equal the grid size."""
    _, re, im = read_columns(text, ("time_s", "re", "im"))
    if re.size != grid.n_samples:
        raise ParseError(f"target has {re.size} rows, grid needs {grid.n_samples}")
    samples = re + 1j * im
    if not np.all(np.isfinite(samples)):
        raise ParseError("target contains non-finite samples")
    return OpticalEnvelope(grid, samples, carrier_wavelength=wavelength)


def format_report(report: RunReport) -> str:
    lines = [
        f"fundamental_hz = {float(report.fundamental)!r}",
        f"q_factor = {float(report.q_factor)!r}",
        f"loop_gain_mag = {float(report.loop_gain_mag)!r}",
        f"converged = {'true' if report.converged else 'false'}",
        f"amp_gain = {float(report.amp_gain)!r}",
        f"tau_d_s = {float(report.tau_d)!r}",
    ]
    lines += [f"purity[{i}] = {float(p)!r}" for i, p in enumerate(report.purity_per_iteration, start=1)]
    lines += [f"rms_v[{i}] = {float(r)!r}" for i, r in enumerate(report.rms_per_iteration, start=1)]
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> dict[str, str]:
    """``key = value`` lines back into a dict of raw strings."""
    out = {}
    for line in text.splitlines():
        key, sep, value = line.partition("=")
        if sep:
            out[key.strip()] = value.strip()
    return out
