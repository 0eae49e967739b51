"""Electrical-domain blocks: band-pass filter, saturating amplifier, noise source."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadPassband, ValidationError
from .signals import ElectricalWaveform, SamplingGrid, Unit


@dataclass(frozen=True)
class BpfParams:
    center: float = 10e9  # Hz
    bandwidth: float = 100e6  # Hz
    stop_atten: float = 80.0  # dB

    def __post_init__(self):
        if not (math.isfinite(self.center) and self.center > 0):
            raise ValidationError("must be > 0", "bpf.center_hz")
        if not (math.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise ValidationError("must be > 0", "bpf.bandwidth_hz")
        if not (math.isfinite(self.stop_atten) and self.stop_atten > 0):
            raise ValidationError("must be > 0", "bpf.stop_atten_db")
        if self.center - self.bandwidth / 2 <= 0:
            raise ValidationError("passband reaches DC", "bpf.bandwidth_hz")

    def check_grid(self, grid: SamplingGrid) -> None:
        if self.center + self.bandwidth / 2 >= grid.nyquist:
            raise BadPassband(
                f"passband upper edge {self.center + self.bandwidth / 2} Hz "
                f"is not below Nyquist {grid.nyquist} Hz"
            )


@dataclass(frozen=True)
class AmpParams:
    """Saturating amplifier.

    ``gain`` is V/A for ampere inputs (transimpedance) and V/V for volt inputs.
    ``None`` asks the loop engine to calibrate it from the open-loop gain.
    A gain of 0 is accepted so the loop can be switched off.
    """

    gain: float | None = None
    saturation: float = 0.006  # V

    def __post_init__(self):
        if self.gain is not None and not (math.isfinite(self.gain) and self.gain >= 0):
            raise ValidationError("must be >= 0", "amp.gain")
        if not (math.isfinite(self.saturation) and self.saturation > 0):
            raise ValidationError("must be > 0", "amp.saturation_v")


def bpf_response(freqs: np.ndarray, p: BpfParams) -> np.ndarray:
    """Real, zero-phase magnitude response evaluated at ``freqs`` (Hz, any sign).

    Flat over |f - center| <= bw/2, raised-cosine down to the stop floor over
    the next bw/2, floor beyond.
    """
    floor = 10.0 ** (-p.stop_atten / 20.0)
    half = p.bandwidth / 2
    d = np.abs(np.abs(np.asarray(freqs, dtype=float)) - p.center)
    response = np.full(d.shape, floor)
    response[d <= half] = 1.0
    edge = (d > half) & (d < 2 * half)
    response[edge] = floor + (1.0 - floor) * 0.5 * (1.0 + np.cos(np.pi * (d[edge] - half) / half))
    return response


def bandpass_filter(w: ElectricalWaveform, p: BpfParams) -> ElectricalWaveform:
    p.check_grid(w.grid)
    n = w.grid.n_samples
    response = bpf_response(np.fft.rfftfreq(n, d=1.0 / w.grid.sample_rate), p)
    out = np.fft.irfft(np.fft.rfft(w.samples) * response, n=n)
    return ElectricalWaveform(w.grid, out, w.unit)


def amplify(w: ElectricalWaveform, p: AmpParams) -> ElectricalWaveform:
    """v = sat * tanh(gain * x / sat); output is always in volts."""
    gain = 0.0 if p.gain is None else p.gain
    sat = p.saturation
    # tanh rounds to exactly 1 for large arguments; keep the bound strict
    limit = np.nextafter(sat, 0.0)
    out = np.clip(sat * np.tanh(gain * w.samples / sat), -limit, limit)
    return ElectricalWaveform(w.grid, out, Unit.VOLT)


def noise_seed(grid: SamplingGrid, rms: float, rng_seed: int) -> ElectricalWaveform:
    """White Gaussian drive from numpy's PCG64 generator seeded with ``rng_seed``."""
    if not rms >= 0:
        raise ValueError("rms must be >= 0")
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    return ElectricalWaveform(grid, rng.standard_normal(grid.n_samples) * rms, Unit.VOLT)
