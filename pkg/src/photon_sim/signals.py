"""Sampled-signal types and discrete-Fourier-transform analysis.

Every block in the chain exchanges one of two immutable value types on a
shared :class:`SamplingGrid`:

* :class:`OpticalEnvelope` -- complex baseband field around a carrier, in sqrt(W)
* :class:`ElectricalWaveform` -- real samples tagged volt or ampere

:func:`to_spectrum` turns either into a :class:`Spectrum`; the two scalar
metrics used to judge the oscillator (:func:`fundamental_frequency`,
:func:`spectral_purity`) operate on spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .errors import AllZeroSpectrum, InvalidGrid, ZeroTotalPower

# 10 GHz lands exactly on bin 40000 with these two.
DEFAULT_SAMPLE_RATE = 65.536e9
DEFAULT_N_SAMPLES = 2**18


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SamplingGrid:
    sample_rate: float = DEFAULT_SAMPLE_RATE
    n_samples: int = DEFAULT_N_SAMPLES

    def __post_init__(self):
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise InvalidGrid(f"sample_rate must be finite and > 0, got {self.sample_rate}")
        n = self.n_samples
        if int(n) != n or n < 2 or (int(n) & (int(n) - 1)) != 0:
            raise InvalidGrid(f"n_samples must be a power of two >= 2, got {n}")
        object.__setattr__(self, "n_samples", int(n))

    @property
    def df(self) -> float:
        """Bin spacing in Hz."""
        return self.sample_rate / self.n_samples

    @property
    def duration(self) -> float:
        return self.n_samples / self.sample_rate

    @property
    def nyquist(self) -> float:
        return self.sample_rate / 2

    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) / self.sample_rate

    def frequencies(self) -> np.ndarray:
        """Signed bin frequencies in FFT order."""
        return np.fft.fftfreq(self.n_samples, d=1.0 / self.sample_rate)

    def bin_of(self, f: float) -> int:
        """Index of the non-negative-frequency bin nearest ``f``."""
        return int(round(f / self.df))


class Unit(str, Enum):
    VOLT = "volt"
    AMPERE = "ampere"


class Window(str, Enum):
    RECTANGULAR = "rectangular"
    HANN = "hann"


@dataclass(frozen=True, eq=False)
class OpticalEnvelope:
    """Complex baseband optical field.

    ``delay`` accumulates the physical propagation delay (seconds) of every
    fiber the light has traversed; it is bookkeeping for the Q factor and is
    not the same as the circular shift applied to the samples.
    """

    grid: SamplingGrid
    samples: np.ndarray
    carrier_wavelength: float = 1550.0
    delay: float = 0.0

    def __post_init__(self):
        samples = _frozen(self.samples, complex)
        if samples.shape != (self.grid.n_samples,):
            raise InvalidGrid(
                f"expected {self.grid.n_samples} samples, got shape {samples.shape}"
            )
        object.__setattr__(self, "samples", samples)

    @property
    def power(self) -> np.ndarray:
        """Instantaneous power |a|^2 in W."""
        return self.samples.real**2 + self.samples.imag**2

    @property
    def mean_power(self) -> float:
        return float(np.mean(self.power))

    @property
    def energy(self) -> float:
        """Sum of |a_k|^2 (W x samples)."""
        return float(np.sum(self.power))

    def with_samples(self, samples, delay: float | None = None) -> "OpticalEnvelope":
        return OpticalEnvelope(
            self.grid,
            samples,
            self.carrier_wavelength,
            self.delay if delay is None else delay,
        )


@dataclass(frozen=True, eq=False)
class ElectricalWaveform:
    grid: SamplingGrid
    samples: np.ndarray
    unit: Unit = Unit.VOLT

    def __post_init__(self):
        samples = _frozen(self.samples, float)
        if samples.shape != (self.grid.n_samples,):
            raise InvalidGrid(
                f"expected {self.grid.n_samples} samples, got shape {samples.shape}"
            )
        if not np.all(np.isfinite(samples)):
            raise ValueError("electrical waveform contains non-finite samples")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "unit", Unit(self.unit))

    @property
    def rms(self) -> float:
        return float(np.sqrt(np.mean(self.samples**2)))

    @property
    def energy(self) -> float:
        return float(np.sum(self.samples**2))


Signal = Union[ElectricalWaveform, OpticalEnvelope]


@dataclass(frozen=True, eq=False)
class Spectrum:
    grid: SamplingGrid
    bins: np.ndarray
    window: Window = Window.RECTANGULAR

    def __post_init__(self):
        bins = _frozen(self.bins, complex)
        if bins.shape != (self.grid.n_samples,):
            raise InvalidGrid(f"expected {self.grid.n_samples} bins, got shape {bins.shape}")
        object.__setattr__(self, "bins", bins)
        object.__setattr__(self, "window", Window(self.window))

    @property
    def frequencies(self) -> np.ndarray:
        return self.grid.frequencies()

    @property
    def power(self) -> np.ndarray:
        """|X_k|^2 per bin (unnormalized)."""
        return self.bins.real**2 + self.bins.imag**2

    def one_sided_db(self, floor: float = 1e-30) -> tuple[np.ndarray, np.ndarray]:
        """Bins 0..N/2 as (freq_hz, 10 log10(|X|^2/N + floor))."""
        n = self.grid.n_samples
        half = n // 2 + 1
        freqs = np.arange(half) * self.grid.df
        return freqs, 10.0 * np.log10(self.power[:half] / n + floor)


def window_weights(window: Window | str, n: int) -> np.ndarray:
    window = Window(window)
    if window is Window.RECTANGULAR:
        return np.ones(n)
    # periodic Hann: exact for spectral analysis of circular signals
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def to_spectrum(w: Signal, window: Window | str = Window.RECTANGULAR) -> Spectrum:
    window = Window(window)
    samples = w.samples
    if window is not Window.RECTANGULAR:
        samples = samples * window_weights(window, w.grid.n_samples)
    return Spectrum(w.grid, np.fft.fft(samples), window)


def fundamental_frequency(s: Spectrum) -> float:
    """Frequency of the strongest bin in 1..N/2-1; ties go to the lowest bin."""
    half = s.grid.n_samples // 2
    power = s.power[1:half]
    if power.size == 0 or not np.any(power > 0):
        raise AllZeroSpectrum("no spectral power above DC")
    k = 1 + int(np.argmax(power))
    return k * s.grid.df


def spectral_purity(s: Spectrum, f0: float, guard_bins: int = 1) -> float:
    """Fraction of above-DC power within +/-guard_bins of the bin nearest f0.

    Only the non-negative half (bins 1..N/2) is counted, which for a real
    waveform is the full picture.
    """
    if guard_bins < 0:
        raise ValueError("guard_bins must be >= 0")
    n = s.grid.n_samples
    if not 0 <= f0 <= s.grid.nyquist:
        raise ValueError(f"f0={f0} outside [0, Nyquist]")
    power = s.power[: n // 2 + 1].copy()
    power[0] = 0.0
    k0 = s.grid.bin_of(f0)
    lo, hi = max(k0 - guard_bins, 1), min(k0 + guard_bins, n // 2)
    inside = float(np.sum(power[lo : hi + 1])) if hi >= lo else 0.0
    outside = float(np.sum(power[1:lo]) + np.sum(power[hi + 1 :]))
    total = inside + outside
    if total <= 0.0:
        raise ZeroTotalPower("no spectral power above DC")
    return inside / total
