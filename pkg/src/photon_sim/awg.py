"""Optical arbitrary waveform generation by Fourier-domain pulse shaping.

The broadband source is an ideal flat comb; the spatial light modulator of a
4-f shaper is a complex per-bin mask applied between a forward and an
inverse transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CombOverflow, GridMismatch, UnreachableTarget
from .signals import OpticalEnvelope, SamplingGrid

DEFAULT_CLIP_FRACTION = 1e-6
UNREACHABLE_ENERGY_FRACTION = 1e-6
_PASSIVITY_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralMask:
    grid: SamplingGrid
    gains: np.ndarray
    rescale: float = 1.0  # factor applied to T/S to make the mask passive

    def __post_init__(self):
        gains = np.array(self.gains, dtype=complex, copy=True)
        if gains.shape != (self.grid.n_samples,):
            raise ValueError(f"expected {self.grid.n_samples} gains, got shape {gains.shape}")
        mags = np.abs(gains)
        if np.any(mags > 1.0 + _PASSIVITY_SLACK):
            raise ValueError(f"mask is not passive: max |gain| = {mags.max()}")
        # absorb last-ulp overshoot from the normalization
        over = mags > 1.0
        gains[over] /= mags[over]
        gains.setflags(write=False)
        object.__setattr__(self, "gains", gains)

    @classmethod
    def ones(cls, grid: SamplingGrid) -> "SpectralMask":
        return cls(grid, np.ones(grid.n_samples, dtype=complex))


def comb_bins(grid: SamplingGrid, n_lines: int, line_spacing: float) -> np.ndarray:
    """Signed bin index of each comb line, centred on offset 0.

    An even comb has one more line below the carrier than above.
    """
    if n_lines < 1:
        raise ValueError("n_lines must be >= 1")
    step = line_spacing / grid.df
    if n_lines > 1 and (step < 1 or abs(step - round(step)) > 1e-9 * max(step, 1.0)):
        raise ValueError(f"line_spacing {line_spacing} Hz is not a multiple of the bin spacing {grid.df} Hz")
    step = int(round(step)) if n_lines > 1 else 0
    lines = (np.arange(n_lines) - n_lines // 2) * step
    half = grid.n_samples // 2
    if lines.min() < -half or lines.max() >= half:
        raise CombOverflow(
            f"{n_lines} lines at {line_spacing} Hz span beyond Nyquist ({grid.nyquist} Hz)"
        )
    return lines


def broadband_source(
    grid: SamplingGrid,
    total_power: float,
    n_lines: int,
    line_spacing: float,
    wavelength: float = 1550.0,
) -> OpticalEnvelope:
    """Flat, zero-phase comb with mean power ``total_power`` (W)."""
    if not total_power >= 0:
        raise ValueError("total_power must be >= 0")
    lines = comb_bins(grid, n_lines, line_spacing)
    n = grid.n_samples
    amplitude = math.sqrt(total_power / n_lines)
    # Synthesize one period and tile it so the pulse train is exactly periodic.
    step = int(abs(lines[1] - lines[0])) if n_lines > 1 else 0
    g = math.gcd(step, n) if step else n
    period = n // g
    spectrum = np.zeros(period, dtype=complex)
    spectrum[(lines // g) % period] = amplitude * period
    one_period = np.fft.ifft(spectrum)
    return OpticalEnvelope(grid, np.tile(one_period, g), carrier_wavelength=wavelength)


def design_mask(
    target: OpticalEnvelope,
    source: OpticalEnvelope,
    clip: float | None = None,
) -> SpectralMask:
    """One-shot Fourier solution T/S on the source support, normalized to max |gain| = 1.

    ``clip`` is an absolute floor on |S_k|; by default 1e-6 of the strongest
    source bin.
    """
    if target.grid != source.grid:
        raise GridMismatch("target and source are on different grids")
    T = np.fft.fft(target.samples)
    S = np.fft.fft(source.samples)
    s_mag = np.abs(S)
    if clip is None:
        clip = DEFAULT_CLIP_FRACTION * s_mag.max()
    support = s_mag > clip

    t_power = np.abs(T) ** 2
    total = t_power.sum()
    if total == 0:
        raise UnreachableTarget("target has no energy")
    stray = t_power[~support].sum()
    if stray > UNREACHABLE_ENERGY_FRACTION * total:
        raise UnreachableTarget(
            f"{stray / total:.3g} of the target energy lies outside the source support"
        )

    gains = np.zeros_like(T)
    gains[support] = T[support] / S[support]
    peak = np.abs(gains).max()
    rescale = 1.0 / peak
    return SpectralMask(target.grid, gains * rescale, rescale)


def apply_mask(source: OpticalEnvelope, mask: SpectralMask) -> OpticalEnvelope:
    if source.grid != mask.grid:
        raise GridMismatch("source and mask are on different grids")
    return source.with_samples(np.fft.ifft(np.fft.fft(source.samples) * mask.gains))


def gaussian_comb_target(
    source: OpticalEnvelope,
    n_lines: int,
    line_spacing: float,
    sigma_lines: float,
    delay: float = 0.0,
) -> OpticalEnvelope:
    """Gaussian pulse train whose spectrum sits on the comb lines.

    The spectral envelope is a Gaussian of width ``sigma_lines`` comb lines,
    so each pulse in time is Gaussian; ``delay`` shifts the train.
    """
    grid = source.grid
    lines = comb_bins(grid, n_lines, line_spacing)
    offsets = lines * grid.df
    n = grid.n_samples
    spectrum = np.zeros(n, dtype=complex)
    width = sigma_lines * line_spacing
    spectrum[lines % n] = n * np.exp(-0.5 * (offsets / width) ** 2) * np.exp(-2j * np.pi * offsets * delay)
    scale = math.sqrt(source.mean_power / np.mean(np.abs(np.fft.ifft(spectrum)) ** 2))
    return source.with_samples(np.fft.ifft(spectrum) * scale)
