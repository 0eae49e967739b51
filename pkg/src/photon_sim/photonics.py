"""Optical chain elements: CW laser, Mach-Zehnder modulator, fiber, detector, filters."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BadCutoff, GridMismatch, UnitMismatch, ValidationError
from .signals import ElectricalWaveform, OpticalEnvelope, SamplingGrid, Unit

C_NOMINAL = 3e8
C_VACUUM = 2.99792458e8
SILICA_GROUP_INDEX = 1.468


@dataclass(frozen=True)
class MzmParams:
    """Mach-Zehnder modulator. ``v_bias=None`` means quadrature (v_pi/2)."""

    v_pi: float = 5.0
    v_bias: float | None = None
    insertion_loss: float = 0.0  # dB

    def __post_init__(self):
        if not (math.isfinite(self.v_pi) and self.v_pi > 0):
            raise ValidationError("must be > 0", "mzm.v_pi_v")
        if not (math.isfinite(self.insertion_loss) and self.insertion_loss >= 0):
            raise ValidationError("must be >= 0", "mzm.insertion_loss_db")
        if self.v_bias is None:
            object.__setattr__(self, "v_bias", self.v_pi / 2)
        elif not math.isfinite(self.v_bias):
            raise ValidationError("must be finite", "mzm.v_bias_v")


@dataclass(frozen=True)
class FiberParams:
    length: float = 10.0  # km
    attenuation: float = 0.2  # dB/km
    group_index: float = 1.0
    light_speed: float = C_NOMINAL  # m/s

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length >= 0):
            raise ValidationError("must be >= 0", "fiber.length_km")
        if not (math.isfinite(self.attenuation) and self.attenuation >= 0):
            raise ValidationError("must be >= 0", "fiber.attenuation_db_per_km")
        if not (math.isfinite(self.group_index) and self.group_index >= 1):
            raise ValidationError("must be >= 1", "fiber.group_index")
        if not (math.isfinite(self.light_speed) and self.light_speed > 0):
            raise ValidationError("must be > 0", "fiber.light_speed_m_per_s")

    @classmethod
    def physical(cls, length: float = 10.0, attenuation: float = 0.2) -> "FiberParams":
        """Silica fiber with the vacuum light speed and a realistic group index."""
        return cls(length, attenuation, SILICA_GROUP_INDEX, C_VACUUM)

    @property
    def delay(self) -> float:
        """Propagation delay tau_d in seconds."""
        return self.length * 1e3 * self.group_index / self.light_speed

    @property
    def loss_db(self) -> float:
        return self.attenuation * self.length


def dbm_to_watts(power_dbm: float) -> float:
    return 10.0 ** (power_dbm / 10.0) * 1e-3


def cw_laser(
    power_dbm: float,
    wavelength: float,
    grid: SamplingGrid,
    phase_walk_rms: float = 0.0,
    rng_seed: int = 0,
) -> OpticalEnvelope:
    """Constant-envelope laser field.

    ``phase_walk_rms`` (rad per sample) enables a Wiener phase walk as a crude
    linewidth model; it is off by default.
    """
    if not wavelength > 0:
        raise ValueError("wavelength must be > 0")
    amplitude = math.sqrt(dbm_to_watts(power_dbm))
    samples = np.full(grid.n_samples, amplitude, dtype=complex)
    if phase_walk_rms > 0:
        rng = np.random.default_rng(rng_seed)
        phase = np.cumsum(rng.standard_normal(grid.n_samples) * phase_walk_rms)
        samples = samples * np.exp(1j * phase)
    return OpticalEnvelope(grid, samples, carrier_wavelength=wavelength)


def mzm_field_transfer(volts: np.ndarray | float, p: MzmParams) -> np.ndarray:
    """Field transmission for total applied voltage (drive only; bias added here)."""
    return np.cos(0.5 * np.pi * (p.v_bias + volts) / p.v_pi) * 10.0 ** (-p.insertion_loss / 20.0)


def mz_modulate(light: OpticalEnvelope, drive: ElectricalWaveform, p: MzmParams) -> OpticalEnvelope:
    if light.grid != drive.grid:
        raise GridMismatch("light and drive are on different sampling grids")
    if drive.unit is not Unit.VOLT:
        raise UnitMismatch(f"modulator drive must be in volts, got {drive.unit.value}")
    return light.with_samples(light.samples * mzm_field_transfer(drive.samples, p))


def fiber_shift_samples(grid: SamplingGrid, p: FiberParams) -> int:
    """Circular shift standing in for the delay inside one sample window."""
    residual = math.fmod(p.delay, grid.duration)
    return int(round(residual * grid.sample_rate)) % grid.n_samples


def fiber_propagate(env: OpticalEnvelope, p: FiberParams) -> OpticalEnvelope:
    # dispersion and nonlinearity are not modeled
    gain = 10.0 ** (-p.attenuation * p.length / 20.0)
    shifted = np.roll(env.samples, fiber_shift_samples(env.grid, p))
    return env.with_samples(shifted * gain, delay=env.delay + p.delay)


def photodetect(env: OpticalEnvelope, responsivity: float) -> ElectricalWaveform:
    """Square-law detection, i = R |a|^2."""
    if not responsivity >= 0:
        raise ValueError("responsivity must be >= 0")
    return ElectricalWaveform(env.grid, responsivity * env.power, Unit.AMPERE)


class FilterKind(str, Enum):
    SHORT_PASS = "short_pass"
    LONG_PASS = "long_pass"
    BAND_PASS = "band_pass"


def optical_filter_mask(
    grid: SamplingGrid,
    kind: FilterKind | str,
    cutoff_lo: float | None = None,
    cutoff_hi: float | None = None,
) -> np.ndarray:
    """Brick-wall pass mask over envelope frequency offsets (FFT order).

    A bin sitting exactly on a cutoff belongs to the short-pass side, so
    short_pass(fc) and long_pass(fc) partition the grid.
    """
    kind = FilterKind(kind)
    nyq = grid.nyquist

    def check(value, name):
        if value is None:
            raise BadCutoff(f"{kind.value} needs {name}")
        if not (math.isfinite(value) and -nyq <= value <= nyq):
            raise BadCutoff(f"{name}={value} outside +/-Nyquist ({nyq})")
        return value

    offsets = grid.frequencies()
    if kind is FilterKind.SHORT_PASS:
        return offsets <= check(cutoff_hi, "cutoff_hi")
    if kind is FilterKind.LONG_PASS:
        return offsets > check(cutoff_lo, "cutoff_lo")
    lo, hi = check(cutoff_lo, "cutoff_lo"), check(cutoff_hi, "cutoff_hi")
    if not lo < hi:
        raise BadCutoff(f"band_pass needs cutoff_lo < cutoff_hi, got {lo} >= {hi}")
    return (offsets > lo) & (offsets <= hi)


def optical_filter(
    env: OpticalEnvelope,
    kind: FilterKind | str,
    cutoff_lo: float | None = None,
    cutoff_hi: float | None = None,
) -> OpticalEnvelope:
    mask = optical_filter_mask(env.grid, kind, cutoff_lo, cutoff_hi)
    spectrum = np.fft.fft(env.samples)
    return env.with_samples(np.fft.ifft(np.where(mask, spectrum, 0.0)))
