"""Optoelectronic oscillator loop engine.

One iteration is one round trip on a shared sample window::

    drive -> MZM(laser) -> fiber -> photodetector -> BPF -> amplifier -> next drive

The fiber delay enters twice: analytically through :func:`q_factor`, and as
an intra-window circular shift inside :func:`~photon_sim.photonics.fiber_propagate`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .electrical import AmpParams, BpfParams, amplify, bandpass_filter, noise_seed
from .errors import AllZeroSpectrum, BadFrequency, BadPassband, ValidationError, ZeroTotalPower
from .photonics import (
    FiberParams,
    MzmParams,
    cw_laser,
    fiber_propagate,
    mz_modulate,
    photodetect,
)
from .signals import (
    ElectricalWaveform,
    OpticalEnvelope,
    SamplingGrid,
    Unit,
    fundamental_frequency,
    spectral_purity,
    to_spectrum,
)

PURITY_GUARD_BINS = 1
CONVERGED_PURITY = 0.99
CONVERGED_PURITY_DELTA = 1e-3
CONVERGED_RMS_DELTA = 0.01
PROBE_FRACTION = 1e-4  # probe amplitude as a fraction of v_pi


@dataclass(frozen=True)
class LaserParams:
    power_dbm: float = 3.0
    wavelength: float = 1550.0  # nm
    phase_walk_rms: float = 0.0  # rad/sample, off by default

    def __post_init__(self):
        if not math.isfinite(self.power_dbm):
            raise ValidationError("must be finite", "laser.power_dbm")
        if not (math.isfinite(self.wavelength) and self.wavelength > 0):
            raise ValidationError("must be > 0", "laser.wavelength_nm")
        if not (math.isfinite(self.phase_walk_rms) and self.phase_walk_rms >= 0):
            raise ValidationError("must be >= 0", "laser.phase_walk_rms_rad")


@dataclass(frozen=True)
class DetectorParams:
    responsivity: float = 0.9  # A/W

    def __post_init__(self):
        if not (math.isfinite(self.responsivity) and self.responsivity >= 0):
            raise ValidationError("must be >= 0", "detector.responsivity_a_per_w")


@dataclass(frozen=True)
class LoopParams:
    iterations: int = 6
    seed_rms: float = 2.0  # V
    rng_seed: int = 0
    target_loop_gain: float = 1.5  # used when amp.gain is None

    def __post_init__(self):
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ValidationError("must be an integer >= 1", "loop.iterations")
        if not (math.isfinite(self.seed_rms) and self.seed_rms >= 0):
            raise ValidationError("must be >= 0", "loop.seed_rms_v")
        if int(self.rng_seed) != self.rng_seed or self.rng_seed < 0:
            raise ValidationError("must be a non-negative integer", "loop.rng_seed")
        if not (math.isfinite(self.target_loop_gain) and self.target_loop_gain > 0):
            raise ValidationError("must be > 0", "loop.target_loop_gain")
        object.__setattr__(self, "iterations", int(self.iterations))
        object.__setattr__(self, "rng_seed", int(self.rng_seed))


@dataclass(frozen=True)
class ChainConfig:
    grid: SamplingGrid = field(default_factory=SamplingGrid)
    laser: LaserParams = field(default_factory=LaserParams)
    mzm: MzmParams = field(default_factory=MzmParams)
    fiber: FiberParams = field(default_factory=FiberParams)
    detector: DetectorParams = field(default_factory=DetectorParams)
    bpf: BpfParams = field(default_factory=BpfParams)
    amp: AmpParams = field(default_factory=AmpParams)
    loop: LoopParams = field(default_factory=LoopParams)

    def __post_init__(self):
        try:
            self.bpf.check_grid(self.grid)
        except BadPassband as exc:
            raise ValidationError(str(exc), "bpf.center_hz") from None

    def with_amp_gain(self, gain: float | None) -> "ChainConfig":
        return replace(self, amp=replace(self.amp, gain=gain))


@dataclass(frozen=True, eq=False)
class IterationRecord:
    """Waveforms seen during one round trip."""

    drive: ElectricalWaveform  # modulator input (V)
    detected: ElectricalWaveform  # photocurrent before the BPF (A)
    filtered: ElectricalWaveform  # BPF output, the oscillator's RF tap (A)
    output: ElectricalWaveform  # amplifier output, next drive (V)


@dataclass(eq=False)
class RunReport:
    fundamental: float
    q_factor: float
    purity_per_iteration: list[float]
    rms_per_iteration: list[float]
    loop_gain_at_center: complex
    converged: bool
    amp_gain: float
    tau_d: float
    records: list[IterationRecord] = field(default_factory=list, repr=False)

    @property
    def loop_gain_mag(self) -> float:
        return abs(self.loop_gain_at_center)


def q_factor(f: float, tau_d: float) -> float:
    """Delay-line oscillator quality factor 2*pi*f*tau_d."""
    if f < 0 or tau_d < 0:
        raise ValueError("f and tau_d must be >= 0")
    return 2 * math.pi * f * tau_d


def laser_for(cfg: ChainConfig) -> OpticalEnvelope:
    return cw_laser(
        cfg.laser.power_dbm,
        cfg.laser.wavelength,
        cfg.grid,
        phase_walk_rms=cfg.laser.phase_walk_rms,
        rng_seed=cfg.loop.rng_seed,
    )


def traverse(cfg: ChainConfig, drive: ElectricalWaveform, light: OpticalEnvelope | None = None) -> IterationRecord:
    """Push one drive waveform once around the loop."""
    if light is None:
        light = laser_for(cfg)
    optical = fiber_propagate(mz_modulate(light, drive, cfg.mzm), cfg.fiber)
    detected = photodetect(optical, cfg.detector.responsivity)
    filtered = bandpass_filter(detected, cfg.bpf)
    return IterationRecord(drive, detected, filtered, amplify(filtered, cfg.amp))


def _probe_bin(grid: SamplingGrid, f: float) -> int:
    if not (math.isfinite(f) and 0 < f < grid.nyquist):
        raise BadFrequency(f"f={f} Hz outside (0, {grid.nyquist})")
    k = grid.bin_of(f)
    if not 0 < k < grid.n_samples // 2:
        raise BadFrequency(f"f={f} Hz rounds to bin {k}, outside (0, N/2)")
    return k


def loop_gain(cfg: ChainConfig, f: float) -> complex:
    """Small-signal open-loop gain G*beta(f) from a single probed traversal.

    The probe is a cosine of amplitude 1e-4 * v_pi on the bin nearest ``f``;
    the result is the complex amplitude of that bin at the amplifier output
    divided by the probe amplitude. An uncalibrated amplifier is calibrated
    first.
    """
    if cfg.amp.gain is None:
        cfg = calibrate(cfg)
    grid = cfg.grid
    k = _probe_bin(grid, f)
    n = grid.n_samples
    eps = PROBE_FRACTION * cfg.mzm.v_pi
    phase = 2 * np.pi * ((k * np.arange(n)) % n) / n
    probe = ElectricalWaveform(grid, eps * np.cos(phase), Unit.VOLT)
    out = traverse(cfg, probe).output
    return complex(2 * np.fft.rfft(out.samples)[k] / n / eps)


def calibrate_gain(cfg: ChainConfig, target: float | None = None, rounds: int = 3) -> float:
    """Amplifier gain that puts |G*beta(bpf.center)| at ``target``."""
    target = cfg.loop.target_loop_gain if target is None else target
    gain = 1.0
    for _ in range(rounds + 1):
        measured = abs(loop_gain(cfg.with_amp_gain(gain), cfg.bpf.center))
        if measured == 0.0:
            raise ValidationError("open-loop gain is zero; cannot calibrate", "amp.gain")
        gain *= target / measured
    return gain


def calibrate(cfg: ChainConfig, target: float | None = None) -> ChainConfig:
    return cfg.with_amp_gain(calibrate_gain(cfg, target))


def _purity(w: ElectricalWaveform, f0: float) -> float:
    try:
        return spectral_purity(to_spectrum(w), f0, PURITY_GUARD_BINS)
    except ZeroTotalPower:
        return 0.0


def is_converged(purity: list[float], rms: list[float]) -> bool:
    """Settled oscillation: pure, purity steady, and amplitude neither growing nor decaying."""
    if len(purity) < 2:
        return False
    if purity[-1] < CONVERGED_PURITY or abs(purity[-1] - purity[-2]) >= CONVERGED_PURITY_DELTA:
        return False
    if rms[-2] <= 0:
        return False
    return abs(rms[-1] / rms[-2] - 1.0) < CONVERGED_RMS_DELTA


def run_loop(cfg: ChainConfig) -> RunReport:
    if cfg.amp.gain is None:
        cfg = calibrate(cfg)
    gbeta = loop_gain(cfg, cfg.bpf.center)
    light = laser_for(cfg)
    drive = noise_seed(cfg.grid, cfg.loop.seed_rms, cfg.loop.rng_seed)

    records, purity, rms = [], [], []
    for _ in range(cfg.loop.iterations):
        rec = traverse(cfg, drive, light)
        records.append(rec)
        purity.append(_purity(rec.filtered, cfg.bpf.center))
        rms.append(rec.output.rms)
        drive = rec.output

    try:
        fundamental = fundamental_frequency(to_spectrum(records[-1].filtered))
    except AllZeroSpectrum:
        fundamental = math.nan
    tau_d = cfg.fiber.delay
    return RunReport(
        fundamental=fundamental,
        q_factor=q_factor(fundamental, tau_d) if math.isfinite(fundamental) else math.nan,
        purity_per_iteration=purity,
        rms_per_iteration=rms,
        loop_gain_at_center=gbeta,
        converged=is_converged(purity, rms),
        amp_gain=cfg.amp.gain,
        tau_d=tau_d,
        records=records,
    )
