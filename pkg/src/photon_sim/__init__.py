"""Block-level simulator for a microwave-photonics link and optoelectronic oscillator."""

from .awg import SpectralMask, apply_mask, broadband_source, design_mask, gaussian_comb_target
from .config import AwgParams, Document, load_document, parse_config, parse_document
from .electrical import AmpParams, BpfParams, amplify, bandpass_filter, noise_seed
from .errors import *  # noqa: F401,F403
from .loop import (
    ChainConfig,
    DetectorParams,
    LaserParams,
    LoopParams,
    RunReport,
    calibrate,
    loop_gain,
    q_factor,
    run_loop,
)
from .photonics import (
    FiberParams,
    FilterKind,
    MzmParams,
    cw_laser,
    fiber_propagate,
    mz_modulate,
    optical_filter,
    photodetect,
)
from .signals import (
    ElectricalWaveform,
    OpticalEnvelope,
    SamplingGrid,
    Spectrum,
    Unit,
    Window,
    fundamental_frequency,
    spectral_purity,
    to_spectrum,
)

__version__ = "0.1.0"
