"""INI-style chain configuration.

Sections are ``grid laser mzm fiber detector bpf amp loop awg``; units are
spelled in the key name (``length_km``, ``center_hz``). Omitted keys take the
defaults of the corresponding parameter dataclass; unknown sections or keys
are rejected. ``--set section.key=value`` overrides use the same names.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from .electrical import AmpParams, BpfParams
from .errors import InvalidGrid, ParseError, ValidationError
from .loop import ChainConfig, DetectorParams, LaserParams, LoopParams
from .photonics import FiberParams, MzmParams
from .signals import SamplingGrid

PRESETS = ("paper", "physical")


@dataclass(frozen=True)
class AwgParams:
    total_power_w: float = 1e-3
    n_lines: int = 64
    line_spacing_hz: float = 100e6
    clip: float | None = None  # absolute |S_k| floor; None = 1e-6 * max|S_k|

    def __post_init__(self):
        if not (math.isfinite(self.total_power_w) and self.total_power_w >= 0):
            raise ValidationError("must be >= 0", "awg.total_power_w")
        if int(self.n_lines) != self.n_lines or self.n_lines < 1:
            raise ValidationError("must be an integer >= 1", "awg.n_lines")
        if not (math.isfinite(self.line_spacing_hz) and self.line_spacing_hz > 0):
            raise ValidationError("must be > 0", "awg.line_spacing_hz")
        if self.clip is not None and not (math.isfinite(self.clip) and self.clip >= 0):
            raise ValidationError("must be >= 0", "awg.clip")
        object.__setattr__(self, "n_lines", int(self.n_lines))


@dataclass(frozen=True)
class Document:
    """Everything a config file can describe."""

    chain: ChainConfig = field(default_factory=ChainConfig)
    awg: AwgParams = field(default_factory=AwgParams)


def _float(text: str) -> float:
    value = float(text)
    if math.isnan(value):
        raise ValueError("NaN")
    return value


def _int(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def _or_keyword(keyword: str, convert: Callable[[str], Any]) -> Callable[[str], Any]:
    def parse(text: str):
        return None if text.strip().lower() == keyword else convert(text)

    return parse


# config key -> (dataclass field, converter), per section
SCHEMA: dict[str, dict[str, tuple[str, Callable[[str], Any]]]] = {
    "grid": {"sample_rate_hz": ("sample_rate", _float), "n_samples": ("n_samples", _int)},
    "laser": {
        "power_dbm": ("power_dbm", _float),
        "wavelength_nm": ("wavelength", _float),
        "phase_walk_rms_rad": ("phase_walk_rms", _float),
    },
    "mzm": {
        "v_pi_v": ("v_pi", _float),
        "v_bias_v": ("v_bias", _or_keyword("quadrature", _float)),
        "insertion_loss_db": ("insertion_loss", _float),
    },
    "fiber": {
        "length_km": ("length", _float),
        "attenuation_db_per_km": ("attenuation", _float),
        "group_index": ("group_index", _float),
        "light_speed_m_per_s": ("light_speed", _float),
    },
    "detector": {"responsivity_a_per_w": ("responsivity", _float)},
    "bpf": {
        "center_hz": ("center", _float),
        "bandwidth_hz": ("bandwidth", _float),
        "stop_atten_db": ("stop_atten", _float),
    },
    "amp": {"gain": ("gain", _or_keyword("auto", _float)), "saturation_v": ("saturation", _float)},
    "loop": {
        "iterations": ("iterations", _int),
        "seed_rms_v": ("seed_rms", _float),
        "rng_seed": ("rng_seed", _int),
        "target_loop_gain": ("target_loop_gain", _float),
    },
    "awg": {
        "total_power_w": ("total_power_w", _float),
        "n_lines": ("n_lines", _int),
        "line_spacing_hz": ("line_spacing_hz", _float),
        "clip": ("clip", _or_keyword("auto", _float)),
    },
}

_SECTION_TYPES = {
    "grid": SamplingGrid,
    "laser": LaserParams,
    "mzm": MzmParams,
    "fiber": FiberParams,
    "detector": DetectorParams,
    "bpf": BpfParams,
    "amp": AmpParams,
    "loop": LoopParams,
    "awg": AwgParams,
}

NUMERIC_KEYS = tuple(f"{s}.{k}" for s, keys in SCHEMA.items() for k in keys)


def _read_sections(text: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";"), strict=True
    )
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParseError(str(exc).splitlines()[0]) from None
    if parser.defaults():
        raise ValidationError("unknown section", "DEFAULT")
    return {name: dict(parser[name]) for name in parser.sections()}


def split_override(item: str) -> tuple[str, str, str]:
    """``"fiber.length_km=10"`` -> ``("fiber", "length_km", "10")``."""
    key, sep, value = item.partition("=")
    section, dot, name = key.strip().partition(".")
    if not sep or not dot or not section or not name:
        raise ParseError(f"override {item!r} is not section.key=value")
    return section, name, value.strip()


def _check_key(section: str, name: str) -> None:
    if section not in SCHEMA:
        raise ValidationError("unknown section", section)
    if name not in SCHEMA[section]:
        raise ValidationError("unknown key", f"{section}.{name}")


def _build(raw: dict[str, dict[str, str]]) -> Document:
    built: dict[str, Any] = {}
    for section, cls in _SECTION_TYPES.items():
        kwargs = {}
        for name, text in raw.get(section, {}).items():
            attr, convert = SCHEMA[section][name]
            try:
                kwargs[attr] = convert(text)
            except ValueError:
                raise ParseError(f"cannot parse {text!r}", f"{section}.{name}") from None
        try:
            built[section] = cls(**kwargs)
        except InvalidGrid as exc:
            bad = "n_samples" if "n_samples" in str(exc) else "sample_rate_hz"
            raise ValidationError(str(exc), f"grid.{bad}") from None
    awg = built.pop("awg")
    return Document(ChainConfig(**built), awg)


def parse_document(text: str, overrides: list[str] | tuple[str, ...] = ()) -> Document:
    raw = _read_sections(text)
    for section, names in raw.items():
        for name in names:
            _check_key(section, name)
    for item in overrides:
        section, name, value = split_override(item)
        _check_key(section, name)
        raw.setdefault(section, {})[name] = value
    return _build(raw)


def parse_config(text: str, overrides: list[str] | tuple[str, ...] = ()) -> ChainConfig:
    return parse_document(text, overrides).chain


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ParseError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return resources.files("photon_sim.presets").joinpath(f"{name}.cfg").read_text()


def read_config_text(location: str | Path) -> str:
    """Read a config file; ``@name`` selects a bundled preset."""
    location = str(location)
    if location.startswith("@"):
        return preset_text(location[1:])
    try:
        return Path(location).read_text()
    except FileNotFoundError:
        raise ParseError(f"config file not found: {location}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read config {location}: {exc}") from None


def load_document(location: str | Path, overrides: list[str] | tuple[str, ...] = ()) -> Document:
    return parse_document(read_config_text(location), overrides)


def _format_value(value: Any, keyword: str | None) -> str:
    if value is None:
        return keyword or ""
    return repr(value) if isinstance(value, float) else str(value)


def dump_document(doc: Document) -> str:
    """Render a fully explicit config that parses back to ``doc``."""
    objects = {
        "grid": doc.chain.grid,
        "laser": doc.chain.laser,
        "mzm": doc.chain.mzm,
        "fiber": doc.chain.fiber,
        "detector": doc.chain.detector,
        "bpf": doc.chain.bpf,
        "amp": doc.chain.amp,
        "loop": doc.chain.loop,
        "awg": doc.awg,
    }
    keywords = {("amp", "gain"): "auto", ("awg", "clip"): "auto"}
    lines = []
    for section, keys in SCHEMA.items():
        lines.append(f"[{section}]")
        obj = objects[section]
        for name, (attr, _) in keys.items():
            lines.append(f"{name} = {_format_value(getattr(obj, attr), keywords.get((section, name)))}")
        lines.append("")
    return "\n".join(lines)

