"""Command-line front end.

Exit codes: 0 ok, 2 parse error, 3 validation error, 4 loop did not converge
(outputs are still written), 5 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

import numpy as np

from . import csv_io
from .awg import apply_mask, broadband_source, design_mask, gaussian_comb_target
from .config import NUMERIC_KEYS, Document, dump_document, load_document, parse_document, read_config_text, split_override
from .errors import ConfigError, ParseError, PhotonSimError, ValidationError
from .loop import calibrate, loop_gain, run_loop
from .signals import to_spectrum

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_NOT_CONVERGED = 4
EXIT_IO = 5

THREADS_ENV = "PHOTON_SIM_THREADS"


class OutputError(Exception):
    """Wraps an OSError raised while writing results."""


def _prepare_dir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {path}: {exc}") from None
    return path


def _write(path: Path, text: str) -> None:
    try:
        csv_io.write_atomic(path, text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from None


def write_run(doc: Document, out_dir: Path):
    """Run the loop for ``doc`` and write every artifact into ``out_dir``."""
    report = run_loop(doc.chain)
    _prepare_dir(out_dir)
    for k, rec in enumerate(report.records, start=1):
        _write(out_dir / f"iter{k}_time.csv", csv_io.time_csv(rec.filtered))
        _write(out_dir / f"iter{k}_spectrum.csv", csv_io.spectrum_csv(to_spectrum(rec.filtered)))
    _write(out_dir / "report.txt", csv_io.format_report(report))
    _write(out_dir / "config.cfg", dump_document(doc))
    return report


def cmd_run(args) -> int:
    doc = load_document(args.config, args.set)
    report = write_run(doc, Path(args.out))
    print(csv_io.format_report(report), end="")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def _sweep_worker(job):
    text, overrides, out_dir = job
    doc = parse_document(text, overrides)
    report = write_run(doc, Path(out_dir))
    purity = report.purity_per_iteration[-1]
    return report.fundamental, report.q_factor, purity, report.converged


def sweep_threads(n_jobs: int) -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise ValidationError(f"must be a positive integer, got {raw!r}", THREADS_ENV) from None
        if cap < 1:
            raise ValidationError(f"must be a positive integer, got {raw!r}", THREADS_ENV)
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_jobs))


def cmd_sweep(args) -> int:
    key = args.param.strip()
    if key not in NUMERIC_KEYS:
        raise ValidationError("not a sweepable parameter", key)
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    if not values:
        raise ValidationError("no values to sweep", key)
    text = read_config_text(args.config)
    # validate everything before starting any run
    for v in values:
        parse_document(text, [*args.set, f"{key}={v}"])

    out = _prepare_dir(Path(args.out))
    name = key.partition(".")[2]
    jobs = [(text, [*args.set, f"{key}={v}"], str(out / f"{name}_{v}")) for v in values]
    workers = sweep_threads(len(jobs))
    if workers == 1:
        results = [_sweep_worker(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_worker, jobs))

    rows = ["value,fundamental_hz,q_factor,purity_final,converged"]
    for v, (fund, q, purity, converged) in zip(values, results):
        rows.append(f"{v},{float(fund)!r},{float(q)!r},{float(purity)!r},{'true' if converged else 'false'}")
    _write(out / "sweep.csv", "\n".join(rows) + "\n")
    print("\n".join(rows))
    return EXIT_OK if all(r[3] for r in results) else EXIT_NOT_CONVERGED


def cmd_awg(args) -> int:
    doc = load_document(args.config, args.set)
    grid, p = doc.chain.grid, doc.awg
    source = broadband_source(grid, p.total_power_w, p.n_lines, p.line_spacing_hz, doc.chain.laser.wavelength)
    if args.target:
        try:
            text = Path(args.target).read_text()
        except OSError as exc:
            raise OutputError(f"cannot read target {args.target}: {exc}") from None
        target = csv_io.read_envelope_csv(text, grid, doc.chain.laser.wavelength)
    else:
        target = gaussian_comb_target(source, p.n_lines, p.line_spacing_hz, sigma_lines=p.n_lines / 8)

    mask = design_mask(target, source, p.clip)
    shaped = apply_mask(source, mask)
    expected = target.samples * mask.rescale
    err = float(np.linalg.norm(shaped.samples - expected) / np.linalg.norm(expected))

    out = _prepare_dir(Path(args.out))
    _write(out / "source.csv", csv_io.envelope_csv(source))
    _write(out / "target.csv", csv_io.envelope_csv(target))
    _write(out / "output.csv", csv_io.envelope_csv(shaped))
    freqs = grid.frequencies()
    order = np.argsort(freqs, kind="stable")
    _write(out / "mask.csv", csv_io.columns_csv(("freq_hz", "re", "im"), (freqs[order], mask.gains.real[order], mask.gains.imag[order])))
    report = (
        f"rescale = {float(mask.rescale)!r}\n"
        f"rms_rel_error = {err!r}\n"
        f"source_power_w = {float(source.mean_power)!r}\n"
        f"output_power_w = {float(shaped.mean_power)!r}\n"
    )
    _write(out / "awg_report.txt", report)
    print(report, end="")
    return EXIT_OK


def cmd_loop_gain(args) -> int:
    doc = load_document(args.config, args.set)
    cfg = doc.chain
    if cfg.amp.gain is None:
        cfg = calibrate(cfg)
    freq = cfg.bpf.center if args.freq is None else args.freq
    g = loop_gain(cfg, freq)
    report = (
        f"freq_hz = {float(freq)!r}\n"
        f"amp_gain = {float(cfg.amp.gain)!r}\n"
        f"loop_gain_re = {g.real!r}\n"
        f"loop_gain_im = {g.imag!r}\n"
        f"loop_gain_mag = {abs(g)!r}\n"
        f"loop_gain_phase_rad = {math.atan2(g.imag, g.real)!r}\n"
    )
    if args.out:
        out = _prepare_dir(Path(args.out))
        _write(out / "loop_gain.txt", report)
    print(report, end="")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="photon-sim", description="Microwave-photonics chain simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, out_required=True):
        p.add_argument("--config", default="@paper", help="config file, or @paper / @physical for a bundled preset (default @paper)")
        p.add_argument("--out", required=out_required, help="output directory")
        p.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE", help="override one config value (repeatable)")

    common(sub.add_parser("run", help="iterate the oscillator loop and write CSVs plus report.txt"))
    p = sub.add_parser("sweep", help="one run per value of a numeric parameter")
    common(p)
    p.add_argument("--param", required=True, help="numeric key, e.g. fiber.length_km")
    p.add_argument("--values", required=True, help="comma-separated values")
    p = sub.add_parser("awg", help="design and apply a pulse-shaping mask")
    common(p)
    p.add_argument("--target", help="time_s,re,im CSV; default is a Gaussian pulse train on the comb")
    p = sub.add_parser("loop-gain", help="report the open-loop gain G*beta")
    common(p, out_required=False)
    p.add_argument("--freq", type=float, help="probe frequency in Hz (default bpf.center_hz)")
    return parser


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "awg": cmd_awg, "loop-gain": cmd_loop_gain}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        for item in args.set:
            split_override(item)
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PhotonSimError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
