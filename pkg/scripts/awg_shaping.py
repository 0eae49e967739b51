"""Round-trip error and passivity rescale for Gaussian targets of varying width.

    python scripts/awg_shaping.py [--lines 64] [--spacing 100e6]
"""

import argparse

import numpy as np

from photon_sim.awg import apply_mask, broadband_source, design_mask, gaussian_comb_target
from photon_sim.signals import SamplingGrid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lines", type=int, default=64)
    ap.add_argument("--spacing", type=float, default=100e6)
    args = ap.parse_args()

    grid = SamplingGrid()
    source = broadband_source(grid, 1e-3, args.lines, args.spacing)
    print(f"{'sigma (lines)':>13} {'rescale':>9} {'out/in power':>13} {'rms rel err':>12}")
    for sigma in (1, 2, 4, 8, 16, 32):
        target = gaussian_comb_target(source, args.lines, args.spacing, sigma_lines=sigma)
        mask = design_mask(target, source)
        out = apply_mask(source, mask)
        err = np.linalg.norm(out.samples / mask.rescale - target.samples) / np.linalg.norm(target.samples)
        print(f"{sigma:>13} {mask.rescale:>9.4f} {out.mean_power / source.mean_power:>13.4f} {err:>12.2e}")


if __name__ == "__main__":
    main()
