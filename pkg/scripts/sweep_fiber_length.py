"""Q factor and final purity against fiber length, through the CLI sweep.

    python scripts/sweep_fiber_length.py --out sweep_out [--values 1,2,5,10,20,50,100]
"""

import argparse
import sys

from photon_sim.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", required=True)
    ap.add_argument("--values", default="1,2,5,10,20,50,100")
    ap.add_argument("--config", default="@paper")
    args = ap.parse_args()
    return cli_main(
        ["sweep", "--config", args.config, "--out", args.out, "--param", "fiber.length_km", "--values", args.values]
    )


if __name__ == "__main__":
    sys.exit(main())
