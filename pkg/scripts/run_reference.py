"""Run the bundled reference chain and print the per-iteration trace.

    python scripts/run_reference.py [--out DIR]
"""

import argparse

from photon_sim.cli import write_run
from photon_sim.config import load_document
from photon_sim.loop import run_loop


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", help="also write CSVs and report.txt here")
    args = ap.parse_args()

    doc = load_document("@paper")
    report = write_run(doc, args.out) if args.out else run_loop(doc.chain)
    print(f"amp gain {report.amp_gain:.2f} V/A, |G*beta| = {report.loop_gain_mag:.4f}")
    print(f"{'iter':>4} {'purity':>16} {'rms (mV)':>10} {'change':>8}")
    prev = None
    for i, (p, r) in enumerate(zip(report.purity_per_iteration, report.rms_per_iteration), start=1):
        change = "" if prev is None else f"{r / prev - 1:+.2%}"
        print(f"{i:>4} {p:>16.12f} {r * 1e3:>10.4f} {change:>8}")
        prev = r
    print(f"fundamental {report.fundamental:.6g} Hz, Q = {report.q_factor:.5g}, converged = {report.converged}")


if __name__ == "__main__":
    main()
