#!/usr/bin/env python3
"""Run the three bundled end-to-end experiments.

pme_poly   polynomial acceleration, sandwich verified
noacc      linear spreading bracketed by the certified speeds
fde_kpp    exponential acceleration, rate fit against Gamma

Outputs land in runs/<name>/ (trajectory.csv, trace.csv, report.json,
experiment_manifest.json).
"""
import sys
from importlib import resources

from frontlab.cli import main as frontlab_main

NAMES = ("pme_poly", "noacc", "fde_kpp")


def main(argv=None):
    names = (argv or sys.argv[1:]) or NAMES
    unknown = [n for n in names if n not in NAMES]
    if unknown:
        print(__doc__.strip())
        print(f"\nusage: acceleration_runs.py [{' | '.join(NAMES)} ...]")
        return 0 if unknown in (["-h"], ["--help"]) else 2
    cfg_root = resources.files("frontlab") / "configs"
    for name in names:
        cfg = cfg_root / f"{name}.json"
        print(f"== {name} ==")
        rc = frontlab_main(["experiment", "--config", str(cfg),
                            "--out", f"runs/{name}", "--json"])
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
