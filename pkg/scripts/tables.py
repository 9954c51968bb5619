#!/usr/bin/env python3
"""Write JSON invariant tables for the standard targets into a directory."""
import argparse
from pathlib import Path

from twopt.cli import main

TARGETS = [
    ("pn", "1", "3"), ("pn", "2", "2"), ("pn", "3", "2"),
    ("wps", "1,2", "2"), ("wps", "1,1,2", "2"), ("wps", "1,2,3", "1"),
    ("toric", "P1xP1", "2"), ("toric", "P1xP2", "1"), ("builtin", "X1", "2"),
]


def run():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("outdir", nargs="?", default="tables")
    args = p.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    status = 0
    for kind, target, dmax in TARGETS:
        name = f"{kind}-{target.replace(',', '_')}-d{dmax}.json"
        status |= main(["compute", kind, target, "--dmax", dmax, "--out", str(out / name)])
    return status


if __name__ == "__main__":
    raise SystemExit(run())
