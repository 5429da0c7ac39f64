"""Tabulate the sharpness ratio max_x lhs/rhs against mu for one function.

Prints plot-ready CSV (mu, x_star, ratio, grid_ratio) on stdout.

    python scripts/sharpness_scan.py --theorem t1 --f "exp(x)/3" --M 1
"""

import argparse
import csv
import sys

import numpy as np

from frac_ostrowski import harness
from frac_ostrowski.bounds import Scenario
from frac_ostrowski.funclib import make_spec, parse_family


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theorem", default="t1")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--f")
    src.add_argument("--family")
    ap.add_argument("--a", type=float, default=0.0)
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--m", type=float, default=1.0)
    ap.add_argument("--M", type=float, default=1.0)
    ap.add_argument("--mu-min", type=float, default=0.1)
    ap.add_argument("--mu-max", type=float, default=3.0)
    ap.add_argument("--steps", type=int, default=30)
    args = ap.parse_args(argv)

    hint = (0.0, args.b / args.m)
    f = make_spec(args.f if args.f else parse_family(args.family), hint)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(("mu", "x_star", "ratio", "grid_ratio"))
    for mu in np.linspace(args.mu_min, args.mu_max, args.steps):
        template = Scenario(args.a, args.b, 0.5 * (args.a + args.b), float(mu), args.alpha, args.m, args.M)
        res = harness.sharpness_search(args.theorem, f, template, "golden")
        w.writerow((f"{mu:.6g}", repr(res.x_star), repr(res.ratio), repr(res.grid_ratio)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
