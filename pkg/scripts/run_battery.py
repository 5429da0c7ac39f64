"""Run the t1 or t2 inequality battery over both builtin families and write a CSV report.

    python scripts/run_battery.py --theorem t2 --out battery_t2.csv
"""

import argparse
import sys
import time
import warnings

from frac_ostrowski import cli, harness
from frac_ostrowski.errors import AccuracyWarning

GRID4 = (0.25, 0.5, 0.75, 1.0)


def build_spec(theorem_id: str) -> harness.SweepSpec:
    extra = {}
    if theorem_id == "t2":
        extra = dict(q=(1.5, 2.0, 4.0), p=(0.0, 1.0), p_over_q=(0.5, 1.0))
    return harness.SweepSpec(
        theorem_id,
        functions=("expdecay:lambda=1", "linear"),
        x_frac=(0.0, 0.25, 0.5, 0.75, 1.0),
        mu=(0.5, 1.0, 2.0),
        alpha=GRID4,
        m=GRID4,
        M=(0.25, 0.5, 0.8, 1.0),
        **extra,
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theorem", choices=("t1", "t2"), default="t1")
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    spec = build_spec(args.theorem)
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        res = harness.run_sweep(spec)
    elapsed = time.perf_counter() - t0
    doc = cli.report_document("sweep", spec.to_dict(), [r.to_dict() for r in res.rows], res.summary, True)
    text = cli.dumps_csv(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    print(" ".join(f"{k}={v}" for k, v in res.summary.items()), f"elapsed={elapsed:.2f}s", file=sys.stderr)
    return 1 if res.summary["fails"] else 0


if __name__ == "__main__":
    sys.exit(main())
