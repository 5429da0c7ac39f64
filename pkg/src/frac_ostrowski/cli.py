"""Command-line front end: ``frac-ostrowski {verify,sweep,sharpness,findings}``.

Exit codes: 0 inequality holds (or command succeeded), 1 inequality fails,
2 usage or domain error, 3 quadrature accuracy not reached.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from datetime import datetime, timezone

from . import __version__, bounds, harness
from .bounds import Scenario
from .errors import AccuracyWarning, FracOstrowskiError
from .funclib import family_names, family_needs_M, make_spec, parse_family
from .quadrature import QuadratureConfig

SCHEMA = "frac-ostrowski/report"
SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ACCURACY = 0, 1, 2, 3

THEOREM_CHOICES = tuple(bounds.THEOREMS)
SIGN_CHOICES = {"paper": bounds.PAPER_PLUS, "corrected": bounds.CORRECTED_MINUS}

SCENARIO_FIELDS = ("a", "b", "x", "mu", "alpha", "m", "M", "p", "q")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialization


def _clean(obj):
    """Replace non-finite floats by None so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def report_document(kind: str, input_echo: dict, rows: list[dict], summary: dict, deterministic: bool) -> dict:
    doc = {"schema": SCHEMA, "schema_version": SCHEMA_VERSION, "tool_version": __version__, "kind": kind}
    if not deterministic:
        doc["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    doc["input"] = input_echo
    doc["rows"] = rows
    doc["summary"] = summary
    return _clean(doc)


def dumps_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


BOUND_COLUMNS = (
    "theorem_id", "function", *SCENARIO_FIELDS, "lhs", "rhs", "margin", "holds",
    "hypotheses_ok", "failed_hypotheses", "quadrature_flags", "error",
)
SHARPNESS_COLUMNS = (
    "theorem_id", "function", *SCENARIO_FIELDS, "x_star", "ratio", "grid_x_star", "grid_ratio",
    "evaluations", "strategy", "degenerate",
)


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def bound_csv_row(row: dict) -> list:
    sc = row.get("scenario") or {}
    failed = ";".join(item["name"] for item in row.get("hypothesis_audit", []) if not item["passed"])
    values = {
        **{k: sc.get(k) for k in SCENARIO_FIELDS},
        **row,
        "failed_hypotheses": failed,
        "quadrature_flags": ";".join(row.get("quadrature_flags", [])),
    }
    return [_csv_value(values.get(c)) for c in BOUND_COLUMNS]


def sharpness_csv_row(row: dict) -> list:
    sc = row.get("scenario_template") or {}
    values = {**{k: sc.get(k) for k in SCENARIO_FIELDS}, **row}
    if row.get("x_star") is None:
        values["x_star"] = None
    return [_csv_value(values.get(c)) for c in SHARPNESS_COLUMNS]


def dumps_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    kind = doc["kind"]
    if kind == "findings":
        w.writerow(("id", "key", "value"))
        for row in doc["rows"]:
            for key, val in row.items():
                if key != "id":
                    w.writerow((row["id"], key, json.dumps(val, sort_keys=True)))
    elif kind == "sharpness":
        w.writerow(SHARPNESS_COLUMNS)
        for row in doc["rows"]:
            w.writerow(sharpness_csv_row(row))
    else:
        w.writerow(BOUND_COLUMNS)
        for row in doc["rows"]:
            w.writerow(bound_csv_row(row))
    for key, val in doc["summary"].items():
        buf.write(f"# {key}={_csv_value(val)}\n")
    return buf.getvalue()


def _g(v) -> str:
    return "nan" if v is None else f"{v:.12g}"


def render_bound_text(row: dict) -> str:
    sc = row["scenario"]
    lines = [
        f"theorem  {row['theorem_id']}",
        f"function {row['function']}",
        "scenario " + " ".join(f"{k}={sc[k]:g}" for k in SCENARIO_FIELDS),
    ]
    if row.get("error"):
        lines.append(f"error    {row['error']}")
        return "\n".join(lines) + "\n"
    lines += [
        f"lhs      {_g(row['lhs'])}",
        f"rhs      {_g(row['rhs'])}",
        f"margin   {_g(row['margin'])}",
        f"holds    {str(row['holds']).lower()}",
    ]
    if row.get("identity_rhs") is not None:
        lines.append(f"identity signed lhs {_g(row['signed_lhs'])} vs {row['sign_convention']} rhs {_g(row['identity_rhs'])}")
    if row.get("extension"):
        lines.append(f"note     extension: {row['extension']}")
    for item in row["hypothesis_audit"]:
        mark = "ok  " if item["passed"] else "FAIL"
        lines.append(f"audit    [{mark}] {item['name']}: {item['detail']}")
    for flag in row["quadrature_flags"]:
        lines.append(f"warning  {flag}")
    return "\n".join(lines) + "\n"


def dumps_text(doc: dict) -> str:
    kind = doc["kind"]
    out = []
    if kind == "findings":
        if not doc["rows"]:
            return "no findings\n"
        for row in doc["rows"]:
            out.append(f"[{row['id']}] {row['summary']}")
            for key, val in row.items():
                if key in ("id", "summary"):
                    continue
                out.append(f"    {key}: {json.dumps(val, sort_keys=True) if isinstance(val, dict) else _fmt_any(val)}")
        return "\n".join(out) + "\n"
    if kind == "sharpness":
        for row in doc["rows"]:
            out.append(
                f"{row['theorem_id']} {row['function']}: x*={_g(row['x_star'])} ratio={_g(row['ratio'])} "
                f"(grid x*={_g(row['grid_x_star'])} ratio={_g(row['grid_ratio'])}, {row['evaluations']} evaluations)"
                + (f" degenerate: {row['note']}" if row["degenerate"] else "")
            )
        return "\n".join(out) + "\n"
    for row in doc["rows"]:
        out.append(render_bound_text(row))
    if kind == "sweep":
        out.append("summary " + " ".join(f"{k}={v}" for k, v in doc["summary"].items()) + "\n")
    return "\n".join(out)


def _fmt_any(v):
    return _g(v) if isinstance(v, float) else str(v)


def dumps(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps_json(doc)
    if fmt == "csv":
        return dumps_csv(doc)
    return dumps_text(doc)


# ---------------------------------------------------------------------------
# config files


LIST_KEYS = {
    "function": "functions", "a": "a", "b": "b", "x": "x", "x_frac": "x_frac", "mu": "mu",
    "alpha": "alpha", "m": "m", "M": "M", "p": "p", "p_over_q": "p_over_q", "q": "q",
}
QUAD_KEYS = ("rel_tol", "abs_tol", "max_depth", "points_per_panel")
SCALAR_KEYS = ("theorem", "n_random", "seed", "verdict_tol", "exact", "audit", *QUAD_KEYS)


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def parse_config(text: str) -> harness.SweepSpec:
    """Flat ``key = value`` lines; repeat a key to list several grid values.

    Lines starting with ``#`` are comments. A grid key that appears at
    least once replaces its default list.
    """
    lists: dict[str, list] = {}
    scalars: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, eq, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not eq:
            raise UsageError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if key in LIST_KEYS:
            lists.setdefault(LIST_KEYS[key], []).append(val)
        elif key in SCALAR_KEYS:
            if key in scalars:
                raise UsageError(f"line {lineno}: {key!r} given twice")
            scalars[key] = val
        else:
            raise UsageError(f"line {lineno}: unknown key {key!r}")
    if "theorem" not in scalars:
        raise UsageError("config needs a 'theorem' line")
    kwargs = {"theorem_id": scalars["theorem"]}
    try:
        for name, vals in lists.items():
            kwargs[name] = tuple(vals) if name == "functions" else tuple(float(v) for v in vals)
        if "n_random" in scalars:
            kwargs["n_random"] = int(scalars["n_random"])
        if "seed" in scalars:
            kwargs["seed"] = int(scalars["seed"])
        if "verdict_tol" in scalars:
            kwargs["verdict_tol"] = float(scalars["verdict_tol"])
        quad = {}
        for k in QUAD_KEYS:
            if k in scalars:
                quad[k] = int(scalars[k]) if k in ("max_depth", "points_per_panel") else float(scalars[k])
    except ValueError as exc:
        raise UsageError(f"bad number in config: {exc}") from None
    if "exact" in scalars:
        kwargs["exact"] = _parse_bool(scalars["exact"])
    if "audit" in scalars:
        kwargs["audit"] = _parse_bool(scalars["audit"])
    if quad:
        kwargs["quad"] = QuadratureConfig(**quad)
    if kwargs["theorem_id"] not in bounds.THEOREMS:
        raise UsageError(f"unknown theorem {kwargs['theorem_id']!r}")
    return harness.SweepSpec(**kwargs)


# ---------------------------------------------------------------------------
# commands


def _family_from_args(args):
    # an explicit --M fills in a family parameter the descriptor leaves out
    defaults = {"M": args.M} if args.M is not None else {}
    return parse_family(args.family, **defaults)


def _function_from_args(args, s_hint_hi: float):
    if args.f is not None:
        return make_spec(args.f, (0.0, s_hint_hi))
    return make_spec(_family_from_args(args), (0.0, s_hint_hi))


def _scenario_from_args(args) -> Scenario:
    M = args.M
    if M is None:
        if args.family is not None:
            name = args.family.partition(":")[0].strip()
            if "M=" in args.family or name not in family_names() or not family_needs_M(name):
                M = getattr(parse_family(args.family), "M", None)
        if M is None:
            raise UsageError("--M is required unless the family declares M")
    x = args.x if args.x is not None else 0.5 * (args.a + args.b)
    return Scenario(args.a, args.b, x, args.mu, args.alpha, args.m, M, args.p, args.q)


def _write(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    s = _scenario_from_args(args)
    f = _function_from_args(args, s.b / s.m)
    cfg = QuadratureConfig(rel_tol=args.rel_tol, max_depth=args.max_depth)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        rep = bounds.verify(
            args.theorem, f, s, cfg, verdict_tol=args.tol, exact=args.exact,
            sign_convention=SIGN_CHOICES[args.sign],
        )
    doc = report_document("verify", {"theorem_id": args.theorem, "function": f.descriptor(), "scenario": s.to_dict()},
                          [rep.to_dict()], {"holds": rep.holds, "hypotheses_ok": rep.hypotheses_ok},
                          args.deterministic)
    _write(dumps(doc, args.format), args.out)
    if rep.quadrature_flags:
        return EXIT_ACCURACY
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_sweep(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            spec = parse_config(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read config {args.config!r}: {exc.strerror}") from None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        result = harness.run_sweep(spec)
    doc = report_document("sweep", spec.to_dict(), [r.to_dict() for r in result.rows], result.summary,
                          args.deterministic)
    _write(dumps(doc, args.format), args.out)
    if args.strict and (result.summary["fails"] or result.summary["errors"]):
        return EXIT_FAIL
    return EXIT_OK


def cmd_sharpness(args) -> int:
    s = _scenario_from_args(args)
    f = _function_from_args(args, s.b / s.m)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AccuracyWarning)
        res = harness.sharpness_search(args.theorem, f, s, args.strategy, args.n, args.xtol, exact=args.exact)
    doc = report_document("sharpness", {"theorem_id": args.theorem, "function": f.descriptor(),
                                        "scenario_template": s.to_dict(), "strategy": args.strategy},
                          [res.to_dict()], {"degenerate": res.degenerate}, args.deterministic)
    _write(dumps(doc, args.format), args.out)
    return EXIT_OK


def cmd_findings(args) -> int:
    rows = harness.discrepancy_log(not args.no_findings)
    doc = report_document("findings", {"enabled": not args.no_findings}, rows, {"findings": len(rows)},
                          args.deterministic)
    _write(dumps(doc, args.format), args.out)
    return EXIT_OK


def _add_function_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--f", help='expression in x, e.g. "exp(-x)+x^2/4"')
    g.add_argument("--family", help="builtin family, e.g. expdecay:M=0.8,lambda=1")


def _add_scenario_args(p):
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--x", type=float, default=None,
                   help="evaluation point (default: midpoint)")
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--m", type=float, default=1.0, metavar="m")
    p.add_argument("--M", type=float, default=None, metavar="M", help="derivative bound (default: the family's M)")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--q", type=float, default=2.0)


def _add_output_args(p, default_format="text"):
    p.add_argument("--format", choices=("json", "csv", "text"), default=default_format)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--deterministic", action="store_true", help="omit timestamps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frac-ostrowski", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check one inequality on one scenario")
    p.add_argument("--theorem", choices=THEOREM_CHOICES, required=True)
    _add_function_args(p)
    _add_scenario_args(p)
    p.add_argument("--tol", type=float, default=bounds.DEFAULT_VERDICT_TOL, help="verdict tolerance on the margin")
    p.add_argument("--rel-tol", type=float, default=1e-10, help="quadrature relative tolerance")
    p.add_argument("--max-depth", type=int, default=50, help="quadrature bisection depth limit")
    p.add_argument("--sign", choices=tuple(SIGN_CHOICES), default="corrected",
                   help="sign convention for the identity's right-hand side")
    p.add_argument("--exact", action="store_true", help="integrate the constants numerically (extension; any M > 0)")
    _add_output_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run a parameter sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--strict", action="store_true", help="exit 1 if any cell fails or errors")
    _add_output_args(p, "json")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sharpness", help="maximize lhs/rhs over x")
    p.add_argument("--theorem", choices=THEOREM_CHOICES, required=True)
    _add_function_args(p)
    _add_scenario_args(p)
    p.add_argument("--strategy", choices=("grid", "golden"), default="golden")
    p.add_argument("--n", type=int, default=101, help="grid points")
    p.add_argument("--xtol", type=float, default=1e-6, help="golden-section bracket tolerance")
    p.add_argument("--exact", action="store_true")
    _add_output_args(p)
    p.set_defaults(func=cmd_sharpness)

    p = sub.add_parser("findings", help="print the discrepancy log")
    p.add_argument("--no-findings", action="store_true", help="emit an empty log")
    _add_output_args(p)
    p.set_defaults(func=cmd_findings)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FracOstrowskiError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
