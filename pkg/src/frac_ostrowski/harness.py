"""Parameter sweeps, sharpness searches and the discrepancy log."""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import bounds
from .bounds import BoundReport, Scenario
from .errors import DomainError, FracOstrowskiError
from .funclib import FunctionSpec, make_spec, spec_from_descriptor
from .quadrature import DEFAULT_CONFIG, QuadratureConfig

THREADS_ENV = "FRAC_OSTROWSKI_THREADS"

# enumeration order of the Cartesian product
PARAM_ORDER = ("a", "b", "x", "mu", "alpha", "m", "M", "p", "q")


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition for a batch of verifications.

    Positions may be given absolutely (``x``) or as fractions of [a, b]
    (``x_frac``); both lists are used if both are set. Likewise ``p`` and
    ``p_over_q``. Combinations that break the Scenario invariants
    (a >= b, x outside [a, b], p > q) are skipped and counted.

    A family descriptor without ``M`` (e.g. ``expdecay:lambda=1``) takes
    the cell's M, which ties the derivative bound to the scenario.
    ``n_random`` adds that many uniformly drawn x per (a, b) pair, seeded
    by ``seed``.
    """

    theorem_id: str
    functions: tuple = ()
    a: tuple = (0.0,)
    b: tuple = (1.0,)
    x: tuple = ()
    x_frac: tuple = ()
    mu: tuple = (1.0,)
    alpha: tuple = (1.0,)
    m: tuple = (1.0,)
    M: tuple = (1.0,)
    p: tuple = ()
    p_over_q: tuple = ()
    q: tuple = (2.0,)
    n_random: int = 0
    seed: int = 0
    quad: QuadratureConfig = DEFAULT_CONFIG
    verdict_tol: float = bounds.DEFAULT_VERDICT_TOL
    exact: bool = False
    audit: bool = True

    def to_dict(self) -> dict:
        d = {}
        for name in self.__dataclass_fields__:
            v = getattr(self, name)
            if isinstance(v, QuadratureConfig):
                v = {k: getattr(v, k) for k in v.__dataclass_fields__}
            elif isinstance(v, tuple):
                v = list(v)
            d[name] = v
        return d


@dataclass(frozen=True)
class Cell:
    function: str
    scenario: Scenario


def _positions(spec: SweepSpec, a: float, b: float, rng) -> list[float]:
    xs = [float(v) for v in spec.x]
    xs += [a + float(fr) * (b - a) for fr in spec.x_frac]
    if spec.n_random:
        xs += [float(v) for v in rng.uniform(a, b, spec.n_random)]
    return xs


def _p_values(spec: SweepSpec, q: float) -> list[float]:
    ps = [float(v) for v in spec.p] + [float(r) * q for r in spec.p_over_q]
    return ps if (spec.p or spec.p_over_q) else [1.0]


def enumerate_cells(spec: SweepSpec) -> tuple[list[Cell], int]:
    """All valid cells in (function, a, b, x, mu, alpha, m, M, p, q) order, plus the skip count."""
    bounds.theorem_info(spec.theorem_id)
    rng = np.random.default_rng(spec.seed)
    cells = []
    skipped = 0
    # positions are drawn once per (a, b) so every function sees the same x values
    pos_cache = {}
    for a, b in itertools.product(spec.a, spec.b):
        pos_cache[(a, b)] = _positions(spec, float(a), float(b), rng) if b > a else []
    for func in spec.functions:
        for a, b in itertools.product(spec.a, spec.b):
            if not b > a:
                skipped += 1
                continue
            for x in pos_cache[(a, b)]:
                for mu, alpha, m, M, q in itertools.product(spec.mu, spec.alpha, spec.m, spec.M, spec.q):
                    for p in _p_values(spec, float(q)):
                        try:
                            s = Scenario(a, b, x, mu, alpha, m, M, p, q)
                        except DomainError:
                            skipped += 1
                            continue
                        cells.append(Cell(func, s))
    return cells, skipped


def _spec_for(descriptor: str, s: Scenario) -> FunctionSpec:
    return spec_from_descriptor(descriptor, (0.0, s.b / s.m), M=s.M)


def _run_cell(spec: SweepSpec, cell: Cell) -> BoundReport:
    try:
        f = _spec_for(cell.function, cell.scenario)
        settings = bounds.DEFAULT_AUDIT
        rep = bounds.verify(
            spec.theorem_id, f, cell.scenario, spec.quad,
            verdict_tol=spec.verdict_tol, exact=spec.exact, audit_settings=settings,
        )
        if not spec.audit:
            rep = replace(rep, hypothesis_audit=())
        return rep
    except (FracOstrowskiError, ArithmeticError) as exc:
        nan = float("nan")
        return BoundReport(
            spec.theorem_id, cell.function, bounds.pin(spec.theorem_id, cell.scenario),
            nan, nan, nan, False, error=f"{type(exc).__name__}: {exc}",
        )


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class SweepResult:
    rows: list
    summary: dict = field(default_factory=dict)


def summarize(rows, skipped: int = 0) -> dict:
    ok = [r for r in rows if r.error is None]
    return {
        "cells": len(rows),
        "holds": sum(1 for r in ok if r.holds),
        "fails": sum(1 for r in ok if not r.holds),
        "fails_with_hypotheses_ok": sum(1 for r in ok if not r.holds and r.hypotheses_ok),
        "hypothesis_violated": sum(1 for r in ok if not r.hypotheses_ok),
        "accuracy_flagged": sum(1 for r in ok if r.quadrature_flags),
        "errors": len(rows) - len(ok),
        "skipped_invalid": skipped,
    }


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Verify every cell of the sweep; failures are recorded, never raised.

    Cells may run on a thread pool (size from FRAC_OSTROWSKI_THREADS);
    rows always come back in enumeration order.
    """
    cells, skipped = enumerate_cells(spec)
    n = _threads()
    if n > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            rows = list(pool.map(lambda c: _run_cell(spec, c), cells))
    else:
        rows = [_run_cell(spec, c) for c in cells]
    return SweepResult(rows, summarize(rows, skipped))


# ---------------------------------------------------------------------------
# sharpness


INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class SharpnessResult:
    theorem_id: str
    function: str
    scenario_template: Scenario
    x_star: float
    ratio: float
    evaluations: int
    grid_x_star: float
    grid_ratio: float
    strategy: str
    degenerate: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "function": self.function,
            "scenario_template": self.scenario_template.to_dict(),
            "x_star": self.x_star,
            "ratio": self.ratio,
            "evaluations": self.evaluations,
            "grid_x_star": self.grid_x_star,
            "grid_ratio": self.grid_ratio,
            "strategy": self.strategy,
            "degenerate": self.degenerate,
            "note": self.note,
        }


class _Degenerate(Exception):
    pass


def sharpness_search(
    theorem_id: str,
    f: FunctionSpec,
    template: Scenario,
    strategy: str = "grid",
    n: int = 101,
    tol: float = 1e-6,
    cfg: QuadratureConfig | None = None,
    exact: bool = False,
) -> SharpnessResult:
    """Maximize lhs/rhs over x in [a + eps, b - eps], eps = 1e-6 (b - a).

    ``grid`` evaluates n equally spaced points. ``golden`` first runs a
    coarse grid of min(n, 21) points, then golden-section refines around
    the best grid point (assuming unimodality there); the better of the
    two is returned. Ties go to the smaller x.
    """
    if strategy not in ("grid", "golden"):
        raise DomainError(f"strategy must be 'grid' or 'golden', got {strategy!r}")
    if n < 2:
        raise DomainError(f"need at least 2 grid points, got {n}")
    a, b = template.a, template.b
    eps = 1e-6 * (b - a)
    lo, hi = a + eps, b - eps
    count = 0

    def ratio_at(x: float) -> float:
        nonlocal count
        count += 1
        s = replace(template, x=x)
        r = bounds.rhs(theorem_id, s, exact, cfg)
        if r <= 0.0:
            raise _Degenerate(f"rhs = {r} at x = {x}")
        return abs(bounds.lhs_detail(theorem_id, f, s, cfg).value) / r

    grid_n = n if strategy == "grid" else min(n, 21)
    xs = np.linspace(lo, hi, grid_n)
    try:
        vals = np.array([ratio_at(float(x)) for x in xs])
    except _Degenerate as exc:
        nan = float("nan")
        return SharpnessResult(theorem_id, f.descriptor(), template, nan, nan, count, nan, nan, strategy, True, str(exc))
    # ratios within TIE_RTOL of the maximum count as ties; the smallest x wins
    i = int(np.argmax(vals >= vals.max() * (1.0 - TIE_RTOL)))
    gx, gr = float(xs[i]), float(vals[i])
    best_x, best_r = gx, gr
    if strategy == "golden":
        left = float(xs[max(i - 1, 0)])
        right = float(xs[min(i + 1, grid_n - 1)])
        try:
            rx, rr = _golden_max(ratio_at, left, right, tol)
        except _Degenerate:
            rx, rr = gx, gr
        if rr > best_r * (1.0 + TIE_RTOL) or (rr >= best_r * (1.0 - TIE_RTOL) and rx < best_x):
            best_x, best_r = rx, rr
    return SharpnessResult(theorem_id, f.descriptor(), template, best_x, best_r, count, gx, gr, strategy)


def _golden_max(fun, lo: float, hi: float, tol: float) -> tuple[float, float]:
    c = hi - INV_PHI * (hi - lo)
    d = lo + INV_PHI * (hi - lo)
    fc, fd = fun(c), fun(d)
    while hi - lo > tol:
        if fc >= fd:  # keep the left bracket on ties
            hi, d, fd = d, c, fc
            c = hi - INV_PHI * (hi - lo)
            fc = fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = fun(d)
    return (c, fc) if fc >= fd else (d, fd)


# ---------------------------------------------------------------------------
# findings


def discrepancy_log(enabled: bool = True, cfg: QuadratureConfig | None = None) -> list[dict]:
    """Numerical evidence for the typesetting problems found in the source formulas.

    Each entry records its full inputs and the computed values so the
    numbers can be reproduced independently.
    """
    if not enabled:
        return []
    findings = []

    f = make_spec("x^2", (0.0, 1.0))
    s = Scenario(0.0, 1.0, 0.5, mu=1.0)
    lhs = bounds.lemma1_lhs(f, s, cfg)
    plus = bounds.lemma1_rhs(f, s, bounds.PAPER_PLUS, cfg)
    minus = bounds.lemma1_rhs(f, s, bounds.CORRECTED_MINUS, cfg)
    findings.append({
        "id": "lemma1_sign",
        "summary": "the identity holds only with a minus sign in front of the (b-x) term",
        "inputs": {"f": "x^2", **s.to_dict()},
        "lhs": lhs,
        "rhs_paper_plus": plus,
        "rhs_corrected_minus": minus,
        "expected_lhs": -1.0 / 12.0,
    })

    s4 = Scenario(0.0, 1.0, 0.5, mu=1.0, alpha=1.0, m=1.0, M=0.5, p=1.0, q=2.0)
    printed = bounds.printed_corollary4(s4)
    exact = bounds.rhs_corollary4(s4)
    findings.append({
        "id": "corollary4_form",
        "summary": "the printed bound uses '=' and omits the factor M^(1/q) that t2 at alpha=m=1 produces",
        "inputs": s4.to_dict(),
        "printed_value": printed,
        "value_from_t2": bounds.rhs_theorem2(s4),
        "corrected_value": exact,
        "ratio_printed_over_corrected": printed / exact,
        "k2_at_alpha_m_1": bounds.k2(1.0, 1.0, s4.M, s4.mu, s4.p),
    })

    s5 = Scenario(0.0, 1.0, 0.25, mu=1.0, alpha=0.5, m=0.5, M=0.5, p=1.0, q=2.0)
    hf = (s5.q - 1.0) / (2.0 * s5.q - s5.p - 1.0)
    with_k1 = hf ** ((s5.q - 1.0) / s5.q) * bounds.k1(s5.alpha, s5.m, s5.M) ** (1.0 / s5.q) * (
        ((s5.x - s5.a) ** 2 + (s5.b - s5.x) ** 2) / (s5.b - s5.a)
    )
    findings.append({
        "id": "corollary5_constant",
        "summary": "the displayed formulas of c5 and c6 name K1 while K3/K4 are defined beneath; K3/K4 are used",
        "inputs": s5.to_dict(),
        "value_with_k1": with_k1,
        "value_with_k3": bounds.rhs_corollary5(s5),
        "k1": bounds.k1(s5.alpha, s5.m, s5.M),
        "k3": bounds.k3(s5.alpha, s5.m, s5.M, s5.p),
    })
    return findings
