"""Adaptive Gauss-Legendre quadrature with power-substitution for endpoint singularities.

Integrands are called with a 1-D ``numpy`` array of abscissae and must return
an array of the same length (a scalar is broadcast, so ``lambda t: 1.0`` works).
"""

from __future__ import annotations

import heapq
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import AccuracyWarning, DomainError, EvaluationError

Integrand = Callable[[np.ndarray], np.ndarray]

# hard cap on integrand evaluations per call
_MAX_EVALUATIONS = 2_000_000
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_depth: int = 50
    points_per_panel: int = 15

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol}")
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be > 0, got {self.abs_tol}")
        if self.max_depth < 1:
            raise DomainError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.points_per_panel < 2:
            raise DomainError(f"points_per_panel must be >= 2, got {self.points_per_panel}")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class IntegralResult:
    """Value of an integral plus the engine's error estimate.

    ``converged`` is False when the tolerance was not met (depth or
    evaluation budget exhausted); ``est_abs_error`` then holds the
    remaining estimated error rather than a guarantee.
    """

    value: float
    est_abs_error: float
    evaluations: int
    converged: bool = True

    def scaled(self, factor: float) -> "IntegralResult":
        return IntegralResult(
            self.value * factor, self.est_abs_error * abs(factor), self.evaluations, self.converged
        )


@lru_cache(maxsize=None)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _sample(f: Integrand, t: np.ndarray) -> np.ndarray:
    vals = np.asarray(f(t), dtype=float)
    if vals.shape != t.shape:
        vals = np.broadcast_to(vals, t.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        where = float(t[np.argmax(bad)])
        raise EvaluationError(f"integrand is not finite at t={where!r}", where=where)
    return vals


class _Panels:
    """Evaluates the two halves of a batch of panels with one integrand call."""

    def __init__(self, f: Integrand, n: int):
        self.f = f
        self.nodes, self.weights = _gauss_legendre(n)
        self.evaluations = 0

    def halves(self, lo: float, hi: float) -> tuple[float, float]:
        mid = 0.5 * (lo + hi)
        hw = 0.25 * (hi - lo)
        t = np.concatenate((lo + hw * (self.nodes + 1.0), mid + hw * (self.nodes + 1.0)))
        vals = _sample(self.f, t)
        self.evaluations += t.size
        n = self.nodes.size
        left = hw * float(np.dot(self.weights, vals[:n]))
        right = hw * float(np.dot(self.weights, vals[n:]))
        return left, right

    def whole(self, lo: float, hi: float) -> float:
        hw = 0.5 * (hi - lo)
        t = lo + hw * (self.nodes + 1.0)
        vals = _sample(self.f, t)
        self.evaluations += t.size
        return hw * float(np.dot(self.weights, vals))


def integrate(
    f: Integrand, lo: float, hi: float, cfg: QuadratureConfig | None = None
) -> IntegralResult:
    """Integrate f over [lo, hi] by adaptive bisection of Gauss-Legendre panels.

    Each panel carries a coarse estimate (one rule on the panel) and a fine
    estimate (the rule on both halves); their difference is the panel's
    error estimate. The worst panel is split until the summed estimate
    meets ``max(abs_tol, rel_tol * |value|)``. A panel at ``max_depth``
    is frozen; if frozen panels keep the total above tolerance, the
    result is returned with ``converged=False`` and an AccuracyWarning.
    An empty interval returns 0 with ``evaluations == 0``.
    """
    cfg = cfg or DEFAULT_CONFIG
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError(f"integration limits must be finite, got [{lo}, {hi}]")
    if lo > hi:
        raise DomainError(f"integration requires lo <= hi, got [{lo}, {hi}]")
    if lo == hi:
        return IntegralResult(0.0, 0.0, 0, True)

    rule = _Panels(f, cfg.points_per_panel)
    coarse = rule.whole(lo, hi)
    left, right = rule.halves(lo, hi)
    fine = left + right
    # heap entries: (-err, seq, lo, hi, depth, fine, left, right)
    seq = 0
    heap = [(-abs(fine - coarse), seq, lo, hi, 0, fine, left, right)]
    frozen_val = 0.0
    frozen_err = 0.0
    total = fine
    err_total = abs(fine - coarse)
    converged = True

    while heap:
        target = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if err_total <= target:
            break
        if frozen_err > target:
            # frozen panels alone exceed the budget; refining others cannot help
            converged = False
            break
        if rule.evaluations >= _MAX_EVALUATIONS:
            converged = False
            break
        neg_err, _, plo, phi, depth, pfine, pleft, pright = heapq.heappop(heap)
        perr = -neg_err
        # roundoff floor: the panel cannot be improved in double precision
        tiny = phi - plo <= 4.0 * np.spacing(max(abs(plo), abs(phi)))
        if depth >= cfg.max_depth or tiny or perr <= 64.0 * _EPS * abs(pfine):
            frozen_val += pfine
            frozen_err += perr
            continue
        pmid = 0.5 * (plo + phi)
        total -= pfine
        err_total -= perr
        for clo, chi, ccoarse in ((plo, pmid, pleft), (pmid, phi, pright)):
            cl, cr = rule.halves(clo, chi)
            cfine = cl + cr
            cerr = abs(cfine - ccoarse)
            seq += 1
            heapq.heappush(heap, (-cerr, seq, clo, chi, depth + 1, cfine, cl, cr))
            total += cfine
            err_total += cerr

    # recompute from the panel list to avoid drift in the running sums
    value = frozen_val + math.fsum(entry[5] for entry in heap)
    err = frozen_err + math.fsum(-entry[0] for entry in heap)
    if err > max(cfg.abs_tol, cfg.rel_tol * abs(value)) and (frozen_err > 0 or not converged):
        converged = False
    if not converged:
        warnings.warn(
            f"quadrature on [{lo}, {hi}] did not reach tolerance (est. error {err:.3g})",
            AccuracyWarning,
            stacklevel=2,
        )
    return IntegralResult(value, err, rule.evaluations, converged)


def integrate_power_singular(
    g: Integrand,
    exponent: float,
    lo: float,
    hi: float,
    singular_end: str,
    cfg: QuadratureConfig | None = None,
) -> IntegralResult:
    """Integrate g(t) * |t - c|**exponent over [lo, hi], c being the singular end.

    The substitution u = |t - c|**(exponent + 1) turns the weight into a
    constant, so the integrand handed to :func:`integrate` is
    g(c +/- u**(1/(exponent+1))) / (exponent + 1), bounded whenever g is.
    """
    exponent = float(exponent)
    if not exponent > -1.0:
        raise DomainError(f"exponent must be > -1 for an integrable singularity, got {exponent}")
    if exponent > 0.0:
        raise DomainError(f"exponent must lie in (-1, 0], got {exponent}")
    if singular_end not in ("lo", "hi"):
        raise DomainError(f"singular_end must be 'lo' or 'hi', got {singular_end!r}")
    lo = float(lo)
    hi = float(hi)
    if lo > hi:
        raise DomainError(f"integration requires lo <= hi, got [{lo}, {hi}]")
    if lo == hi:
        return IntegralResult(0.0, 0.0, 0, True)

    power = exponent + 1.0
    inv = 1.0 / power
    upper = (hi - lo) ** power
    if singular_end == "lo":
        def h(u):
            return g(lo + u**inv)
    else:
        def h(u):
            return g(hi - u**inv)
    res = integrate(h, 0.0, upper, cfg)
    return res.scaled(inv)
