"""Both sides of the fractional Montgomery identity and the Ostrowski-type bounds.

Theorem ids:

    classical  |f(x) - mean f| <= M/(b-a) * ((x-a)^2 + (b-x)^2)/2
    t1         (alpha,m)-log-convex |f'| <= M, bound with K1
    c1, c2, c3 t1 pinned at alpha=1; alpha=m=1; alpha=m=mu=1
    t2         (alpha,m)-log-convex |f'|^q <= M, Hoelder bound with K2
    c4, c5, c6 t2 pinned at alpha=m=1; mu=1 (K3); mu=p=1 (K4)

The constants K1..K4 are only defined for M in (0, 1]; evaluators that use
them raise DomainError outside that range unless ``exact=True`` is passed,
which replaces each constant by numerical quadrature of the integral it
bounds (an extension, flagged as such in reports).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from functools import lru_cache
from typing import Optional

import numpy as np

from . import convexity
from .errors import DomainError, EvaluationError
from .fracint import rl_left, rl_right
from .funclib import FunctionSpec, sup_abs_derivative
from .quadrature import IntegralResult, QuadratureConfig, integrate
from .specfun import gamma, lower_incomplete_gamma_scaled, upper_incomplete_gamma

SERIES_SWITCH = 1e-8
DEFAULT_VERDICT_TOL = 1e-8

PAPER_PLUS = "paper_plus"
CORRECTED_MINUS = "corrected_minus"


@dataclass(frozen=True)
class Scenario:
    """One parameter tuple (a, b, x, mu, alpha, m, M, p, q).

    M is only required to be positive here; the K-constants gate it to
    (0, 1] and the hypothesis audit reports M > 1.
    """

    a: float
    b: float
    x: float
    mu: float = 1.0
    alpha: float = 1.0
    m: float = 1.0
    M: float = 1.0
    p: float = 1.0
    q: float = 2.0

    def __post_init__(self):
        for name in ("a", "b", "x", "mu", "alpha", "m", "M", "p", "q"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"scenario field {name} must be a finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.a < 0:
            raise DomainError(f"a must be >= 0, got {self.a}")
        if not self.b > self.a:
            raise DomainError(f"need a < b, got a={self.a}, b={self.b}")
        if not self.a <= self.x <= self.b:
            raise DomainError(f"x must lie in [a, b] = [{self.a}, {self.b}], got {self.x}")
        if not self.mu > 0:
            raise DomainError(f"mu must be > 0, got {self.mu}")
        if not 0 < self.alpha <= 1:
            raise DomainError(f"alpha must lie in (0,1], got {self.alpha}")
        if not 0 < self.m <= 1:
            raise DomainError(f"m must lie in (0,1], got {self.m}")
        if not self.M > 0:
            raise DomainError(f"M must be > 0, got {self.M}")

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# geometry


def geometric_factor(s: Scenario) -> float:
    """((x-a)^(mu+1) + (b-x)^(mu+1)) / (b-a), the undivided factor of t2."""
    e = s.mu + 1.0
    return ((s.x - s.a) ** e + (s.b - s.x) ** e) / (s.b - s.a)


def _square_factor(s: Scenario) -> float:
    return ((s.x - s.a) ** 2 + (s.b - s.x) ** 2) / (s.b - s.a)


def holder_factor(mu: float, p: float, q: float) -> float:
    """Closed form of the integral over [0,1] of t^(mu (q-p)/(q-1)) dt."""
    _check_holder(p, q)
    return (q - 1.0) / (mu * (q - p) + q - 1.0)


def _check_holder(p, q):
    if not q > 1.0:
        raise DomainError(f"q must be > 1, got {q}")
    if not 0.0 <= p <= q:
        raise DomainError(f"p must lie in [0, q] = [0, {q}], got {p}")


# ---------------------------------------------------------------------------
# constants


def _gate(M: float):
    if not 0.0 < M <= 1.0:
        raise DomainError(f"M must lie in (0,1], got {M}")


def _check_am(alpha, m):
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0,1], got {alpha}")
    if not 0.0 < m <= 1.0:
        raise DomainError(f"m must lie in (0,1], got {m}")


def k1(alpha: float, m: float, M: float) -> float:
    """M^(2m) (M^(2 alpha (1-m)) - 1) / (2 alpha (1-m) ln M) for M < 1, and 1 at M = 1."""
    _gate(M)
    _check_am(alpha, m)
    if M == 1.0:
        return 1.0
    z = 2.0 * alpha * (1.0 - m) * math.log(M)
    base = M ** (2.0 * m)
    if abs(z) < SERIES_SWITCH:
        return base * (1.0 + z / 2.0 + z * z / 6.0)
    return base * math.expm1(z) / z


def _scaled_lower(s: float, z: float) -> float:
    """(Gamma(s) - Gamma(s, z)) / z^s."""
    if z < s + 1.0:
        return lower_incomplete_gamma_scaled(s, z)
    diff = gamma(s).value - upper_incomplete_gamma(s, z).value
    return diff * math.exp(-s * math.log(z))


def _k2_core(alpha: float, m: float, M: float, s: float) -> float:
    if M == 1.0:
        return 1.0 / s
    z = alpha * (m - 1.0) * math.log(M)  # both factors <= 0
    base = M**m
    if z < SERIES_SWITCH:
        return base * (1.0 / s - z / (s + 1.0) + z * z / (2.0 * (s + 2.0)))
    return base * _scaled_lower(s, z)


def k2(alpha: float, m: float, M: float, mu: float, p: float) -> float:
    """M^m (Gamma(mu p+1) - Gamma(mu p+1, z)) / z^(mu p+1), z = alpha (m-1) ln M; 1/(mu p+1) at M = 1."""
    _gate(M)
    _check_am(alpha, m)
    if not mu > 0:
        raise DomainError(f"mu must be > 0, got {mu}")
    if not p >= 0:
        raise DomainError(f"p must be >= 0, got {p}")
    return _k2_core(alpha, m, M, mu * p + 1.0)


def k3(alpha: float, m: float, M: float, p: float) -> float:
    """K2 at mu = 1."""
    return k2(alpha, m, M, 1.0, p)


def k4(alpha: float, m: float, M: float) -> float:
    """K2 at mu = p = 1, using Gamma(2, z) = (z + 1) exp(-z)."""
    _gate(M)
    _check_am(alpha, m)
    if M == 1.0:
        return 0.5
    z = alpha * (m - 1.0) * math.log(M)
    base = M**m
    if z < SERIES_SWITCH:
        return base * (0.5 - z / 3.0 + z * z / 8.0)
    if z >= 0.25:
        lower = 1.0 - (z + 1.0) * math.exp(-z)
    else:
        # 1 - (1+z) e^-z = sum_{n>=2} (-1)^n (n-1) z^n / n!, free of cancellation here
        lower = 0.0
        term = z * z / 2.0
        n = 2
        while True:
            piece = (n - 1) * term
            lower += piece if n % 2 == 0 else -piece
            if piece < 1e-18 * lower:
                break
            n += 1
            term *= z / n
    return base * lower / (z * z)


def k1_exact(alpha: float, m: float, M: float, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """Integral over [0,1] of M^(2(m + t^alpha (1-m))) dt, any M > 0."""
    _check_am(alpha, m)
    return integrate(lambda t: M ** (2.0 * (m + t**alpha * (1.0 - m))), 0.0, 1.0, cfg)


def k2_exact(alpha: float, m: float, M: float, mu: float, p: float, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """Integral over [0,1] of t^(mu p) M^(m + t^alpha (1-m)) dt, any M > 0."""
    _check_am(alpha, m)
    return integrate(lambda t: t ** (mu * p) * M ** (m + t**alpha * (1.0 - m)), 0.0, 1.0, cfg)


# ---------------------------------------------------------------------------
# right-hand sides


def rhs_theorem1(s: Scenario, exact: bool = False, cfg: QuadratureConfig | None = None) -> float:
    K = k1_exact(s.alpha, s.m, s.M, cfg).value if exact else k1(s.alpha, s.m, s.M)
    return (1.0 / (2.0 * s.mu + 1.0) + K) * geometric_factor(s) / 2.0


def _c1_constant(m: float, M: float) -> float:
    # (M^2 - M^(2m)) / (2 ln M - 2m ln M), rewritten as M^(2m) expm1(w)/w
    _gate(M)
    if not 0.0 < m <= 1.0:
        raise DomainError(f"m must lie in (0,1], got {m}")
    if M == 1.0:
        return 1.0
    w = 2.0 * (1.0 - m) * math.log(M)
    if abs(w) < SERIES_SWITCH:
        return M ** (2.0 * m) * (1.0 + w / 2.0 + w * w / 6.0)
    return M ** (2.0 * m) * math.expm1(w) / w


def rhs_corollary1(s: Scenario) -> float:
    return (1.0 / (2.0 * s.mu + 1.0) + _c1_constant(s.m, s.M)) * geometric_factor(s) / 2.0


def rhs_corollary2(s: Scenario) -> float:
    return (1.0 / (2.0 * s.mu + 1.0) + s.M**2) * geometric_factor(s) / 2.0


def rhs_corollary3(s: Scenario) -> float:
    return (1.0 / 3.0 + s.M**2) * _square_factor(s) / 2.0


def rhs_theorem2(s: Scenario, exact: bool = False, cfg: QuadratureConfig | None = None) -> float:
    hf = holder_factor(s.mu, s.p, s.q)
    if exact:
        K = k2_exact(s.alpha, s.m, s.M, s.mu, s.p, cfg).value
    else:
        K = k2(s.alpha, s.m, s.M, s.mu, s.p)
    return hf ** ((s.q - 1.0) / s.q) * K ** (1.0 / s.q) * geometric_factor(s)


def rhs_corollary4(s: Scenario) -> float:
    """t2 at alpha = m = 1 with the constant M/(mu p + 1)."""
    _gate(s.M)
    hf = holder_factor(s.mu, s.p, s.q)
    return hf ** ((s.q - 1.0) / s.q) * (s.M / (s.mu * s.p + 1.0)) ** (1.0 / s.q) * geometric_factor(s)


def printed_corollary4(s: Scenario) -> float:
    """The c4 bound in its commonly quoted form: no M factor and squared distances.

    Kept for the discrepancy log only; it is not a valid bound for M < 1.
    """
    hf = holder_factor(s.mu, s.p, s.q)
    return hf ** ((s.q - 1.0) / s.q) * (1.0 / (s.mu * s.p + 1.0)) ** (1.0 / s.q) * _square_factor(s)


def rhs_corollary5(s: Scenario) -> float:
    _check_holder(s.p, s.q)
    hf = (s.q - 1.0) / (2.0 * s.q - s.p - 1.0)
    return hf ** ((s.q - 1.0) / s.q) * k3(s.alpha, s.m, s.M, s.p) ** (1.0 / s.q) * _square_factor(s)


def rhs_corollary6(s: Scenario) -> float:
    _check_holder(1.0, s.q)
    return 0.5 ** ((s.q - 1.0) / s.q) * k4(s.alpha, s.m, s.M) ** (1.0 / s.q) * _square_factor(s)


def rhs_classical_ostrowski(s: Scenario, M: float | None = None) -> float:
    M = s.M if M is None else M
    return M / (s.b - s.a) * ((s.x - s.a) ** 2 + (s.b - s.x) ** 2) / 2.0


# ---------------------------------------------------------------------------
# left-hand sides


def _sum_results(results, value) -> IntegralResult:
    results = [r for r in results if r is not None]
    return IntegralResult(
        value,
        sum(r.est_abs_error for r in results),
        max(1, sum(r.evaluations for r in results)),
        all(r.converged for r in results),
    )


def lemma1_lhs_detail(f: FunctionSpec, s: Scenario, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """Signed ((x-a)^mu + (b-x)^mu)/(b-a) f(x) - Gamma(mu+1)/(b-a) [J_{x-} f(a) + J_{x+} f(b)].

    J_{x-}^mu f(a) integrates (t-a)^(mu-1) f(t) over [a, x]; J_{x+}^mu f(b)
    integrates (b-t)^(mu-1) f(t) over [x, b]. A term whose prefactor
    vanishes (x = a or x = b) is skipped.
    """
    width = s.b - s.a
    fx = float(f.value(np.array([s.x]))[0])
    head = ((s.x - s.a) ** s.mu + (s.b - s.x) ** s.mu) / width * fx
    left = rl_right(f, s.x, s.mu, s.a, cfg) if s.x > s.a else None
    right = rl_left(f, s.x, s.mu, s.b, cfg) if s.x < s.b else None
    j = (left.value if left else 0.0) + (right.value if right else 0.0)
    scale = gamma(s.mu + 1.0).value / width
    out = _sum_results([left, right], head - scale * j)
    return replace(out, est_abs_error=out.est_abs_error * scale)


def lemma1_lhs(f: FunctionSpec, s: Scenario, cfg: QuadratureConfig | None = None) -> float:
    return lemma1_lhs_detail(f, s, cfg).value


def _kernel_integrals(f: FunctionSpec, s: Scenario, cfg, transform):
    mu = s.mu

    def piece(end):
        return integrate(lambda t: t**mu * transform(f.derivative(t * s.x + (1.0 - t) * end)), 0.0, 1.0, cfg)

    A = piece(s.a) if s.x > s.a else None
    B = piece(s.b) if s.x < s.b else None
    wa = (s.x - s.a) ** (mu + 1.0) / (s.b - s.a)
    wb = (s.b - s.x) ** (mu + 1.0) / (s.b - s.a)
    return A, B, wa, wb


def lemma1_rhs_detail(f: FunctionSpec, s: Scenario, sign_convention: str = CORRECTED_MINUS, cfg=None) -> IntegralResult:
    if sign_convention not in (PAPER_PLUS, CORRECTED_MINUS):
        raise DomainError(f"unknown sign convention {sign_convention!r}")
    A, B, wa, wb = _kernel_integrals(f, s, cfg, lambda v: v)
    sign = 1.0 if sign_convention == PAPER_PLUS else -1.0
    value = (wa * A.value if A else 0.0) + sign * (wb * B.value if B else 0.0)
    return _sum_results([A, B], value)


def lemma1_rhs(f: FunctionSpec, s: Scenario, sign_convention: str = CORRECTED_MINUS, cfg=None) -> float:
    """(x-a)^(mu+1)/(b-a) int t^mu f'(tx+(1-t)a) dt +/- (b-x)^(mu+1)/(b-a) int t^mu f'(tx+(1-t)b) dt.

    ``corrected_minus`` (default) subtracts the second term, which is the
    form that matches the left-hand side; ``paper_plus`` adds it.
    """
    return lemma1_rhs_detail(f, s, sign_convention, cfg).value


def triangle_bound(f: FunctionSpec, s: Scenario, cfg=None) -> float:
    """Same weights with |f'| inside both integrals; bounds |lemma1_lhs| under either sign."""
    A, B, wa, wb = _kernel_integrals(f, s, cfg, np.abs)
    return (wa * A.value if A else 0.0) + (wb * B.value if B else 0.0)


def mean_deviation_detail(f: FunctionSpec, s: Scenario, cfg=None) -> IntegralResult:
    """Signed f(x) - (1/(b-a)) * integral of f over [a, b]."""
    res = integrate(f.value, s.a, s.b, cfg)
    fx = float(f.value(np.array([s.x]))[0])
    width = s.b - s.a
    return IntegralResult(fx - res.value / width, res.est_abs_error / width, res.evaluations, res.converged)


# ---------------------------------------------------------------------------
# theorem registry


@dataclass(frozen=True)
class TheoremInfo:
    theorem_id: str
    family: str  # classical, t1 or t2
    pins: tuple = ()  # (name, value) pairs forced onto the scenario
    uses_k: bool = True
    title: str = ""

    @property
    def mean_lhs(self) -> bool:
        """True when mu is pinned to 1 so the left side is |f(x) - mean f|."""
        return self.family == "classical" or ("mu", 1.0) in self.pins


THEOREMS = {
    "classical": TheoremInfo("classical", "classical", (), False, "classical Ostrowski inequality"),
    "t1": TheoremInfo("t1", "t1", (), True, "(alpha,m)-log-convex |f'|, constant K1"),
    "c1": TheoremInfo("c1", "t1", (("alpha", 1.0),), True, "m-log-convex |f'|"),
    "c2": TheoremInfo("c2", "t1", (("alpha", 1.0), ("m", 1.0)), False, "log-convex |f'|"),
    "c3": TheoremInfo("c3", "t1", (("alpha", 1.0), ("m", 1.0), ("mu", 1.0)), False, "log-convex |f'|, mu = 1"),
    "t2": TheoremInfo("t2", "t2", (), True, "(alpha,m)-log-convex |f'|^q, constant K2"),
    "c4": TheoremInfo("c4", "t2", (("alpha", 1.0), ("m", 1.0)), True, "log-convex |f'|^q"),
    "c5": TheoremInfo("c5", "t2", (("mu", 1.0),), True, "(alpha,m)-log-convex |f'|^q, mu = 1, constant K3"),
    "c6": TheoremInfo("c6", "t2", (("mu", 1.0), ("p", 1.0)), True, "(alpha,m)-log-convex |f'|^q, mu = p = 1, constant K4"),
}


def theorem_info(theorem_id: str) -> TheoremInfo:
    try:
        return THEOREMS[theorem_id]
    except KeyError:
        raise DomainError(f"unknown theorem id {theorem_id!r}; choose from {', '.join(THEOREMS)}") from None


def pin(theorem_id: str, s: Scenario) -> Scenario:
    info = theorem_info(theorem_id)
    return replace(s, **dict(info.pins)) if info.pins else s


def rhs(theorem_id: str, s: Scenario, exact: bool = False, cfg: QuadratureConfig | None = None) -> float:
    """Right-hand side for ``theorem_id`` after pinning its fixed parameters.

    With ``exact=True`` the corollaries are evaluated through their parent
    theorem (t1 or t2) with numerically integrated constants.
    """
    info = theorem_info(theorem_id)
    s = pin(theorem_id, s)
    if info.family == "classical":
        return rhs_classical_ostrowski(s)
    if exact:
        return rhs_theorem1(s, True, cfg) if info.family == "t1" else rhs_theorem2(s, True, cfg)
    return _RHS[theorem_id](s)


_RHS = {
    "t1": rhs_theorem1,
    "c1": rhs_corollary1,
    "c2": rhs_corollary2,
    "c3": rhs_corollary3,
    "t2": rhs_theorem2,
    "c4": rhs_corollary4,
    "c5": rhs_corollary5,
    "c6": rhs_corollary6,
}


@lru_cache(maxsize=8192)
def _lhs_cached(mean: bool, f: FunctionSpec, a, b, x, mu, cfg) -> IntegralResult:
    s = Scenario(a, b, x, mu)
    return mean_deviation_detail(f, s, cfg) if mean else lemma1_lhs_detail(f, s, cfg)


def lhs_detail(theorem_id: str, f: FunctionSpec, s: Scenario, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """Signed left-hand side (before the absolute value) for a theorem id."""
    info = theorem_info(theorem_id)
    s = pin(theorem_id, s)
    return _lhs_cached(info.mean_lhs, f, s.a, s.b, s.x, s.mu, cfg)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class AuditItem:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class BoundReport:
    theorem_id: str
    function: str
    scenario: Scenario
    lhs: float
    rhs: float
    margin: float
    holds: bool
    hypothesis_audit: tuple = ()
    quadrature_flags: tuple = ()
    signed_lhs: float = float("nan")
    identity_rhs: Optional[float] = None
    sign_convention: Optional[str] = None
    extension: bool = False
    error: Optional[str] = None

    @property
    def hypotheses_ok(self) -> bool:
        return all(item.passed for item in self.hypothesis_audit)

    def to_dict(self) -> dict:
        d = {
            "theorem_id": self.theorem_id,
            "function": self.function,
            "scenario": self.scenario.to_dict() if self.scenario is not None else None,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "holds": self.holds,
            "hypotheses_ok": self.hypotheses_ok,
            "hypothesis_audit": [asdict(item) for item in self.hypothesis_audit],
            "quadrature_flags": list(self.quadrature_flags),
            "signed_lhs": self.signed_lhs,
            "identity_rhs": self.identity_rhs,
            "sign_convention": self.sign_convention,
            "extension": "exact-integral constants" if self.extension else None,
            "error": self.error,
        }
        return d


@dataclass(frozen=True)
class AuditSettings:
    grid: tuple = convexity.DEFAULT_GRID
    tol: float = convexity.DEFAULT_TOL
    sup_grid_n: int = 1001


DEFAULT_AUDIT = AuditSettings()


@lru_cache(maxsize=4096)
def _membership(f: FunctionSpec, alpha, m, q, b_dom, grid, tol) -> AuditItem:
    cls = "m_log_convex" if alpha == 1.0 else "alpha_m_log_convex"
    power = "|f'|" if q == 1.0 else f"|f'|^{q:g}"
    name = f"{power} {cls}(alpha={alpha:g}, m={m:g}) on [0, {b_dom:g}]"

    def g(t):
        return np.abs(f.derivative(t)) ** q

    try:
        if alpha == 1.0:
            rep = convexity.check_m_log_convex(g, b_dom, m, grid, tol)
        else:
            rep = convexity.check_alpha_m_log_convex(g, b_dom, alpha, m, grid, tol)
    except (DomainError, EvaluationError) as exc:
        return AuditItem(name, False, str(exc))
    if rep.holds:
        return AuditItem(name, True, f"holds over {rep.samples_checked} sampled triples")
    x, y, t = rep.witness
    return AuditItem(name, False, f"violation {rep.worst_violation:.3g} (log scale) at x={x:g}, y={y:g}, t={t:g}")


@lru_cache(maxsize=4096)
def _sup_item(f: FunctionSpec, lo, hi, q, M, n) -> AuditItem:
    power = "|f'|" if q == 1.0 else f"|f'|^{q:g}"
    name = f"sup {power} <= M on [{lo:g}, {hi:g}]"
    try:
        sup = sup_abs_derivative(f, (lo, hi), q, n)
    except (DomainError, EvaluationError) as exc:
        return AuditItem(name, False, str(exc))
    return AuditItem(name, sup <= M * (1.0 + 1e-12), f"grid sup {sup:.12g} vs M={M:.12g}")


@lru_cache(maxsize=4096)
def _positive_item(f: FunctionSpec, lo, hi, n) -> AuditItem:
    name = f"f > 0 on [{lo:g}, {hi:g}]"
    try:
        fmin = float(np.min(f.value(np.linspace(lo, hi, n))))
    except (DomainError, EvaluationError) as exc:
        return AuditItem(name, False, str(exc))
    return AuditItem(name, fmin > 0.0, f"grid min {fmin:.12g}")


def audit(theorem_id: str, f: FunctionSpec, s: Scenario, settings: AuditSettings = DEFAULT_AUDIT) -> tuple:
    """Check the theorem's hypotheses for f on the pinned scenario.

    Class membership and the derivative bound are checked on [0, b/m],
    which contains every point the proof evaluates |f'| at (x, a/m, b/m).
    """
    info = theorem_info(theorem_id)
    s = pin(theorem_id, s)
    if info.family == "classical":
        return (_sup_item(f, s.a, s.b, 1.0, s.M, settings.sup_grid_n),)
    q = 1.0 if info.family == "t1" else s.q
    hi = s.b / s.m
    items = [AuditItem("M in (0,1]", 0.0 < s.M <= 1.0, f"M={s.M:.12g}")]
    if info.family == "t2":
        ok = s.q > 1.0 and 0.0 <= s.p <= s.q
        items.append(AuditItem("q > 1 and 0 <= p <= q", ok, f"p={s.p:g}, q={s.q:g}"))
    items.append(_positive_item(f, 0.0, hi, settings.sup_grid_n))
    items.append(_sup_item(f, 0.0, hi, q, s.M, settings.sup_grid_n))
    items.append(_membership(f, s.alpha, s.m, q, hi, tuple(settings.grid), settings.tol))
    return tuple(items)


def verify(
    theorem_id: str,
    f: FunctionSpec,
    s: Scenario,
    cfg: QuadratureConfig | None = None,
    *,
    verdict_tol: float = DEFAULT_VERDICT_TOL,
    exact: bool = False,
    audit_settings: AuditSettings = DEFAULT_AUDIT,
    sign_convention: Optional[str] = None,
) -> BoundReport:
    """Evaluate both sides of one inequality and audit its hypotheses.

    A failed hypothesis does not stop the evaluation; it is recorded so
    bounds can be probed outside their assumptions. Domain errors of the
    right-hand side (for instance M > 1 where K1..K4 are needed) propagate.
    """
    info = theorem_info(theorem_id)
    s = pin(theorem_id, s)
    right = rhs(theorem_id, s, exact, cfg)
    left = lhs_detail(theorem_id, f, s, cfg)
    flags = []
    if not left.converged:
        flags.append(f"lhs quadrature not converged (est. error {left.est_abs_error:.3g})")
    identity = None
    if sign_convention is not None and not info.mean_lhs:
        ident = lemma1_rhs_detail(f, s, sign_convention, cfg)
        identity = ident.value
        if not ident.converged:
            flags.append("identity quadrature not converged")
    lhs_val = abs(left.value)
    margin = right - lhs_val
    return BoundReport(
        theorem_id=theorem_id,
        function=f.descriptor(),
        scenario=s,
        lhs=lhs_val,
        rhs=right,
        margin=margin,
        holds=margin >= -verdict_tol,
        hypothesis_audit=audit(theorem_id, f, s, audit_settings),
        quadrature_flags=tuple(flags),
        signed_lhs=left.value,
        identity_rhs=identity,
        sign_convention=sign_convention if identity is not None else None,
        extension=exact and info.family != "classical",
    )
