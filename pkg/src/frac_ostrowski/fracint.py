"""Left- and right-sided Riemann-Liouville fractional integrals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import IntegralResult, QuadratureConfig, integrate, integrate_power_singular
from .specfun import gamma


@dataclass(frozen=True)
class FracOrder:
    """Order of integration; 0 is the identity."""

    mu: float

    def __post_init__(self):
        if not self.mu >= 0.0:
            raise DomainError(f"fractional order must be >= 0, got {self.mu}")


def _order(mu) -> float:
    return mu.mu if isinstance(mu, FracOrder) else FracOrder(float(mu)).mu


def _callable(f):
    return f.value if hasattr(f, "value") and hasattr(f, "derivative") else f


def _identity(f, x) -> IntegralResult:
    return IntegralResult(float(np.asarray(f(np.array([x])))[0]), 0.0, 1, True)


def rl_left(f, a: float, mu, x: float, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """(1/Gamma(mu)) * integral over [a, x] of (x - t)**(mu-1) f(t) dt, for x > a."""
    mu = _order(mu)
    g = _callable(f)
    if mu == 0.0:
        return _identity(g, x)
    if not x > a:
        raise DomainError(f"left-sided integral needs x > a, got a={a}, x={x}")
    norm = 1.0 / gamma(mu).value
    if mu < 1.0:
        res = integrate_power_singular(g, mu - 1.0, a, x, "hi", cfg)
    elif mu == 1.0:
        res = integrate(g, a, x, cfg)
    else:
        res = integrate(lambda t: (x - t) ** (mu - 1.0) * g(t), a, x, cfg)
    return res.scaled(norm)


def rl_right(f, b: float, mu, x: float, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """(1/Gamma(mu)) * integral over [x, b] of (t - x)**(mu-1) f(t) dt, for x < b."""
    mu = _order(mu)
    g = _callable(f)
    if mu == 0.0:
        return _identity(g, x)
    if not x < b:
        raise DomainError(f"right-sided integral needs x < b, got x={x}, b={b}")
    norm = 1.0 / gamma(mu).value
    if mu < 1.0:
        res = integrate_power_singular(g, mu - 1.0, x, b, "lo", cfg)
    elif mu == 1.0:
        res = integrate(g, x, b, cfg)
    else:
        res = integrate(lambda t: (t - x) ** (mu - 1.0) * g(t), x, b, cfg)
    return res.scaled(norm)
