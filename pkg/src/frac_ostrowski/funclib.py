"""Built-in function families and the FunctionSpec wrapper used by every evaluator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import exprlang
from .errors import DomainError, EvaluationError


@dataclass(frozen=True)
class ExpDecayPrime:
    """f(x) = 1 + M/lambda - (M/lambda) exp(-lambda x), so f'(x) = M exp(-lambda x)."""

    M: float
    lam: float = 1.0
    name = "expdecay"

    def __post_init__(self):
        if not 0.0 < self.M <= 1.0:
            raise DomainError(f"expdecay needs M in (0, 1], got {self.M}")
        if not self.lam > 0.0:
            raise DomainError(f"expdecay needs lambda > 0, got {self.lam}")

    def value(self, t):
        # 1 + c (1 - e^{-lam t}) written with expm1 so f(0) = 1 exactly
        c = self.M / self.lam
        return 1.0 - c * np.expm1(-self.lam * np.asarray(t, dtype=float))

    def derivative(self, t):
        return self.M * np.exp(-self.lam * np.asarray(t, dtype=float))

    def descriptor(self) -> str:
        return f"expdecay:M={self.M!r},lambda={self.lam!r}"


@dataclass(frozen=True)
class LinearScaled:
    """f(x) = M x + 1."""

    M: float
    name = "linear"

    def __post_init__(self):
        if not 0.0 < self.M <= 1.0:
            raise DomainError(f"linear needs M in (0, 1], got {self.M}")

    def value(self, t):
        return self.M * np.asarray(t, dtype=float) + 1.0

    def derivative(self, t):
        return np.full(np.shape(t), self.M, dtype=float)

    def descriptor(self) -> str:
        return f"linear:M={self.M!r}"


@dataclass(frozen=True)
class Quadratic:
    """f(x) = x**2; for identity checks only, no class membership is claimed."""

    name = "quadratic"

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return t * t

    def derivative(self, t):
        return 2.0 * np.asarray(t, dtype=float)

    def descriptor(self) -> str:
        return "quadratic"


BuiltinFamily = Union[ExpDecayPrime, LinearScaled, Quadratic]

_FAMILIES = {
    "expdecay": (ExpDecayPrime, {"M": "M", "lambda": "lam", "lam": "lam"}),
    "linear": (LinearScaled, {"M": "M"}),
    "quadratic": (Quadratic, {}),
}


def family_names() -> list[str]:
    return sorted(_FAMILIES)


def family_needs_M(name: str) -> bool:
    return "M" in _FAMILIES[name][1]


def parse_family(text: str, **defaults) -> BuiltinFamily:
    """Build a family from ``name:key=value,...`` (e.g. ``expdecay:M=0.8,lambda=1``).

    ``defaults`` fill parameters absent from the text; the sweep harness uses
    this to tie a family's M to the scenario's M.
    """
    name, _, params = text.strip().partition(":")
    name = name.strip().lower()
    if name not in _FAMILIES:
        raise DomainError(f"unknown family {name!r}; choose from {', '.join(family_names())}")
    cls, keymap = _FAMILIES[name]
    kwargs = {}
    for key, val in defaults.items():
        if key in keymap.values():
            kwargs[key] = float(val)
    for item in filter(None, (p.strip() for p in params.split(","))):
        key, eq, val = item.partition("=")
        key = key.strip()
        if not eq or key not in keymap:
            raise DomainError(f"bad parameter {item!r} for family {name!r}")
        try:
            kwargs[keymap[key]] = float(val)
        except ValueError:
            raise DomainError(f"parameter {key!r} of {name!r} is not a number: {val!r}") from None
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise DomainError(f"family {name!r} is missing a parameter: {exc}") from None


@dataclass(frozen=True)
class FunctionSpec:
    """A differentiable scalar function on [0, inf) with exact derivative access.

    ``source`` is either a builtin family or a parsed expression tree.
    ``value`` and ``derivative`` accept scalars or numpy arrays.
    """

    source: object
    domain_hint: tuple[float, float] = (0.0, 10.0)
    label: str = ""

    @property
    def is_expression(self) -> bool:
        return not hasattr(self.source, "derivative")

    def value(self, t):
        if self.is_expression:
            return exprlang.eval_dual(self.source, t).primal
        return self.source.value(t)

    def derivative(self, t):
        if self.is_expression:
            return exprlang.eval_dual(self.source, t).tangent
        return self.source.derivative(t)

    def descriptor(self) -> str:
        if self.label:
            return self.label
        if self.is_expression:
            return "expr:" + exprlang.to_text(self.source)
        return self.source.descriptor()

    @property
    def derivative_bound(self) -> float | None:
        """Declared sup |f'| for families that have one."""
        return getattr(self.source, "M", None)


def make_spec(source, domain_hint: tuple[float, float] = (0.0, 10.0), label: str = "") -> FunctionSpec:
    """Wrap a family instance, an expression tree or expression text.

    Expressions are probed at the midpoint of ``domain_hint`` so that a
    malformed or out-of-domain formula fails here rather than deep inside
    a quadrature.
    """
    lo, hi = (float(v) for v in domain_hint)
    if not (0.0 <= lo < hi and math.isfinite(hi)):
        raise DomainError(f"domain_hint must satisfy 0 <= lo < hi < inf, got {domain_hint}")
    if isinstance(source, str):
        source = exprlang.parse(source)
    spec = FunctionSpec(source, (lo, hi), label)
    if spec.is_expression:
        mid = 0.5 * (lo + hi)
        try:
            exprlang.eval_dual(source, mid)
        except EvaluationError as exc:
            raise DomainError(f"expression fails probe evaluation at x={mid}: {exc}") from exc
    return spec


def spec_from_descriptor(text: str, domain_hint=(0.0, 10.0), **defaults) -> FunctionSpec:
    """``expr:<text>`` for expressions, otherwise a family descriptor."""
    text = text.strip()
    if text.startswith("expr:"):
        return make_spec(text[5:], domain_hint)
    return make_spec(parse_family(text, **defaults), domain_hint)


def sup_abs_derivative(spec: FunctionSpec, interval: tuple[float, float], q: float = 1.0, grid_n: int = 1001) -> float:
    """max |f'(t)|**q over a uniform grid of ``grid_n`` points.

    A grid maximum is a lower estimate of the true supremum; the audit
    treats it as a falsifier only.
    """
    if grid_n < 2:
        raise DomainError(f"grid_n must be >= 2, got {grid_n}")
    if q < 1.0:
        raise DomainError(f"q must be >= 1, got {q}")
    lo, hi = interval
    t = np.linspace(lo, hi, grid_n)
    return float(np.max(np.abs(spec.derivative(t)) ** q))
