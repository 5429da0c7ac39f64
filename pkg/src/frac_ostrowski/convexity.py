"""Grid-based membership checks for generalized convexity classes.

Every checker evaluates the defining inequality on the product grid
x, y in [0, b_dom] and t in [0, 1] and reports the largest violation.
A passing report means "holds over the sampled grid", nothing more;
``samples_checked`` says how many triples that covers.

Log-convexity classes measure violation as log(LHS) - log(RHS); the
linear classes use LHS - RHS. Ties between equal worst violations are
resolved by the lexicographically smallest (x, y, t).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

DEFAULT_GRID = (33, 33, 33)
DEFAULT_TOL = 1e-9

CLASS_IDS = ("convex", "m_convex", "alpha_m_convex", "m_log_convex", "alpha_m_log_convex", "starshaped")


@dataclass(frozen=True)
class MembershipReport:
    class_id: str
    holds: bool
    worst_violation: float
    witness: Optional[tuple[float, float, float]]
    samples_checked: int
    alpha: float = 1.0
    m: float = 1.0
    b_dom: float = 1.0
    # f(0) <= 0, the extra condition of the class K_m^alpha(b); None if not requested
    zero_condition: Optional[bool] = None


def _grids(b_dom, grid):
    if not b_dom > 0:
        raise DomainError(f"b_dom must be > 0, got {b_dom}")
    nx, ny, nt = grid
    if min(nx, ny, nt) < 2:
        raise DomainError(f"every grid dimension needs at least 2 points, got {grid}")
    return np.linspace(0.0, b_dom, nx), np.linspace(0.0, b_dom, ny), np.linspace(0.0, 1.0, nt)


def _check_params(alpha, m):
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if not 0.0 < m <= 1.0:
        raise DomainError(f"m must lie in (0, 1], got {m}")


def _eval(g, pts):
    return np.broadcast_to(np.asarray(g(pts), dtype=float), pts.shape)


def _mixed_points(xs, ys, ts, m, b_dom):
    z = ts[None, None, :] * xs[:, None, None] + m * (1.0 - ts[None, None, :]) * ys[None, :, None]
    # t x + m (1-t) y <= max(x, y) <= b_dom because m <= 1; only roundoff can exceed it
    assert z.max() <= b_dom * (1.0 + 1e-12), "mixed point left the domain"
    return np.minimum(z, b_dom)


def _require_positive(vals, pts):
    bad = ~(vals > 0)
    if bad.any():
        where = float(np.ravel(pts)[np.argmax(np.ravel(bad))])
        raise DomainError(f"log-convexity check needs g > 0, but g({where!r}) = {np.ravel(vals)[np.argmax(np.ravel(bad))]!r}")


def _report(class_id, viol, xs, ys, ts, tol, alpha, m, b_dom, g, zero_flag):
    flat = int(np.argmax(viol))
    worst = max(float(viol.flat[flat]), 0.0)
    holds = worst <= tol
    witness = None
    if not holds:
        i, j, k = np.unravel_index(flat, viol.shape)
        witness = (float(xs[i]), float(ys[j]), float(ts[k]))
    zero_condition = None
    if zero_flag:
        zero_condition = bool(_eval(g, np.array([0.0]))[0] <= 0.0)
    return MembershipReport(class_id, holds, worst, witness, int(viol.size), alpha, m, b_dom, zero_condition)


def check_alpha_m_log_convex(
    g: Callable, b_dom: float, alpha: float, m: float,
    grid=DEFAULT_GRID, tol: float = DEFAULT_TOL, class_id: str = "alpha_m_log_convex",
) -> MembershipReport:
    """g(t x + m(1-t) y) <= g(x)**(t**alpha) * g(y)**(m (1 - t**alpha))."""
    _check_params(alpha, m)
    xs, ys, ts = _grids(b_dom, grid)
    z = _mixed_points(xs, ys, ts, m, b_dom)
    gx, gy, gz = _eval(g, xs), _eval(g, ys), _eval(g, z)
    _require_positive(gx, xs)
    _require_positive(gy, ys)
    _require_positive(gz, z)
    w = ts**alpha
    rhs = w[None, None, :] * np.log(gx)[:, None, None] + m * (1.0 - w[None, None, :]) * np.log(gy)[None, :, None]
    viol = np.log(gz) - rhs
    return _report(class_id, viol, xs, ys, ts, tol, alpha, m, b_dom, g, False)


def check_m_log_convex(g, b_dom, m, grid=DEFAULT_GRID, tol=DEFAULT_TOL) -> MembershipReport:
    """g(t x + m(1-t) y) <= g(x)**t * g(y)**(m (1-t)); the alpha = 1 case."""
    return check_alpha_m_log_convex(g, b_dom, 1.0, m, grid, tol, class_id="m_log_convex")


def check_alpha_m_convex(
    g, b_dom, alpha, m, grid=DEFAULT_GRID, tol=DEFAULT_TOL,
    class_id: str = "alpha_m_convex", zero_condition: bool = False,
) -> MembershipReport:
    """g(t x + m(1-t) y) <= t**alpha g(x) + m (1 - t**alpha) g(y)."""
    _check_params(alpha, m)
    xs, ys, ts = _grids(b_dom, grid)
    z = _mixed_points(xs, ys, ts, m, b_dom)
    gx, gy, gz = _eval(g, xs), _eval(g, ys), _eval(g, z)
    w = ts**alpha
    viol = gz - (w[None, None, :] * gx[:, None, None] + m * (1.0 - w[None, None, :]) * gy[None, :, None])
    return _report(class_id, viol, xs, ys, ts, tol, alpha, m, b_dom, g, zero_condition)


def check_m_convex(g, b_dom, m, grid=DEFAULT_GRID, tol=DEFAULT_TOL, zero_condition=False) -> MembershipReport:
    return check_alpha_m_convex(g, b_dom, 1.0, m, grid, tol, class_id="m_convex", zero_condition=zero_condition)


def check_convex(g, b_dom, grid=DEFAULT_GRID, tol=DEFAULT_TOL) -> MembershipReport:
    """Ordinary convexity, evaluated directly rather than through the m = 1 case."""
    xs, ys, ts = _grids(b_dom, grid)
    T = ts[None, None, :]
    X = xs[:, None, None]
    Y = ys[None, :, None]
    z = np.clip(T * X + (1.0 - T) * Y, 0.0, b_dom)
    viol = _eval(g, z) - (T * _eval(g, xs)[:, None, None] + (1.0 - T) * _eval(g, ys)[None, :, None])
    return _report("convex", viol, xs, ys, ts, tol, 1.0, 1.0, b_dom, g, False)


def check_starshaped(g, b_dom, grid=DEFAULT_GRID, tol=DEFAULT_TOL) -> MembershipReport:
    """g(t x) <= t g(x) on [0, b_dom]; y is unused and reported as 0 in witnesses."""
    nx, _, nt = grid
    xs, _, ts = _grids(b_dom, (nx, 2, nt))
    gx = _eval(g, xs)
    gtx = _eval(g, ts[None, :] * xs[:, None])
    viol = (gtx - ts[None, :] * gx[:, None])[:, None, :]
    return _report("starshaped", viol, xs, np.zeros(1), ts, tol, 1.0, 1.0, b_dom, g, False)
