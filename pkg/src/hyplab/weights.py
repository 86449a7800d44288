"""Scalar symbol weights on the phase space and their growth orders.

Three weights, evaluated with <xi> = sqrt(1 + xi^2):

* W1(xi)    = 1 / eta(1/<xi>)                               (time independent)
* W2(t, xi) = <xi>^{-1} * ( -d/dt 1/eta^{-1}(t - 1/<xi>) )
* W3(t, xi) = rho(1/<xi>) * ( -d/dt 1/rho(eta^{-1}(t - 1/<xi>)) )

W2 and W3 are defined for t >= eta(1/<xi>) (their inner inverse needs
t - 1/<xi> in the range of eta).  Membership of a weight in a symbol class of
order m0 is operationalized as a least-squares growth exponent of
log(weight) against log<xi> over the top two decades of a frequency grid;
the resulting m0 feeds the Zygmund-index bound max(1+eps, 2*m0/(2-m0)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .moduli import AuxiliaryFunction, decay_rate, decay_rate_pair, fd_derivative
from .zones import ZoneParams, validate_zone, zone_boundary

__all__ = [
    "SymbolWeight",
    "ClassificationReport",
    "jbracket",
    "weight_w1",
    "weight_w2",
    "weight_w3",
    "weight_w2_fd",
    "weight_w3_fd",
    "fit_loglog_slope",
    "estimate_order",
    "zygmund_index_bound",
    "classify",
]


def jbracket(xi):
    """Japanese bracket <xi> = sqrt(1 + xi^2)."""
    return np.hypot(1.0, np.asarray(xi, dtype=float))


def _shifted_arg(eta: AuxiliaryFunction, xi_abs, t):
    """t - 1/<xi> with the side condition t >= eta(1/<xi>) enforced."""
    jb = jbracket(xi_abs)
    side = np.asarray(eta.value(1.0 / jb))
    t = np.asarray(t, dtype=float)
    if np.any(t < side * (1.0 - 1e-12)):
        raise ValueError("weight undefined: t below eta(1/<xi>)")
    u = t - 1.0 / jb
    if np.any(u <= 0.0):
        raise ValueError("weight undefined: t - 1/<xi> not positive")
    if np.any(u > eta.range_max * (1.0 + 1e-12)):
        raise ValueError("weight undefined: t - 1/<xi> beyond eta(r0); enlarge r0 or shrink T")
    return jb, u


def weight_w1(eta: AuxiliaryFunction, xi_abs):
    return 1.0 / np.asarray(eta.value(1.0 / jbracket(xi_abs)))


def weight_w2(eta: AuxiliaryFunction, xi_abs, t):
    jb, u = _shifted_arg(eta, xi_abs, t)
    return decay_rate(eta, u) / jb


def weight_w3(eta: AuxiliaryFunction, rho: AuxiliaryFunction, xi_abs, t):
    jb, u = _shifted_arg(eta, xi_abs, t)
    return np.asarray(rho.value(1.0 / jb)) * decay_rate_pair(eta, rho, u)


def weight_w2_fd(eta, xi_abs, t, rel_step=2e-4):
    """W2 via finite differences of the inner map; cross-check path."""
    jb = jbracket(xi_abs)
    return fd_derivative(lambda s: -1.0 / np.asarray(eta.inverse(s - 1.0 / jb)), t, rel_step) / jb


def weight_w3_fd(eta, rho, xi_abs, t, rel_step=2e-4):
    jb = jbracket(xi_abs)
    inner = lambda s: -1.0 / np.asarray(rho.value(eta.inverse(s - 1.0 / jb)))
    return np.asarray(rho.value(1.0 / jb)) * fd_derivative(inner, t, rel_step)


@dataclass(frozen=True)
class SymbolWeight:
    """One of the three weights, bound to its auxiliary functions and zones."""

    kind: str  # "w1" | "w2" | "w3"
    eta: AuxiliaryFunction
    zone: ZoneParams
    rho: Optional[AuxiliaryFunction] = None

    def __post_init__(self):
        if self.kind not in ("w1", "w2", "w3"):
            raise ValueError("kind must be 'w1', 'w2' or 'w3'")
        if self.kind == "w3" and self.rho is None:
            raise ValueError("w3 needs a rho function")
        validate_zone(self.eta, self.zone)

    def value(self, xi_abs, t=None):
        if self.kind == "w1":
            return weight_w1(self.eta, xi_abs)
        if t is None:
            raise ValueError("time-dependent weight needs t")
        if self.kind == "w2":
            return weight_w2(self.eta, xi_abs, t)
        return weight_w3(self.eta, self.rho, xi_abs, t)


def fit_loglog_slope(x, y):
    """Least-squares slope of log y against log x, with its standard error."""
    x = np.log(np.asarray(x, dtype=float))
    y = np.log(np.asarray(y, dtype=float))
    if x.size < 2:
        raise ValueError("need at least two points for a slope")
    xm = x - x.mean()
    sxx = float(xm @ xm)
    slope = float(xm @ (y - y.mean())) / sxx
    resid = y - y.mean() - slope * xm
    dof = max(x.size - 2, 1)
    stderr = float(np.sqrt((resid @ resid) / dof / sxx))
    return slope, stderr


def _top_window(values, top_decades):
    hi = values[-1]
    return values >= hi / 10.0**top_decades * (1.0 - 1e-9)


def estimate_order(w: SymbolWeight, xi_grid, T=None, t_samples=48) -> float:
    """Fitted growth order of a weight over the top two decades of the grid.

    For the time-dependent weights the value at each frequency is the sup
    over a log-spaced t-grid from max(t_xi, eta(1/<xi>) + 2/<xi>) up to T.
    The fitted slope is clamped below at zero.
    """
    xi = np.asarray(xi_grid, dtype=float)
    if np.any(np.diff(xi) <= 0.0):
        raise ValueError("frequency grid must be strictly increasing")
    if xi[0] < w.zone.M:
        raise ValueError("frequency grid starts below the floor M")
    if xi[-1] / xi[0] < 1e3 * (1.0 - 1e-9):
        raise ValueError("frequency grid must span at least three decades")
    T = w.zone.T if T is None else float(T)

    if w.kind == "w1":
        sup = np.asarray(weight_w1(w.eta, xi))
    else:
        # frequencies whose hyperbolic window [t_xi, T] is empty carry no
        # admissible t and drop out of the fit
        sup = np.full_like(xi, np.nan)
        jb = jbracket(xi)
        for i, x in enumerate(xi):
            t_lo = max(
                zone_boundary(w.eta, w.zone, x),
                float(w.eta.value(1.0 / jb[i])) + 2.0 / jb[i],
            )
            if t_lo >= T * (1.0 - 1e-12):
                continue
            tg = np.geomspace(t_lo, T, t_samples)
            sup[i] = float(np.max(w.value(x, tg)))

    mask = _top_window(xi, 2.0) & np.isfinite(sup)
    if int(mask.sum()) < 8:
        raise ValueError("fewer than 8 usable points in the top two decades; refine the grid")
    slope, _ = fit_loglog_slope(jbracket(xi[mask]), sup[mask])
    return max(slope, 0.0)


def zygmund_index_bound(m0, eps):
    """Smallest admissible Zygmund index, max(1 + eps, 2*m0/(2 - m0))."""
    if not (0.0 < m0 <= 1.0):
        raise ValueError("order m0 must lie in (0, 1]")
    if not (eps > 0.0):
        raise ValueError("eps must be positive")
    return max(1.0 + eps, 2.0 * m0 / (2.0 - m0))


@dataclass(frozen=True)
class ClassificationReport:
    """Fitted orders of the three weights and the induced index bound."""

    m0_w1: float
    m0_w2: float
    m0_w3: float
    m0: float
    s_min: float
    eps: float

    def to_json(self) -> dict:
        return {
            "m0_w1": self.m0_w1,
            "m0_w2": self.m0_w2,
            "m0_w3": self.m0_w3,
            "m0": self.m0,
            "s_min": self.s_min,
            "eps": self.eps,
        }


def classify(
    eta: AuxiliaryFunction,
    rho: AuxiliaryFunction,
    zp: ZoneParams,
    xi_grid,
    eps: float,
    t_samples=48,
    force_m0: Optional[float] = None,
) -> ClassificationReport:
    """Fit all three weights and derive the minimal index s.

    The governing order is the largest of the three fitted orders (or the
    forced value, when the caller pins m0 by hand).
    """
    m1 = estimate_order(SymbolWeight("w1", eta, zp), xi_grid, t_samples=t_samples)
    m2 = estimate_order(SymbolWeight("w2", eta, zp), xi_grid, t_samples=t_samples)
    m3 = estimate_order(SymbolWeight("w3", eta, zp, rho=rho), xi_grid, t_samples=t_samples)
    m0 = max(m1, m2, m3) if force_m0 is None else float(force_m0)
    return ClassificationReport(m1, m2, m3, m0, zygmund_index_bound(m0, eps), eps)
