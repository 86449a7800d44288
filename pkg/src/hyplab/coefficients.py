"""Test coefficients, their time mollification and regularization bounds.

Three time profiles around a positive base value:

* ``constant``               a(t) = base
* ``log_power_oscillation``  a(t) = base + delta * sin((log 1/t)^(1+gamma))
* ``holder_rough``           a(t) = base + delta * sum_j 2^(-j*alpha) cos(2^j t)

The oscillating family saturates derivative bounds of the form
|a^(q)(t)| <= C (t^-1 (log 1/t)^gamma)^q; the lacunary family has the uniform
Hoelder-alpha modulus.  An optional spatial factor (1 + b(x)) with a lacunary
periodic profile b keeps everything uniformly elliptic.

Mollification is a time convolution with a fixed even C-infinity bump of unit
mass at width eps, evaluated by a composite midpoint rule whose weights sum
to one exactly (constants are preserved to machine precision).  Time
derivatives of the mollified coefficient differentiate the bump, never the
rough coefficient.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .moduli import AuxiliaryFunction, decay_rate, decay_rate_pair
from .weights import jbracket
from .zones import ZoneParams, validate_zone, zone_boundary

__all__ = [
    "SpatialProfile",
    "CoefficientSpec",
    "Mollifier",
    "oscillation_class",
    "mollify",
    "mollified_derivative",
    "RegBoundsReport",
    "verify_reg_bounds",
]

PROFILES = ("constant", "log_power_oscillation", "holder_rough")

# freeze point of the constant continuation below t = 0 for profiles with no
# one-sided limit there
_T_FLOOR = 2.0**-40


@dataclass(frozen=True)
class SpatialProfile:
    """Periodic lacunary perturbation b(x), normalized to sup|b| = amplitude."""

    family: str = "lacunary"
    s: float = 1.2
    amplitude: float = 0.25
    terms: int = 10

    def __post_init__(self):
        if self.family != "lacunary":
            raise ValueError("only the lacunary spatial family is cataloged")
        if not (0.0 <= self.amplitude < 0.5):
            raise ValueError("spatial amplitude must lie in [0, 1/2)")
        if self.s <= 0.0:
            raise ValueError("spatial regularity index must be positive")

    def value(self, x):
        x = np.asarray(x, dtype=float)
        js = np.arange(1, self.terms + 1)
        scale = self.amplitude / np.sum(2.0 ** (-js * self.s))
        out = np.zeros_like(x)
        for j in js:
            out += 2.0 ** (-j * self.s) * np.cos(2.0**j * x)
        return scale * out


@dataclass(frozen=True)
class CoefficientSpec:
    """One scalar coefficient a(t) (optionally times a spatial factor)."""

    profile: str = "constant"
    base: float = 2.0
    delta: float = 0.0
    gamma_osc: float = 0.0
    alpha: float = 0.5
    depth: int = 18
    spatial: Optional[SpatialProfile] = None

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}, expected one of {PROFILES}")
        if not (self.base > 0.0):
            raise ValueError("base must be positive")
        if not (0.0 <= self.delta < self.base / 2.0):
            raise ValueError("amplitude delta must lie in [0, base/2)")
        if self.gamma_osc < 0.0:
            raise ValueError("oscillation exponent must be nonnegative")
        if self.profile == "holder_rough" and not (0.0 < self.alpha < 1.0):
            raise ValueError("holder_rough exponent must lie in (0, 1)")

    # -- time part -------------------------------------------------------

    def _time_value(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0.0):
            raise ValueError("coefficient evaluated at t <= 0")
        if self.profile == "constant":
            return np.broadcast_to(np.float64(self.base), t.shape).copy()
        if self.profile == "log_power_oscillation":
            if np.any(t >= 1.0) and self.gamma_osc > 0.0:
                raise ValueError("log_power_oscillation with gamma > 0 needs t < 1")
            logs = np.log(1.0 / t)
            return self.base + self.delta * np.sin(np.sign(logs) * np.abs(logs) ** (1.0 + self.gamma_osc))
        js = np.arange(self.depth + 1)
        acc = np.zeros_like(t)
        for j in js:
            acc += 2.0 ** (-j * self.alpha) * np.cos(2.0**j * t)
        return self.base + self.delta * acc / np.sum(2.0 ** (-js * self.alpha))

    def _time_derivative(self, t, order=1):
        """Closed-form first or second time derivative of the profile."""
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0.0):
            raise ValueError("coefficient derivative at t <= 0")
        if order not in (1, 2):
            raise ValueError("derivative order must be 1 or 2")
        if self.profile == "constant":
            return np.zeros_like(t)
        if self.profile == "log_power_oscillation":
            g = self.gamma_osc
            L = np.log(1.0 / t)
            phase = L ** (1.0 + g)
            if order == 1:
                return -self.delta * (1.0 + g) * L**g / t * np.cos(phase)
            term1 = (g * L ** (g - 1.0) + L**g) * np.cos(phase)
            term2 = -(1.0 + g) * L ** (2.0 * g) * np.sin(phase)
            return self.delta * (1.0 + g) / t**2 * (term1 + term2)
        js = np.arange(self.depth + 1)
        norm = np.sum(2.0 ** (-js * self.alpha))
        acc = np.zeros_like(t)
        for j in js:
            w = 2.0**j
            if order == 1:
                acc += 2.0 ** (-j * self.alpha) * (-w) * np.sin(w * t)
            else:
                acc += 2.0 ** (-j * self.alpha) * (-(w**2)) * np.cos(w * t)
        return self.delta * acc / norm

    # -- full value ------------------------------------------------------

    def _spatial_factor(self, x):
        if self.spatial is None or x is None:
            return 1.0
        return 1.0 + self.spatial.value(x)

    def value(self, t, x=None):
        out = self._time_value(t) * self._spatial_factor(x)
        return out if np.asarray(out).shape else float(out)

    def time_derivative(self, t, order=1, x=None):
        out = self._time_derivative(t, order) * self._spatial_factor(x)
        return out if np.asarray(out).shape else float(out)

    @property
    def sup_abs(self):
        """Upper bound for |a| over its domain."""
        factor = 1.0 + (self.spatial.amplitude if self.spatial else 0.0)
        return (self.base + self.delta) * factor

    def extended_time_value(self, t):
        """Evaluation on the mollification windows.

        Below zero the profile has no one-sided limit in general, so the
        value freezes at a fixed tiny positive time (constant continuation,
        which preserves the modulus of continuity).  Above the horizon the
        profile continues by its own formula: freezing there would plant a
        kink whose mollification pollutes second-derivative measurements at
        the horizon by a factor 1/eps.
        """
        t = np.asarray(t, dtype=float)
        hi = np.inf
        if self.profile == "log_power_oscillation" and self.gamma_osc > 0.0:
            hi = 1.0 - 1e-9
        return self._time_value(np.clip(t, _T_FLOOR, hi))


def oscillation_class(gamma_osc: float) -> str:
    """Qualitative speed of oscillation encoded by the exponent gamma."""
    if gamma_osc < 0.0:
        raise ValueError("oscillation exponent must be nonnegative")
    if gamma_osc == 0.0:
        return "very_slow"
    if gamma_osc < 1.0:
        return "slow"
    if gamma_osc == 1.0:
        return "fast"
    return "very_fast"


# ----------------------------------------------------------------------------
# mollifier

def _bump(y):
    out = np.zeros_like(y)
    inside = np.abs(y) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - y[inside] ** 2))
    return out


def _bump_d1(y):
    out = np.zeros_like(y)
    inside = np.abs(y) < 1.0
    yi = y[inside]
    out[inside] = np.exp(-1.0 / (1.0 - yi**2)) * (-2.0 * yi) / (1.0 - yi**2) ** 2
    return out


def _bump_d2(y):
    out = np.zeros_like(y)
    inside = np.abs(y) < 1.0
    yi = y[inside]
    q = 1.0 - yi**2
    out[inside] = np.exp(-1.0 / q) * ((2.0 * yi / q**2) ** 2 - (2.0 + 6.0 * yi**2) / q**3)
    return out


@functools.lru_cache(maxsize=8)
def _mollifier_grids(n):
    y = (np.arange(n) + 0.5) * (2.0 / n) - 1.0
    raw = _bump(y)
    mass = raw.sum()
    w0 = raw / mass  # discrete measure of total mass one
    w1 = _bump_d1(y) / mass
    w1 = w1 - w1.mean()
    w2 = _bump_d2(y) / mass
    w2 = w2 - w2.mean()
    return y, w0, w1, w2


@dataclass(frozen=True)
class Mollifier:
    """Fixed even unit-mass bump exp(-1/(1-y^2)) on (-1, 1), discretized.

    ``nodes`` midpoint points per support width; the discrete weights are
    normalized to sum to one exactly, and the derivative weights are
    recentred so they annihilate constants exactly.
    """

    nodes: int = 256

    def __post_init__(self):
        if self.nodes < 64:
            raise ValueError("need at least 64 quadrature nodes per width")

    def _grids(self):
        return _mollifier_grids(self.nodes)

    @property
    def mass(self):
        _, w0, _, _ = self._grids()
        return float(w0.sum())

    def profile(self, y):
        """Normalized bump value psi(y) (continuum normalization)."""
        norm = 0.4439938161680794
        return _bump(np.asarray(y, dtype=float)) / norm


def mollify(spec: CoefficientSpec, mol: Mollifier, eps: float, t, x=None):
    """(a *_t psi_eps)(t), with constant continuation outside the window."""
    if not (eps > 0.0):
        raise ValueError("mollification width must be positive")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    y, w0, _, _ = mol._grids()
    vals = spec.extended_time_value(t[:, None] - eps * y[None, :])
    out = vals @ w0
    out = out * spec._spatial_factor(x)
    return out if out.size > 1 else float(out[0])


def mollified_derivative(spec: CoefficientSpec, mol: Mollifier, eps: float, t, order=1, x=None):
    """d^k/dt^k of the mollified coefficient via derivatives of the bump."""
    if order not in (1, 2):
        raise ValueError("derivative order must be 1 or 2")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    y, _, w1, w2 = mol._grids()
    w = w1 if order == 1 else w2
    vals = spec.extended_time_value(t[:, None] - eps * y[None, :])
    out = (vals @ w) / eps**order
    out = out * spec._spatial_factor(x)
    return out if out.size > 1 else float(out[0])


# ----------------------------------------------------------------------------
# regularization bounds

@dataclass
class ClauseCheck:
    name: str
    max_ratio: float
    argmax_t: float
    argmax_xi: float
    ratio_by_xi: np.ndarray
    top_decade_growth: float

    def row(self):
        return {
            "clause": self.name,
            "max_ratio": self.max_ratio,
            "argmax_t": self.argmax_t,
            "argmax_xi": self.argmax_xi,
            "top_decade_growth": self.top_decade_growth,
        }


@dataclass
class RegBoundsReport:
    spec: CoefficientSpec
    eta: AuxiliaryFunction
    rho: AuxiliaryFunction
    clauses: dict

    def max_growth(self):
        return max(c.top_decade_growth for c in self.clauses.values())

    def summary(self):
        lines = ["regularization-bound ratios (finite C = verified):"]
        for c in self.clauses.values():
            lines.append(
                f"  {c.name:<14} C = {c.max_ratio:10.4g}  at (t={c.argmax_t:.4g}, xi={c.argmax_xi:.4g})"
                f"  top-decade growth x{c.top_decade_growth:.3g}"
            )
        return "\n".join(lines)


def _growth_over_top_decade(xi_grid, ratios):
    xi = np.asarray(xi_grid, dtype=float)
    r = np.asarray(ratios, dtype=float)
    mask = xi >= xi[-1] / 10.0 * (1.0 - 1e-9)
    good = mask & (r > 0.0)
    if int(good.sum()) < 3:
        return 1.0
    from .weights import fit_loglog_slope

    slope, _ = fit_loglog_slope(xi[good], r[good])
    return float(10.0**slope)


def verify_reg_bounds(
    spec: CoefficientSpec,
    eta: AuxiliaryFunction,
    rho: AuxiliaryFunction,
    zp: ZoneParams,
    xi_grid,
    t_grid,
    mol: Optional[Mollifier] = None,
    x_points: int = 64,
    t_samples: int = 33,
) -> RegBoundsReport:
    """Measure the six regularized-coefficient bounds with eps = 1/<xi>.

    Globally in time (on the caller's t_grid):
      (i)   |a_eps|            vs 1
      (ii)  |a_eps - a|        vs <xi>^-1 / eta(1/|xi|)
      (iv)  |d_t a_eps|        vs 1 / eta(1/|xi|)
    In the hyperbolic zone (on a per-frequency grid from t_xi to T):
      (iii) |a_eps - a|        vs <xi>^-1 rho(1/|xi|) (-d/dt 1/rho(eta^-1(t - 1/|xi|)))
      (v)   |d_t a_eps|        vs (-d/dt 1/eta^-1(t - 1/|xi|))^(1/2)
      (vi)  |d_t^2 a_eps|      vs <xi> rho(1/|xi|) (-d/dt 1/rho(eta^-1(t - 1/|xi|)))

    Every clause reports the largest measured/bound ratio (a finite constant
    means "verified"), where it occurred, and the fitted growth of the ratio
    across the top frequency decade (growth near or below one means the bound
    is stable; the caller decides the pass threshold).

    The caller is responsible for matching the coefficient's modulus with
    eta; a mismatch shows up as top-decade growth.
    """
    validate_zone(eta, zp)
    mol = mol or Mollifier()
    xi = np.asarray(xi_grid, dtype=float)
    tg = np.asarray(t_grid, dtype=float)
    if np.any(xi < zp.M):
        raise ValueError("frequency grid starts below the floor M")
    if np.any(tg <= 0.0) or np.any(tg > zp.T):
        raise ValueError("t grid must lie in (0, T]")
    xs = None
    if spec.spatial is not None:
        xs = np.linspace(0.0, 2.0 * math.pi, x_points, endpoint=False)

    def measured(kind, ts, eps):
        """Max over x (if any) of the requested quantity at times ts."""
        if kind == "aeps":
            base = np.atleast_1d(mollify(spec, mol, eps, ts))
        elif kind == "diff":
            raw = spec._time_value(ts)
            base = np.abs(np.atleast_1d(mollify(spec, mol, eps, ts)) - raw)
        elif kind == "d1":
            base = np.abs(np.atleast_1d(mollified_derivative(spec, mol, eps, ts, 1)))
        else:
            base = np.abs(np.atleast_1d(mollified_derivative(spec, mol, eps, ts, 2)))
        base = np.abs(base)
        if xs is not None:
            factor = float(np.max(np.abs(1.0 + spec.spatial.value(xs))))
            base = base * factor
        return base

    jb = jbracket(xi)
    names = ("i", "ii", "iii", "iv", "v", "vi")
    ratios = {n: np.full(xi.size, np.nan) for n in names}
    arg = {n: (0.0, 0.0, -1.0) for n in names}

    for k, (x_abs, jbx) in enumerate(zip(xi, jb)):
        eps = 1.0 / jbx
        t_lo = zone_boundary(eta, zp, x_abs)
        zone_alive = t_lo < zp.T * (1.0 - 1e-12)
        t_hyp = np.geomspace(max(t_lo, 4.0 / jbx), zp.T, t_samples) if zone_alive else None

        bounds = {
            "i": np.ones_like(tg),
            "ii": np.full_like(tg, 1.0 / (jbx * eta.value(1.0 / x_abs))),
            "iv": np.full_like(tg, 1.0 / eta.value(1.0 / x_abs)),
        }
        meas = {
            "i": measured("aeps", tg, eps),
            "ii": measured("diff", tg, eps),
            "iv": measured("d1", tg, eps),
        }
        if zone_alive:
            bounds["iii"] = rho.value(1.0 / x_abs) / jbx * decay_rate_pair(eta, rho, t_hyp - 1.0 / x_abs)
            bounds["v"] = np.sqrt(decay_rate(eta, t_hyp - 1.0 / x_abs))
            bounds["vi"] = jbx * rho.value(1.0 / x_abs) * decay_rate_pair(eta, rho, t_hyp - 1.0 / x_abs)
            meas["iii"] = measured("diff", t_hyp, eps)
            meas["v"] = measured("d1", t_hyp, eps)
            meas["vi"] = measured("d2", t_hyp, eps)
        for n in meas:
            ts = tg if n in ("i", "ii", "iv") else t_hyp
            r = meas[n] / bounds[n]
            i_best = int(np.argmax(r))
            ratios[n][k] = r[i_best]
            if r[i_best] > arg[n][2]:
                arg[n] = (float(ts[i_best]), float(x_abs), float(r[i_best]))

    clauses = {}
    for n in names:
        t_at, xi_at, peak = arg[n]
        clauses[n] = ClauseCheck(
            name=n,
            max_ratio=float(peak) if peak >= 0.0 else float("nan"),
            argmax_t=t_at,
            argmax_xi=xi_at,
            ratio_by_xi=ratios[n],
            top_decade_growth=_growth_over_top_decade(xi, ratios[n]),
        )
    return RegBoundsReport(spec, eta, rho, clauses)
