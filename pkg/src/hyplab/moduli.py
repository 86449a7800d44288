"""Auxiliary functions and the moduli of continuity they induce.

The laboratory measures time-regularity of coefficients against a catalog of
increasing, concave-type auxiliary functions on an interval (0, r0]:

* ``power_law``       f(r) = r**beta,                 beta in (0, 1]
* ``log_reciprocal``  f(r) = (log(1/r))**(-alpha),    alpha > 0
* ``iterated_log``    f(r) = 1 / log(log(...(1/r))),  depth-fold logarithm

A function in the ``eta`` role encodes a modulus of continuity
mu(r) = r / eta(r) that is strictly weaker than Lipschitz; a function in the
``rho`` role measures how far a first derivative is from C^1 (the identity
``power_law`` with beta = 1 is admissible there, but not as an eta).

Derivatives up to order three are evaluated by exact chain rule on
(value, f', f'', f''') jets, so they are closed-form, not finite differences.
Finite differences are kept only as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AuxiliaryFunction",
    "ModulusOfContinuity",
    "AdmissibilityReport",
    "power_law",
    "log_reciprocal",
    "iterated_log",
    "admissibility_check",
    "decay_rate",
    "decay_rate_pair",
    "fd_derivative",
    "log_grid",
    "concave_domain_end",
    "certification_grid",
]

FAMILIES = ("power_law", "log_reciprocal", "iterated_log")
ROLES = ("eta", "rho")


# ----------------------------------------------------------------------------
# order-3 jets: tuples (f, f', f'', f''') propagated by exact chain rule

def _jet_of_r(r):
    one = np.ones_like(r)
    zero = np.zeros_like(r)
    return (r, one, zero, zero)


def _jet_log_recip(r):
    # log(1/r) and its first three derivatives
    return (-np.log(r), -1.0 / r, 1.0 / r**2, -2.0 / r**3)


def _jet_log(j):
    v, a, b, c = j
    return (
        np.log(v),
        a / v,
        b / v - (a / v) ** 2,
        c / v - 3.0 * a * b / v**2 + 2.0 * (a / v) ** 3,
    )


def _jet_pow(j, e):
    v, a, b, c = j
    p = v**e
    q = e * v ** (e - 1.0)
    return (
        p,
        q * a,
        e * (e - 1.0) * v ** (e - 2.0) * a**2 + q * b,
        e * (e - 1.0) * (e - 2.0) * v ** (e - 3.0) * a**3
        + 3.0 * e * (e - 1.0) * v ** (e - 2.0) * a * b
        + q * c,
    )


@dataclass(frozen=True)
class AuxiliaryFunction:
    """One catalog member, pinned to a role and a domain (0, r0].

    ``param`` is the exponent beta for ``power_law``, the power alpha for
    ``log_reciprocal`` and the (integer) log depth for ``iterated_log``.
    """

    family: str
    param: float
    role: str = "eta"
    r0: float = 0.5

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}, expected one of {ROLES}")
        if not (self.r0 > 0.0):
            raise ValueError("r0 must be positive")
        if self.family == "power_law":
            if not (0.0 < self.param <= 1.0):
                raise ValueError("power_law exponent must lie in (0, 1]")
            if self.role == "eta" and self.param == 1.0:
                # admissible as rho only: an eta needs strict concavity
                pass
        elif self.family == "log_reciprocal":
            if not (self.param > 0.0):
                raise ValueError("log_reciprocal power must be positive")
            if self.r0 >= 1.0:
                raise ValueError("log_reciprocal needs r0 < 1 so log(1/r) stays positive")
        else:
            depth = int(self.param)
            if depth != self.param or depth < 1:
                raise ValueError("iterated_log depth must be a positive integer")
            if self._iterated_domain_cap(depth) <= self.r0:
                raise ValueError("r0 too large for iterated_log depth (inner log not positive)")

    @staticmethod
    def _iterated_domain_cap(depth):
        # largest r with log^[depth](1/r) > 0, i.e. 1/exp^[depth-1](1)
        x = 1.0
        for _ in range(depth - 1):
            x = math.exp(x)
        return 1.0 / x

    # -- evaluation -----------------------------------------------------

    def _check_domain(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0.0) or np.any(r > self.r0 * (1.0 + 1e-12)):
            bad = r[(r <= 0.0) | (r > self.r0 * (1.0 + 1e-12))]
            raise ValueError(f"argument {float(np.ravel(bad)[0])} outside (0, r0={self.r0}]")
        return r

    def _jet(self, r):
        if self.family == "power_law":
            return _jet_pow(_jet_of_r(r), self.param)
        j = _jet_log_recip(r)
        if self.family == "log_reciprocal":
            return _jet_pow(j, -self.param)
        for _ in range(int(self.param) - 1):
            j = _jet_log(j)
        return _jet_pow(j, -1.0)

    def value(self, r):
        """Closed-form value; strictly increasing and positive on (0, r0]."""
        r = self._check_domain(r)
        if self.family == "power_law":
            out = r**self.param
        elif self.family == "log_reciprocal":
            out = (-np.log(r)) ** (-self.param)
        else:
            x = -np.log(r)
            for _ in range(int(self.param) - 1):
                x = np.log(x)
            out = 1.0 / x
        return out if out.shape else float(out)

    def derivative(self, r, k=1):
        """k-th derivative, k in {1, 2, 3}, by exact chain rule."""
        if k not in (1, 2, 3):
            raise ValueError("derivative order must be 1, 2 or 3")
        r = self._check_domain(r)
        out = self._jet(r)[k]
        return out if out.shape else float(out)

    @property
    def range_max(self):
        """Largest attainable value, value(r0); the inverse lives on (0, range_max]."""
        return float(self.value(self.r0))

    def inverse(self, t):
        """Solve value(r) = t for r in (0, r0].

        Closed forms exist for every catalog member; ``inverse_bisect`` is an
        independent slow path used for cross-checking.
        """
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0.0) or np.any(t > self.range_max * (1.0 + 1e-12)):
            raise ValueError(f"target outside the range (0, {self.range_max}]")
        if self.family == "power_law":
            r = t ** (1.0 / self.param)
        elif self.family == "log_reciprocal":
            r = np.exp(-(t ** (-1.0 / self.param)))
        else:
            x = 1.0 / t
            for _ in range(int(self.param) - 1):
                x = np.exp(x)
            r = np.exp(-x)
        if np.any(r <= 0.0):
            raise ValueError("inverse underflowed to zero; target too small for this family")
        return r if r.shape else float(r)

    def inverse_bisect(self, t, rel_tol=1e-13):
        """Monotone bisection meeting |value(r) - t| <= 1e-12 * t."""
        t = float(t)
        if not (0.0 < t <= self.range_max * (1.0 + 1e-12)):
            raise ValueError(f"target outside the range (0, {self.range_max}]")
        hi = self.r0
        lo = hi
        while self.value(lo) >= t and lo > 1e-300:
            lo *= 0.5
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.value(mid) < t:
                lo = mid
            else:
                hi = mid
            if hi - lo <= rel_tol * hi:
                break
        return 0.5 * (lo + hi)


def power_law(beta, role="eta", r0=1.0):
    return AuxiliaryFunction("power_law", float(beta), role, r0)


def log_reciprocal(alpha, role="eta", r0=0.5):
    # default r0 = 0.5 keeps log(1/r) positive with margin and the inverse
    # range wide enough for unit-scale experiments
    return AuxiliaryFunction("log_reciprocal", float(alpha), role, r0)


def iterated_log(depth, role="eta", r0=0.2):
    return AuxiliaryFunction("iterated_log", int(depth), role, r0)


@dataclass(frozen=True)
class ModulusOfContinuity:
    """mu(r) = r / eta(r), the modulus induced by an eta-role function."""

    underlying: AuxiliaryFunction

    def __post_init__(self):
        if self.underlying.role != "eta":
            raise ValueError("a modulus of continuity is induced by an eta-role function")

    def value(self, r):
        return np.asarray(r, dtype=float) / self.underlying.value(r)


# ----------------------------------------------------------------------------
# decay rates of the inverse: the scalar building blocks of the local
# oscillation conditions and of the hyperbolic-zone weights

def decay_rate(eta: AuxiliaryFunction, t):
    """-d/dt ( 1 / eta^{-1}(t) ), in closed form.

    With g = eta^{-1}(t) one has g'(t) = 1/eta'(g), hence the rate equals
    1 / (eta'(g) g^2).  Positive and decreasing in t for catalog members.
    """
    g = eta.inverse(t)
    return 1.0 / (eta.derivative(g, 1) * np.asarray(g) ** 2)


def decay_rate_pair(eta: AuxiliaryFunction, rho: AuxiliaryFunction, t):
    """-d/dt ( 1 / rho(eta^{-1}(t)) ) = rho'(g) / (eta'(g) rho(g)^2)."""
    g = eta.inverse(t)
    return rho.derivative(g, 1) / (eta.derivative(g, 1) * np.asarray(rho.value(g)) ** 2)


def fd_derivative(fn, t, rel_step=2e-4):
    """Fourth-order central difference with a relative step; cross-check path."""
    t = np.asarray(t, dtype=float)
    h = np.maximum(np.abs(t), 1e-12) * rel_step
    return (-fn(t + 2 * h) + 8.0 * fn(t + h) - 8.0 * fn(t - h) + fn(t - 2 * h)) / (12.0 * h)


def log_grid(lo, hi, n):
    if not (0.0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    return np.geomspace(lo, hi, int(n))


def concave_domain_end(f: AuxiliaryFunction) -> float:
    """Largest r up to r0 with the role's concavity clause holding on (0, r].

    The log families are concave only for small r (below exp(-(alpha+1)) for
    a single log); the boundary is located by bisection on the sign of f''.
    An eta needs f'' < 0 strictly; a rho admits f'' = 0 (the identity).
    """
    if f.role == "eta":
        ok = lambda r: f.derivative(r, 2) < 0.0
    else:
        ok = lambda r: f.derivative(r, 2) <= 1e-300
    hi = f.r0
    if ok(hi):
        return hi
    lo = hi * 1e-12
    if not ok(lo):
        raise ValueError("no concavity region found near 0")
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
        if hi / lo < 1.0 + 1e-12:
            break
    return lo


def certification_grid(f: AuxiliaryFunction, n=96):
    """Log-spaced grid inside the concave part of the domain."""
    hi = concave_domain_end(f)
    return log_grid(hi * 1e-7, hi * (1.0 - 1e-9), n)


# ----------------------------------------------------------------------------
# admissibility certification on a finite grid

@dataclass
class ClauseResult:
    passed: bool
    detail: str = ""
    violations: list = field(default_factory=list)


@dataclass
class AdmissibilityReport:
    function: AuxiliaryFunction
    clauses: dict
    constants: dict

    @property
    def passed(self):
        return all(c.passed for c in self.clauses.values())

    def summary(self):
        lines = [f"{self.function.family}({self.function.param}) as {self.function.role}:"]
        for name, c in self.clauses.items():
            mark = "ok" if c.passed else "FAIL"
            lines.append(f"  {name:<22} {mark}  {c.detail}")
        for k, v in self.constants.items():
            lines.append(f"  {k:<22} {v:.6g}")
        return "\n".join(lines)


def admissibility_check(f: AuxiliaryFunction, grid) -> AdmissibilityReport:
    """Certify the defining clauses of an auxiliary function on a log grid.

    The grid must hold at least 64 points inside (0, r0].  Certification is
    numerical, clause by clause; failures carry the offending r values.
    Note the catalog's log families are concave only for r below
    exp(-(alpha+1)); certification grids for them should stay under that cap
    even when r0 itself is larger.
    """
    r = np.sort(np.asarray(grid, dtype=float))
    if r.size < 64:
        raise ValueError("admissibility grid needs at least 64 points")
    if r[0] <= 0.0 or r[-1] > f.r0 * (1.0 + 1e-12):
        raise ValueError("admissibility grid must lie inside (0, r0]")

    val = np.asarray(f.value(r))
    d1 = np.asarray(f.derivative(r, 1))
    d2 = np.asarray(f.derivative(r, 2))
    d3 = np.asarray(f.derivative(r, 3))

    clauses = {}

    bad = r[val <= 0.0]
    clauses["positive"] = ClauseResult(bad.size == 0, f"min value {val.min():.3g}", list(bad[:4]))

    bad = r[d1 <= 0.0]
    clauses["increasing"] = ClauseResult(bad.size == 0, f"min f' {d1.min():.3g}", list(bad[:4]))

    # vanishing limit at 0+: values on the decreasing grid head to 0 (log
    # families decay glacially, so only a clear downward trend is required)
    shrink = val[1] > val[0] > 0.0 and val[0] < 0.75 * val[-1]
    clauses["vanishes_at_zero"] = ClauseResult(bool(shrink), f"value at r_min {val[0]:.3g}")

    if f.role == "eta":
        bad = r[d2 >= 0.0]
        detail = f"max f'' {d2.max():.3g} (strict concavity required)"
    else:
        tol = 1e-12 * np.max(np.abs(d2)) if np.max(np.abs(d2)) > 0 else 1e-12
        bad = r[d2 > tol]
        detail = f"max f'' {d2.max():.3g} (non-positive required)"
    clauses["concave"] = ClauseResult(bad.size == 0, detail, list(bad[:4]))

    constants = {}
    for k, dk in ((1, d1), (2, d2), (3, d3)):
        constants[f"C_{k}"] = float(np.max(np.abs(dk) * r ** (k - 1) / d1))

    if f.role == "eta":
        mu = r / val
        diffs = np.diff(mu)
        bad = r[1:][diffs <= 0.0]
        clauses["modulus_increasing"] = ClauseResult(
            bad.size == 0, f"min d(mu) {diffs.min():.3g}", list(bad[:4])
        )
        ok = mu[0] < mu[1] and mu[0] < 0.5 * mu[-1]
        clauses["modulus_vanishes"] = ClauseResult(bool(ok), f"mu at r_min {mu[0]:.3g}")

    return AdmissibilityReport(f, clauses, constants)
