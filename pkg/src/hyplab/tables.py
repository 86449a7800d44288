"""Reproduction of the reference tables: decay rates, weights and indices.

Each builder returns rows of (family, param, closed_form, fitted, rel_err):
``closed_form`` is the catalog formula evaluated at a reference point,
``fitted`` the numeric counterpart (finite differences on the inverse, or a
fitted growth order), ``rel_err`` the worst relative gap over the working
grid.  The excluded Lipschitz modulus appears as a marked row.
"""

from __future__ import annotations

import numpy as np

from .moduli import (
    AuxiliaryFunction,
    decay_rate,
    decay_rate_pair,
    fd_derivative,
    log_reciprocal,
    power_law,
)
from .weights import SymbolWeight, classify, estimate_order, zygmund_index_bound
from .zones import ZoneParams, zone_floor

__all__ = [
    "numeric_decay_rate",
    "numeric_decay_rate_pair",
    "local_condition_rows",
    "additional_local_condition_rows",
    "weight_order_rows",
    "summary_rows",
    "TABLE_BUILDERS",
]

T_REF = 0.1


def numeric_decay_rate(eta: AuxiliaryFunction, t, rel_step=2e-4):
    """-d/dt (1/eta^{-1}(t)) by finite differences on the bisection inverse."""
    inv = np.vectorize(lambda s: eta.inverse_bisect(s))
    return fd_derivative(lambda s: -1.0 / inv(s), t, rel_step)


def numeric_decay_rate_pair(eta, rho, t, rel_step=2e-4):
    inv = np.vectorize(lambda s: eta.inverse_bisect(s))
    return fd_derivative(lambda s: -1.0 / np.asarray(rho.value(inv(s))), t, rel_step)


def _rate_row(family, param, eta, closed_fn, t_lo=0.01, t_hi=1.0, n=25):
    t_hi = min(t_hi, eta.range_max)
    ts = np.geomspace(t_lo, t_hi, n)
    closed = closed_fn(ts)
    numeric = numeric_decay_rate(eta, ts)
    rel = float(np.max(np.abs(numeric / closed - 1.0)))
    i_ref = int(np.argmin(np.abs(ts - T_REF)))
    return {
        "family": family,
        "param": param,
        "closed_form": float(closed[i_ref]),
        "fitted": float(numeric[i_ref]),
        "rel_err": rel,
    }


def local_condition_rows(alpha=0.5):
    """Decay rates -d/dt(1/eta^{-1}(t)) per modulus of continuity."""
    rows = [
        {
            "family": "lipschitz",
            "param": 1.0,
            "closed_form": "excluded",
            "fitted": "excluded",
            "rel_err": "",
        },
        _rate_row(
            "log_lipschitz",
            1.0,
            log_reciprocal(1.0),
            lambda t: np.exp(1.0 / t) / t**2,
        ),
        # r0 slightly above 1 keeps the finite-difference stencil inside the
        # inverse's range at the top of the t-window
        _rate_row(
            "holder",
            alpha,
            power_law(1.0 - alpha, r0=1.1),
            lambda t: (1.0 / (1.0 - alpha)) * t ** (-(2.0 - alpha) / (1.0 - alpha)),
        ),
    ]
    return rows


def additional_local_condition_rows(alpha=0.5, beta=0.7):
    """Decay rates -d/dt(1/rho(eta^{-1}(t))) for eta/rho combinations."""
    eta_ll = log_reciprocal(1.0)
    eta_h = power_law(1.0 - alpha, r0=1.1)
    combos = [
        ("log_reciprocal+log_reciprocal", 1.0, eta_ll, log_reciprocal(1.0, role="rho"),
         lambda t: 1.0 / t**2),
        ("power_law+log_reciprocal", beta, eta_ll, power_law(beta, role="rho"),
         lambda t: (beta / t**2) * np.exp(beta / t)),
        ("identity+log_reciprocal", 1.0, eta_ll, power_law(1.0, role="rho"),
         lambda t: np.exp(1.0 / t) / t**2),
        ("log_reciprocal+holder", 1.0, eta_h, log_reciprocal(1.0, role="rho"),
         lambda t: (1.0 / (1.0 - alpha)) / t),
        ("power_law+holder", beta, eta_h, power_law(beta, role="rho"),
         lambda t: (beta / (1.0 - alpha)) * t ** (-(1.0 - alpha + beta) / (1.0 - alpha))),
        ("identity+holder", 1.0, eta_h, power_law(1.0, role="rho"),
         lambda t: (1.0 / (1.0 - alpha)) * t ** (-(2.0 - alpha) / (1.0 - alpha))),
    ]
    rows = []
    for family, param, eta, rho, closed_fn in combos:
        # stay inside both inverse ranges: eta^{-1}(t) must not exceed rho's r0
        t_hi = min(1.0, eta.range_max, float(eta.value(min(eta.r0, rho.r0))))
        ts = np.geomspace(0.01, t_hi * 0.999, 25)
        closed = closed_fn(ts)
        numeric = numeric_decay_rate_pair(eta, rho, ts)
        i_ref = int(np.argmin(np.abs(ts - T_REF)))
        rows.append(
            {
                "family": family,
                "param": param,
                "closed_form": float(closed[i_ref]),
                "fitted": float(numeric[i_ref]),
                "rel_err": float(np.max(np.abs(numeric / closed - 1.0))),
            }
        )
    return rows


_XI_GRID = np.geomspace(1e3, 1e6, 25)


def weight_order_rows(alpha_values=(0.2, 0.5)):
    """Fitted growth orders of the three weights against the catalog targets."""
    rows = []
    rho_id = power_law(1.0, role="rho")

    def add(kind, label, eta, rho, target):
        zp = ZoneParams(N=2.0, M=zone_floor(eta), T=0.5)
        w = SymbolWeight(kind, eta, zp, rho=rho)
        fitted = estimate_order(w, _XI_GRID)
        rows.append(
            {
                "family": f"{kind}|{label}",
                "param": eta.param,
                "closed_form": target,
                "fitted": fitted,
                "rel_err": abs(fitted - target),
            }
        )

    eta_ll = log_reciprocal(1.0)
    add("w1", "log_lipschitz", eta_ll, None, 0.0)
    add("w2", "log_lipschitz", eta_ll, None, 0.0)
    add("w3", "log_lipschitz", eta_ll, rho_id, 0.0)
    for alpha in alpha_values:
        eta = power_law(1.0 - alpha)
        add("w1", "holder", eta, None, 1.0 - alpha)
        add("w2", "holder", eta, None, 1.0 - alpha)
        add("w3", "holder", eta, rho_id, 1.0 - alpha)
        add("w3", "holder_rho0.7", eta, power_law(0.7, role="rho"), 1.0 - alpha)
    return rows


def summary_rows(eps=0.01, alpha_values=(0.2, 1.0 / 3.0, 0.5)):
    """Admissible index s per modulus; the m0 = 1 row is pinned by hand."""
    rho_id = power_law(1.0, role="rho")
    rows = []

    rep = classify(log_reciprocal(1.0), rho_id, ZoneParams(2.0, 2.0, 0.5), _XI_GRID, eps)
    rows.append(
        {
            "family": "log_lipschitz",
            "param": 1.0,
            "closed_form": 1.0 + eps,
            "fitted": rep.s_min,
            "rel_err": abs(rep.s_min - (1.0 + eps)) / (1.0 + eps),
        }
    )
    for alpha in alpha_values:
        eta = power_law(1.0 - alpha)
        zp = ZoneParams(2.0, zone_floor(eta), 0.5)
        rep = classify(eta, rho_id, zp, _XI_GRID, eps)
        target = max(1.0 + eps, 2.0 * (1.0 - alpha) / (1.0 + alpha))
        rows.append(
            {
                "family": "holder",
                "param": alpha,
                "closed_form": target,
                "fitted": rep.s_min,
                "rel_err": abs(rep.s_min - target) / target,
            }
        )
    forced = zygmund_index_bound(1.0, eps)
    rows.append(
        {
            "family": "forced_m0",
            "param": 1.0,
            "closed_form": 2.0,
            "fitted": forced,
            "rel_err": abs(forced - 2.0) / 2.0,
        }
    )
    return rows


TABLE_BUILDERS = {
    "local_condition": local_condition_rows,
    "additional_local_condition": additional_local_condition_rows,
    "weight_orders": weight_order_rows,
    "summary": summary_rows,
}
