"""Auxiliary functions, their admissibility, and the induced decay rates.

The catalog pairs each modulus of continuity mu(r) = r/eta(r) with the decay
rate -d/dt(1/eta^{-1}(t)) that controls admissible coefficient oscillations:

    mu(r) = r log(1/r)   ->  rate e^{1/t} / t^2      (square root e^{1/(2t)}/t)
    mu(r) = r^alpha      ->  rate (1-alpha)^{-1} t^{-(2-alpha)/(1-alpha)}

The Lipschitz case eta = 1 is excluded: it is not strictly concave and its
modulus does not vanish at 0.
"""

import numpy as np

from hyplab.moduli import (
    ModulusOfContinuity,
    admissibility_check,
    certification_grid,
    decay_rate,
    log_grid,
    log_reciprocal,
    power_law,
)
from hyplab.tables import numeric_decay_rate

print("== admissibility of the catalog ==")
for f in (power_law(2 / 3), power_law(1.0, role="rho"), log_reciprocal(1.0)):
    rep = admissibility_check(f, certification_grid(f))
    print(rep.summary())
    print()

print("== the identity fails as an eta ==")
rep = admissibility_check(power_law(1.0, role="eta"), log_grid(1e-6, 1.0, 96))
print(rep.summary())
print()

print("== moduli of continuity ==")
rs = np.geomspace(1e-6, 0.3, 5)
mu = ModulusOfContinuity(log_reciprocal(1.0))
print("r      :", np.array2string(rs, precision=2))
print("r log(1/r):", np.array2string(np.asarray(mu.value(rs)), precision=3))

print()
print("== decay rates: closed form vs finite differences of the inverse ==")
ts = np.geomspace(0.01, 1.0, 7)
for label, eta, closed in (
    ("log-lipschitz", log_reciprocal(1.0), np.exp(1.0 / ts) / ts**2),
    ("holder 1/2", power_law(0.5, r0=1.1), 2.0 * ts**-3.0),
):
    numeric = numeric_decay_rate(eta, ts)
    err = np.max(np.abs(numeric / closed - 1.0))
    print(f"{label:<14} max rel err {err:.2e}")
    assert err < 1e-6
print("rates reproduce the closed forms to 1e-6")
