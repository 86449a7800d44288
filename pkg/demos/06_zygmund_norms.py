"""Zygmund/Besov norms of sampled periodic functions, two independent ways.

A lacunary sum sum_j 2^(-j s0) cos(2^j x) has dyadic block norms decaying
exactly like 2^(-j s0); the direct second-difference estimator and the
frequency-side estimator agree up to a fixed order-of-magnitude bracket.
"""

import numpy as np

from hyplab.coefficients import SpatialProfile
from hyplab.weights import fit_loglog_slope
from hyplab.zygmund import (
    DyadicDecomposition,
    GridFunction1D,
    dyadic_besov_norm,
    norm_equivalence_report,
    sobolev_norm_direct,
    spatial_profile_norm,
    zygmund_norm_direct,
)


def lacunary(s0, n=4096):
    return GridFunction1D.from_callable(
        lambda x: sum(2.0 ** (-j * s0) * np.cos(2.0**j * x) for j in range(11)), n=n
    )


print("== block decay of lacunary functions ==")
for s0 in (0.7, 1.2):
    u = lacunary(s0)
    dec = DyadicDecomposition.of(u)
    print(f"  s0 = {s0}: reconstruction error {dec.reconstruction_error():.2e}")
    js = np.arange(1, 11)
    slope, _ = fit_loglog_slope(2.0**js, dec.block_sup_norms()[js])
    print(f"          fitted block slope {slope:+.4f} (target {-s0})")

print()
print("== direct vs dyadic norms ==")
for s0 in (0.7, 1.2):
    rep = norm_equivalence_report(lacunary(s0), s0)
    print(f"  s0 = {s0}: direct {rep['direct']:.4f}, dyadic {rep['dyadic']:.4f}, ratio {rep['ratio']:.3f}")
const = norm_equivalence_report(GridFunction1D(np.full(128, 2.5)), 0.9)
print(f"  constant function: ratio {const['ratio']:.8f}")

print()
print("== quadratic-mean side: dyadic (2,2) vs Fourier multiplier ==")
u = lacunary(0.9)
print(f"  dyadic {dyadic_besov_norm(u, 0.9, p=2, q=2):.4f} vs direct {sobolev_norm_direct(u, 0.9):.4f}")

print()
print("== membership detection for a sampled spatial profile ==")
sp = SpatialProfile(s=1.2, amplitude=0.25)
for s in (1.2, 1.5):
    vals = [spatial_profile_norm(sp, s, n=n) for n in (1024, 2048)]
    trend = "stable" if abs(vals[1] / vals[0] - 1.0) < 0.1 else "growing (not in the class)"
    print(f"  s = {s}: norms {vals[0]:.3f} -> {vals[1]:.3f}  {trend}")
