"""Numerical laboratory for energy estimates of strictly hyperbolic problems
with coefficients below Lipschitz in time and of Zygmund class in space."""

__version__ = "0.1.0"
