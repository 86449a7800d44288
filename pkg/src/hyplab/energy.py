"""Frequency-wise evolution of the first-order system and loss estimation.

For x-independent coefficients the system decouples over frequencies:

    U'(t) = i A(t, xi) U(t),   U(0) = e_1,

with A the companion symbol built from the raw (unmollified) coefficients.
A classical four-stage explicit step is used with the step size

    h(t) = c_h / (<xi> sup|a| + |a'(t)| / sup|a| + 1),

where the oscillation rate |a'| is evaluated no earlier than one frequency
wavelength 1/<xi> (the raw rate diverges like 1/t at the origin while the
effective, frequency-smoothed coefficient oscillates no faster than <xi>).

Amplification per frequency is the supremum of |U(t)|/|U(0)| over a fixed
sample grid; the loss-of-derivatives exponent is the least-squares slope of
log(amplification) against log<xi> over the top two decades of the sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coefficients import _T_FLOOR
from .companion import HyperbolicOperatorSpec, characteristic_roots
from .diagonalizers import m1_inverse_symbol, m1_symbol
from .moduli import AuxiliaryFunction
from .weights import fit_loglog_slope, jbracket
from .zones import ZoneParams, validate_zone

__all__ = [
    "StiffnessError",
    "FrequencyExperiment",
    "EnergyTrace",
    "LossEstimate",
    "evolve_frequency",
    "amplification",
    "estimate_loss",
    "sobolev_energy",
    "closed_form_constant_trace",
]

MIN_STEP = 1e-12


class StiffnessError(Exception):
    """Step controller pushed the step below the representable floor."""


@dataclass(frozen=True)
class EnergyTrace:
    """Euclidean norm history of one frequency component."""

    xi: float
    times: np.ndarray
    norms: np.ndarray
    amplification: float

    @classmethod
    def from_history(cls, xi, times, norms):
        times = np.asarray(times, dtype=float)
        norms = np.asarray(norms, dtype=float)
        amp = float(np.max(norms) / norms[0]) if norms[0] > 0.0 else 0.0
        return cls(xi, times, norms, amp)


@dataclass(frozen=True)
class LossEstimate:
    nu0_hat: float
    stderr: float
    xi_min: float
    xi_max: float


@dataclass(frozen=True)
class FrequencyExperiment:
    """A frequency sweep of the first-order evolution."""

    operator: HyperbolicOperatorSpec
    xi_grid: np.ndarray
    zone: ZoneParams
    eta: AuxiliaryFunction
    rho: Optional[AuxiliaryFunction] = None
    step_factor: float = 0.02
    n_samples: int = 257
    initial: str = "canonical"  # or "random"
    seed: int = 0

    def __post_init__(self):
        xi = np.asarray(self.xi_grid, dtype=float)
        object.__setattr__(self, "xi_grid", xi)
        if not self.operator.x_independent:
            raise ValueError("frequency-wise evolution needs x-independent coefficients")
        if xi.ndim != 1 or xi.size < 2 or np.any(np.diff(xi) <= 0.0):
            raise ValueError("xi grid must be strictly increasing")
        if xi[-1] / xi[0] < 100.0 * (1.0 - 1e-9):
            raise ValueError("xi grid must span at least two decades")
        if np.any(xi < self.zone.M):
            raise ValueError("xi grid must stay above the frequency floor M")
        validate_zone(self.eta, self.zone)
        if not (self.step_factor > 0.0):
            raise ValueError("step factor must be positive")
        if self.n_samples < 256:
            raise ValueError("trace needs at least 256 sample times")
        if self.initial not in ("canonical", "random"):
            raise ValueError("initial must be 'canonical' or 'random'")

    @property
    def T(self):
        return self.zone.T

    def initial_vector(self, xi_index: int) -> np.ndarray:
        m = self.operator.m
        if self.initial == "canonical":
            u0 = np.zeros(m, dtype=complex)
            u0[0] = 1.0
            return u0
        rng = np.random.default_rng([self.seed, xi_index])
        v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        return v / np.linalg.norm(v)


def _scalar_value(spec, t):
    """Fast scalar evaluation of a coefficient profile (integrator hot path)."""
    if t < _T_FLOOR:
        t = _T_FLOOR
    if spec.profile == "constant":
        return spec.base
    if spec.profile == "log_power_oscillation":
        if spec.gamma_osc > 0.0 and t >= 1.0:
            t = 1.0 - 1e-9
        L = math.log(1.0 / t)
        phase = math.copysign(abs(L) ** (1.0 + spec.gamma_osc), L)
        return spec.base + spec.delta * math.sin(phase)
    acc = 0.0
    norm = 0.0
    for j in range(spec.depth + 1):
        w = 2.0 ** (-j * spec.alpha)
        acc += w * math.cos(2.0**j * t)
        norm += w
    return spec.base + spec.delta * acc / norm


def _scalar_rate(spec, t):
    if spec.profile == "constant":
        return 0.0
    if spec.profile == "log_power_oscillation":
        g = spec.gamma_osc
        L = math.log(1.0 / t)
        if L <= 0.0:
            return abs(spec.delta) * (1.0 + g) / t
        return abs(spec.delta) * (1.0 + g) * L**g / t
    # envelope of the lacunary derivative: sum of term amplitudes
    total = 0.0
    norm = 0.0
    for j in range(spec.depth + 1):
        w = 2.0 ** (-j * spec.alpha)
        total += w * 2.0**j
        norm += w
    return abs(spec.delta) * total / norm


def evolve_frequency(
    exp: FrequencyExperiment, xi: float, u0=None, step_scale: float = 1.0
) -> EnergyTrace:
    """Integrate the companion system at one frequency of the sweep."""
    xi = float(xi)
    if not np.any(np.isclose(exp.xi_grid, xi, rtol=1e-12)):
        raise ValueError(f"xi={xi} is not a grid point of this experiment")
    idx = int(np.argmin(np.abs(exp.xi_grid - xi)))
    spec = exp.operator
    m = spec.m
    for probe in (exp.T * 1e-3, exp.T * 0.5, exp.T):
        characteristic_roots(spec, probe, None, xi)  # strict hyperbolicity gate
    jb = float(jbracket(xi))
    sup_a = spec.sup_abs()
    coeffs = spec.coeffs

    sample_times = np.linspace(0.0, exp.T, exp.n_samples)
    if u0 is None:
        u0 = exp.initial_vector(idx)
    U = np.asarray(u0, dtype=complex).copy()
    norms = np.empty(exp.n_samples)
    norms[0] = float(np.linalg.norm(U))

    base_h = exp.step_factor * step_scale
    inv_jb = 1.0 / jb
    denom_fixed = jb * sup_a + 1.0

    def rate(t):
        tt = t if t > inv_jb else inv_jb
        return max(
            (_scalar_rate(c, tt) for c in coeffs if c is not None and c.profile != "constant"),
            default=0.0,
        )

    if m == 2:
        a2 = coeffs[0]
        a1 = coeffs[1]
        c2 = xi * xi / jb
        c1 = xi

        def last_row(t):
            lo = (_scalar_value(a2, t) * c2) if a2 is not None else 0.0
            hi = (_scalar_value(a1, t) * c1) if a1 is not None else 0.0
            return lo, hi

        u1, u2 = complex(U[0]), complex(U[1])
        t = 0.0
        for k in range(1, exp.n_samples):
            t_next = sample_times[k]
            while t < t_next - 1e-15 * exp.T:
                r = rate(t)
                h = base_h / (denom_fixed + (r / sup_a if sup_a > 0.0 else 0.0))
                if h < MIN_STEP:
                    raise StiffnessError(f"step {h:.3e} below floor at t={t:.6g}, xi={xi:.6g}")
                if t + h > t_next:
                    h = t_next - t
                p0, q0 = last_row(t)
                pm, qm = last_row(t + 0.5 * h)
                p1, q1 = last_row(t + h)
                # k1..k4 for U' = i A(t) U with A = [[0, jb], [p, q]]
                k1a = 1j * (jb * u2)
                k1b = 1j * (p0 * u1 + q0 * u2)
                v1, v2 = u1 + 0.5 * h * k1a, u2 + 0.5 * h * k1b
                k2a = 1j * (jb * v2)
                k2b = 1j * (pm * v1 + qm * v2)
                v1, v2 = u1 + 0.5 * h * k2a, u2 + 0.5 * h * k2b
                k3a = 1j * (jb * v2)
                k3b = 1j * (pm * v1 + qm * v2)
                v1, v2 = u1 + h * k3a, u2 + h * k3b
                k4a = 1j * (jb * v2)
                k4b = 1j * (p1 * v1 + q1 * v2)
                u1 = u1 + (h / 6.0) * (k1a + 2.0 * (k2a + k3a) + k4a)
                u2 = u2 + (h / 6.0) * (k1b + 2.0 * (k2b + k3b) + k4b)
                t += h
            norms[k] = math.sqrt(abs(u1) ** 2 + abs(u2) ** 2)
        return EnergyTrace.from_history(xi, sample_times, norms)

    # general order: assemble A(t) with numpy
    A = np.zeros((m, m), dtype=complex)
    A[np.arange(m - 1), np.arange(1, m)] = jb
    scale = np.array([xi ** (m - j) * jb ** (-(m - 1 - j)) for j in range(m)])

    def fill(t, out):
        for j, c in enumerate(coeffs):
            out[m - 1, j] = (_scalar_value(c, t) * scale[j]) if c is not None else 0.0
        return out

    t = 0.0
    for k in range(1, exp.n_samples):
        t_next = sample_times[k]
        while t < t_next - 1e-15 * exp.T:
            r = rate(t)
            h = base_h / (denom_fixed + (r / sup_a if sup_a > 0.0 else 0.0))
            if h < MIN_STEP:
                raise StiffnessError(f"step {h:.3e} below floor at t={t:.6g}, xi={xi:.6g}")
            if t + h > t_next:
                h = t_next - t
            A0 = fill(t, A).copy()
            Am = fill(t + 0.5 * h, A).copy()
            A1 = fill(t + h, A).copy()
            k1 = 1j * (A0 @ U)
            k2 = 1j * (Am @ (U + 0.5 * h * k1))
            k3 = 1j * (Am @ (U + 0.5 * h * k2))
            k4 = 1j * (A1 @ (U + h * k3))
            U = U + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
            t += h
        norms[k] = float(np.linalg.norm(U))
    return EnergyTrace.from_history(xi, sample_times, norms)


def amplification(trace: EnergyTrace) -> float:
    """Sup over recorded times of |U(t)| / |U(0)|."""
    if trace.norms.size == 0:
        raise ValueError("empty trace")
    if trace.norms[0] == 0.0:
        return 0.0
    return float(np.max(trace.norms) / trace.norms[0])


def estimate_loss(exp: FrequencyExperiment, traces) -> LossEstimate:
    """Growth exponent of amplification over the top two decades of the sweep."""
    xi = np.array([tr.xi for tr in traces], dtype=float)
    amps = np.array([amplification(tr) for tr in traces], dtype=float)
    order = np.argsort(xi)
    xi, amps = xi[order], amps[order]
    if xi[-1] / xi[0] < 100.0 * (1.0 - 1e-9):
        raise ValueError("loss fit needs at least two decades of frequencies")
    mask = xi >= xi[-1] / 100.0 * (1.0 - 1e-9)
    if int(mask.sum()) < 8:
        raise ValueError("loss fit needs at least 8 frequencies in the top two decades")
    slope, stderr = fit_loglog_slope(jbracket(xi[mask]), amps[mask])
    return LossEstimate(slope, stderr, float(xi[mask][0]), float(xi[-1]))


def sobolev_energy(traces, nu: float, spectrum):
    """Weighted H^nu-style energy across a finitely supported spectrum.

    ``spectrum`` maps each trace's frequency to a nonnegative initial weight
    (dict or aligned array).  Returns (times, E_nu(t)).
    """
    if not traces:
        raise ValueError("no traces")
    times = traces[0].times
    total = np.zeros_like(times)
    for k, tr in enumerate(traces):
        if isinstance(spectrum, dict):
            w = float(spectrum.get(tr.xi, 0.0))
        else:
            w = float(spectrum[k])
        if w < 0.0:
            raise ValueError("spectrum weights must be nonnegative")
        if tr.times.shape != times.shape or np.max(np.abs(tr.times - times)) > 1e-12:
            raise ValueError("traces must share a common sample grid")
        total += w * float(jbracket(tr.xi)) ** (2.0 * nu) * tr.norms**2
    return times, np.sqrt(total)


def closed_form_constant_trace(exp: FrequencyExperiment, xi: float, u0=None) -> EnergyTrace:
    """Plane-wave solution for time-constant coefficients (oracle path).

    U(t) = M1 diag(exp(i lam_k t)) M1^-1 U(0), evaluated on the experiment's
    sample grid.
    """
    spec = exp.operator
    for c in spec.coeffs:
        if c is not None and c.profile != "constant":
            raise ValueError("closed form available for constant coefficients only")
    roots = characteristic_roots(spec, 0.1, None, xi)
    V = m1_symbol(roots, xi).entries
    Vinv = m1_inverse_symbol(roots, xi).entries
    if u0 is None:
        u0 = np.zeros(spec.m, dtype=complex)
        u0[0] = 1.0
    times = np.linspace(0.0, exp.T, exp.n_samples)
    coords = Vinv @ np.asarray(u0, dtype=complex)
    phases = np.exp(1j * np.outer(times, roots.lam))  # (n_t, m)
    U = (V @ (phases * coords[None, :]).T).T
    norms = np.linalg.norm(U, axis=1)
    return EnergyTrace.from_history(xi, times, norms)
