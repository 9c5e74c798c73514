"""Classical per-mode reductions of the gauge-fixed wave equations.

Under the plane-wave ansatz the temporal and spatial potential components
reduce exactly to per-mode oscillators,

    temporal:  eps q'' + 2 eps_dot q' + (k^2 + eps_ddot) q = 0
    spatial:   eps q'' +   eps_dot q' +  k^2 q             = 0

which coincide for constant eps (d'Alembert limit) and diverge whenever
eps_dot is nonzero.  Two measured behaviors mirror the quantum dynamics: a
slow monotone ramp of eps scales the oscillation envelope as eps^(-1/4)
(adiabatic invariant of d/dt(eps q') + k^2 q = 0), and the resonant
sinusoidal drive grows the envelope exponentially at the squeeze rate
mu = delta*Omega/(2 eps).

Envelope extraction uses successive |q| maxima with quadratic peak
interpolation and least-squares fits on the log amplitude; nothing here
assumes the expected answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import rk4_classical
from .permittivity import SinusoidalProfile, TabulatedProfile

__all__ = [
    "ClassicalModeState",
    "ClassicalTrajectory",
    "GrowthFit",
    "AdiabaticFit",
    "classical_rhs",
    "integrate_classical",
    "envelope_peaks",
    "mode_energy",
    "parametric_growth_rate",
    "adiabatic_amplitude_check",
    "ramp_profile",
]

BRANCHES = ("temporal", "spatial")


@dataclass
class ClassicalModeState:
    """Instantaneous amplitude state of one classical mode."""

    q: complex
    q_dot: complex
    component: str
    k_norm: float

    def __post_init__(self):
        if self.component not in BRANCHES:
            raise ValueError(f"component must be one of {BRANCHES}")


def classical_rhs(state, profile, t):
    """First-order form (dq/dt, dq_dot/dt) of the branch ODE at time t."""
    eps = profile.eval(t)
    if eps <= 0.0:
        raise ValueError("epsilon must be positive")
    deps = profile.deriv(t)
    k2 = state.k_norm ** 2
    if state.component == "temporal":
        d2eps = profile.deriv2(t)
        acc = -(2.0 * deps * state.q_dot + (k2 + d2eps) * state.q) / eps
    else:
        acc = -(deps * state.q_dot + k2 * state.q) / eps
    return state.q_dot, acc


def mode_energy(q, q_dot, k_norm, epsilon_t):
    """Energy-like quantity (1/2) eps |q'|^2 + (1/2) k^2 |q|^2."""
    return 0.5 * epsilon_t * np.abs(q_dot) ** 2 + 0.5 * k_norm ** 2 * np.abs(q) ** 2


@dataclass
class ClassicalTrajectory:
    """Sampled (q, q_dot) series for one branch."""

    t: np.ndarray
    q: np.ndarray
    q_dot: np.ndarray
    branch: str
    k_norm: float
    dt: float

    def amplitude(self):
        return np.abs(self.q)


def integrate_classical(profile, k_norm, branch, t_max, dt, *,
                        q0=1.0 + 0.0j, qd0=0.0 + 0.0j, sample_stride=1):
    """Fixed-step RK4 integration of one branch of the mode equations."""
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}")
    if dt <= 0.0 or t_max <= 0.0:
        raise ValueError("need dt > 0 and t_max > 0")
    n_steps = max(1, int(round(t_max / dt)))
    tau = np.arange(2 * n_steps + 1, dtype=float) * (0.5 * dt)
    eps = np.asarray(profile.eval(tau), dtype=float)
    deps = np.asarray(profile.deriv(tau), dtype=float)
    d2eps = np.asarray(profile.deriv2(tau), dtype=float)
    if np.any(eps <= 0.0):
        raise ValueError("profile is non-positive inside the run window")

    steps = np.arange(0, n_steps + 1, int(sample_stride), dtype=np.int64)
    if steps[-1] != n_steps:
        steps = np.append(steps, np.int64(n_steps))
    q_s, qd_s = rk4_classical(complex(q0), complex(qd0), k_norm ** 2,
                              eps, deps, d2eps, branch == "temporal",
                              dt, n_steps, steps)
    return ClassicalTrajectory(t=steps.astype(float) * dt, q=q_s, q_dot=qd_s,
                               branch=branch, k_norm=k_norm, dt=dt)


def envelope_peaks(t, amplitude):
    """Quadratically interpolated local maxima of a sampled |q| series.

    Returns (t_peak, a_peak) arrays.  Endpoints are excluded; plateaus are
    skipped (strict local maxima only).
    """
    t = np.asarray(t, dtype=float)
    a = np.asarray(amplitude, dtype=float)
    left = a[:-2]
    mid = a[1:-1]
    right = a[2:]
    is_peak = (mid > left) & (mid > right)
    idx = np.nonzero(is_peak)[0] + 1
    if idx.size == 0:
        return np.empty(0), np.empty(0)
    y0 = a[idx - 1]
    y1 = a[idx]
    y2 = a[idx + 1]
    denom = y0 - 2.0 * y1 + y2
    shift = np.zeros_like(y1)
    nonflat = denom != 0.0
    shift[nonflat] = 0.5 * (y0[nonflat] - y2[nonflat]) / denom[nonflat]
    dt_local = t[idx + 1] - t[idx]
    t_peak = t[idx] + shift * dt_local
    a_peak = y1 - 0.125 * (y0 - y2) ** 2 / np.where(nonflat, denom, 1.0)
    return t_peak, a_peak


def _linear_fit(x, y):
    """Least-squares slope/intercept plus R^2."""
    coeffs = np.polyfit(x, y, 1)
    fit = np.polyval(coeffs, x)
    ss_res = float(np.sum((y - fit) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 0.0
    return float(coeffs[0]), float(coeffs[1]), r2


@dataclass(frozen=True)
class GrowthFit:
    """Fitted exponential envelope rate for a resonant drive."""

    mu: float
    r_squared: float
    n_peaks: int
    inconclusive: bool


def parametric_growth_rate(profile, k_norm, t_max, dt=None, *,
                           branch="spatial", fit_window=(1.5, 3.0)):
    """Fit the envelope of |q| to A*exp(mu*t) under a sinusoidal drive.

    The fit runs on log peak amplitude over the window where the expected
    squeeze argument g*t lies in fit_window (early times are not yet in the
    single-exponential regime).  The fit is flagged inconclusive when
    R^2 < 0.99.
    """
    if not isinstance(profile, SinusoidalProfile):
        raise ValueError("parametric growth needs a sinusoidal profile")
    ratio = profile.delta / profile.epsilon_static
    if ratio > 1e-2:
        raise ValueError(f"require delta/epsilon <= 1e-2, got {ratio}")
    g = profile.delta * profile.drive_omega / (2.0 * profile.epsilon_static)
    if g > 0.0 and t_max * g < fit_window[1]:
        raise ValueError(
            f"t_max spans g*t = {t_max * g:.3g} < {fit_window[1]}; run longer")
    omega0 = k_norm / math.sqrt(profile.epsilon_static)
    if dt is None:
        dt = 0.02 / max(omega0, 2.0 * profile.drive_omega)
    stride = max(1, int(round((2.0 * math.pi / omega0) / (24.0 * dt))))

    traj = integrate_classical(profile, k_norm, branch, t_max, dt,
                               sample_stride=stride)
    t_pk, a_pk = envelope_peaks(traj.t, traj.amplitude())
    if g > 0.0:
        lo, hi = fit_window[0] / g, fit_window[1] / g
    else:
        lo, hi = 0.0, t_max
    mask = (t_pk >= lo) & (t_pk <= hi) & (a_pk > 0.0)
    if np.count_nonzero(mask) < 5:
        return GrowthFit(mu=0.0, r_squared=0.0, n_peaks=int(np.count_nonzero(mask)),
                         inconclusive=True)
    mu, _, r2 = _linear_fit(t_pk[mask], np.log(a_pk[mask]))
    return GrowthFit(mu=mu, r_squared=r2, n_peaks=int(np.count_nonzero(mask)),
                     inconclusive=(r2 < 0.99))


@dataclass(frozen=True)
class AdiabaticFit:
    """Fitted envelope-vs-epsilon exponent on a slow ramp."""

    exponent: float
    amplitude_ratio: float
    r_squared: float
    n_peaks: int
    inconclusive: bool


def ramp_profile(eps_start, eps_end, t_total, n_nodes=4001):
    """Monotone C2 ramp from eps_start to eps_end over [0, t_total].

    Tabulated on a dense grid with a smootherstep shape so the spline
    interpolant (and its derivatives) are effectively exact.  The table is
    flat-padded slightly past t_total (the shape has vanishing first and
    second derivatives at the ends, so the padding stays C2).
    """
    if t_total <= 0.0:
        raise ValueError("t_total must be positive")
    x = np.linspace(0.0, 1.02, n_nodes)
    xc = np.clip(x, 0.0, 1.0)
    s = xc ** 3 * (6.0 * xc ** 2 - 15.0 * xc + 10.0)
    return TabulatedProfile(x * t_total, eps_start + (eps_end - eps_start) * s)


def adiabatic_amplitude_check(profile, k_norm, t_max, dt=None, *,
                              min_periods=100.0):
    """Measure the exponent p in envelope ~ eps^p on a slow monotone ramp.

    The fit regresses log peak amplitude on log eps at the peak times; the
    edges of the run are trimmed.  A ramp shorter than min_periods
    oscillation periods is flagged inconclusive instead of fitted.
    """
    eps0 = float(profile.eval(0.0))
    eps1 = float(profile.eval(t_max))
    omega0 = k_norm / math.sqrt(eps0)
    omega1 = k_norm / math.sqrt(eps1)
    slow_omega = min(omega0, omega1)
    n_periods = t_max * slow_omega / (2.0 * math.pi)
    if n_periods < min_periods:
        return AdiabaticFit(exponent=0.0, amplitude_ratio=1.0, r_squared=0.0,
                            n_peaks=0, inconclusive=True)
    fast_omega = max(omega0, omega1)
    if dt is None:
        dt = 0.02 / fast_omega
    stride = max(1, int(round((2.0 * math.pi / fast_omega) / (24.0 * dt))))

    traj = integrate_classical(profile, k_norm, "spatial", t_max, dt,
                               sample_stride=stride)
    t_pk, a_pk = envelope_peaks(traj.t, traj.amplitude())
    mask = (t_pk > 0.02 * t_max) & (t_pk < 0.98 * t_max) & (a_pk > 0.0)
    if np.count_nonzero(mask) < 10:
        return AdiabaticFit(exponent=0.0, amplitude_ratio=1.0, r_squared=0.0,
                            n_peaks=int(np.count_nonzero(mask)), inconclusive=True)
    t_pk = t_pk[mask]
    a_pk = a_pk[mask]
    eps_pk = np.asarray(profile.eval(t_pk), dtype=float)
    if abs(eps1 - eps0) < 1e-12:
        # Constant medium: exponent is 0 by definition of the measurement.
        ratio = float(a_pk[-1] / a_pk[0])
        return AdiabaticFit(exponent=0.0, amplitude_ratio=ratio, r_squared=1.0,
                            n_peaks=t_pk.size, inconclusive=False)
    p, _, r2 = _linear_fit(np.log(eps_pk), np.log(a_pk))
    ratio = float(a_pk[-1] / a_pk[0])
    return AdiabaticFit(exponent=p, amplitude_ratio=ratio, r_squared=r2,
                        n_peaks=t_pk.size, inconclusive=False)
