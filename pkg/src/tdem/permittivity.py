"""Time-dependent permittivity profiles with analytic derivatives.

All dynamics in this package are driven by a scalar relative permittivity
eps(t) > 0 and its first two time derivatives.  The modulation enters the
mode equations only through the logarithmic rates

    kappa_dot/kappa = eps_dot / (2 eps)        (kappa = sqrt(eps))
    omega_dot/omega = -eps_dot / (2 eps)

which are exact negatives of each other because every instantaneous mode
frequency scales as 1/sqrt(eps).
"""

from __future__ import annotations

import csv

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = [
    "PermittivityProfile",
    "ConstantProfile",
    "SinusoidalProfile",
    "TabulatedProfile",
    "TimeReversedProfile",
    "log_derivative_ratios",
]


class PermittivityProfile:
    """Base class: eval/deriv/deriv2 accept scalars or numpy arrays."""

    kind = "abstract"

    def eval(self, t):
        raise NotImplementedError

    def deriv(self, t):
        raise NotImplementedError

    def deriv2(self, t):
        raise NotImplementedError

    def log_derivative_ratios(self, t):
        """Return (kappa_dot/kappa, omega_dot/omega) at time t."""
        eps = self.eval(t)
        kd = self.deriv(t) / (2.0 * eps)
        return kd, -kd


class ConstantProfile(PermittivityProfile):
    """Static medium eps(t) = eps."""

    kind = "constant"

    def __init__(self, epsilon):
        if epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {epsilon}")
        self.epsilon_static = float(epsilon)

    def eval(self, t):
        if np.ndim(t) == 0:
            return self.epsilon_static
        return np.full(np.shape(t), self.epsilon_static)

    def deriv(self, t):
        if np.ndim(t) == 0:
            return 0.0
        return np.zeros(np.shape(t))

    deriv2 = deriv

    def __repr__(self):
        return f"ConstantProfile(epsilon={self.epsilon_static})"


class SinusoidalProfile(PermittivityProfile):
    """Harmonically modulated medium eps(t) = eps + 2*delta*sin(2*Omega*t).

    Requires 2*delta < eps so that eps(t) stays strictly positive for all t.
    Derivatives are closed-form; a numerically differentiated fast drive
    would lose precision in the second derivative.
    """

    kind = "sinusoidal"

    def __init__(self, epsilon_static, delta, drive_omega):
        if epsilon_static <= 0.0:
            raise ValueError(f"epsilon must be positive, got {epsilon_static}")
        if delta < 0.0:
            raise ValueError(f"delta must be nonnegative, got {delta}")
        if 2.0 * delta >= epsilon_static:
            raise ValueError(
                "permittivity may become non-positive: require 2*delta < epsilon "
                f"(got delta={delta}, epsilon={epsilon_static})"
            )
        if delta > 0.0 and drive_omega <= 0.0:
            raise ValueError("drive_omega must be positive when delta > 0")
        self.epsilon_static = float(epsilon_static)
        self.delta = float(delta)
        self.drive_omega = float(drive_omega)

    def eval(self, t):
        t = np.asarray(t, dtype=float) if np.ndim(t) else t
        return self.epsilon_static + 2.0 * self.delta * np.sin(2.0 * self.drive_omega * t)

    def deriv(self, t):
        t = np.asarray(t, dtype=float) if np.ndim(t) else t
        return 4.0 * self.delta * self.drive_omega * np.cos(2.0 * self.drive_omega * t)

    def deriv2(self, t):
        t = np.asarray(t, dtype=float) if np.ndim(t) else t
        return -8.0 * self.delta * self.drive_omega ** 2 * np.sin(2.0 * self.drive_omega * t)

    def __repr__(self):
        return (f"SinusoidalProfile(epsilon={self.epsilon_static}, "
                f"delta={self.delta}, drive_omega={self.drive_omega})")


class TabulatedProfile(PermittivityProfile):
    """Sampled drive waveform, cubic-spline interpolated.

    Derivatives are the analytic derivatives of the interpolant.  Evaluation
    outside the sample grid is an error; there is no extrapolation.
    """

    kind = "tabulated"

    def __init__(self, t_grid, eps_grid):
        t_grid = np.asarray(t_grid, dtype=float)
        eps_grid = np.asarray(eps_grid, dtype=float)
        if t_grid.ndim != 1 or t_grid.size < 4:
            raise ValueError("tabulated profile needs at least 4 samples")
        if eps_grid.shape != t_grid.shape:
            raise ValueError("t and epsilon grids must have equal length")
        if not np.all(np.diff(t_grid) > 0.0):
            raise ValueError("tabulated time grid must be strictly increasing")
        if np.any(eps_grid <= 0.0):
            raise ValueError("tabulated epsilon values must be positive")
        self.t_grid = t_grid
        self.eps_grid = eps_grid
        self._spline = CubicSpline(t_grid, eps_grid)
        self._dspline = self._spline.derivative(1)
        self._d2spline = self._spline.derivative(2)

    @classmethod
    def from_csv(cls, path):
        """Load a two-column (t, epsilon) CSV with a header row."""
        rows = []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or len(header) < 2:
                raise ValueError(f"{path}: expected header row with two columns")
            for row in reader:
                if not row:
                    continue
                rows.append((float(row[0]), float(row[1])))
        if not rows:
            raise ValueError(f"{path}: no data rows")
        t, eps = zip(*rows)
        return cls(np.array(t), np.array(eps))

    def _clamped(self, t):
        # Refuse genuine extrapolation but absorb integrator rounding dust
        # at the grid edges (half-grid endpoints can overshoot by ~1 ulp).
        tmin, tmax = self.t_grid[0], self.t_grid[-1]
        tol = 1e-9 * (tmax - tmin)
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < tmin - tol) or np.any(t_arr > tmax + tol):
            raise ValueError(
                f"t outside tabulated range [{tmin}, {tmax}]; extrapolation disabled"
            )
        return np.clip(t_arr, tmin, tmax)

    def eval(self, t):
        out = self._spline(self._clamped(t))
        return float(out) if np.ndim(t) == 0 else out

    def deriv(self, t):
        out = self._dspline(self._clamped(t))
        return float(out) if np.ndim(t) == 0 else out

    def deriv2(self, t):
        out = self._d2spline(self._clamped(t))
        return float(out) if np.ndim(t) == 0 else out

    def __repr__(self):
        return (f"TabulatedProfile(n={self.t_grid.size}, "
                f"t=[{self.t_grid[0]}, {self.t_grid[-1]}])")


class TimeReversedProfile(PermittivityProfile):
    """View of a base profile run backwards from a time horizon T.

    eval(t) = base(T - t); derivatives pick up the chain-rule signs exactly.
    Used for time-reversal consistency checks of the mode dynamics.
    """

    kind = "reversed"

    def __init__(self, base, t_horizon):
        self.base = base
        self.t_horizon = float(t_horizon)

    def eval(self, t):
        return self.base.eval(self.t_horizon - np.asarray(t, dtype=float))

    def deriv(self, t):
        return -self.base.deriv(self.t_horizon - np.asarray(t, dtype=float))

    def deriv2(self, t):
        return self.base.deriv2(self.t_horizon - np.asarray(t, dtype=float))

    def __repr__(self):
        return f"TimeReversedProfile({self.base!r}, t_horizon={self.t_horizon})"


def log_derivative_ratios(profile, t):
    """Module-level alias for profile.log_derivative_ratios(t)."""
    return profile.log_derivative_ratios(t)
