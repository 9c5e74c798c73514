"""Heisenberg-picture mode evolution as Bogoliubov coefficient ODEs.

For each (mode, polarization) the annihilation operator evolves inside the
closed two-dimensional span of the initial ladder operators,
a(t) = u(t) a(0) + v(t) a(0)^dag, because the effective Hamiltonian is
quadratic.  The coefficients obey

    du/dt = -i w(t) u + s (w_dot / 2w) conj(v)
    dv/dt = -i w(t) v + s (w_dot / 2w) conj(u)

with s = +1 for the timelike polarization (lambda = 0) and s = -1 for the
spatial ones (lambda = 1, 2, 3).  |u|^2 - |v|^2 = 1 is an exact invariant of
the flow and is monitored every step as a hard correctness gate.  |v|^2 is
the vacuum photon yield for every polarization: the indefinite-metric
commutator sign and the metric weight of the number operator cancel.

Two integration frames are available.  The fixed frame integrates the
equations as written.  The rotating frame integrates the slow envelopes
U = u exp(i Phi), V = v exp(i Phi) with Phi(t) the accumulated phase
integral of w, and optionally applies the resonance-averaged (constant
coupling) reduction, which permits much larger steps on resonance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import rk4_uv_fixed, rk4_uv_rotating
from .modes import CavityMode, build_mode
from .permittivity import SinusoidalProfile

__all__ = [
    "StepSizeError",
    "SymplecticDriftError",
    "BogoliubovState",
    "EvolutionResult",
    "polarization_sign",
    "rhs",
    "evolve",
    "vacuum_number",
    "MAX_OMEGA_DT",
]

# Hard precondition on step resolution: dt * max instantaneous frequency.
MAX_OMEGA_DT = 0.1

_SIGNS = (1.0, -1.0, -1.0, -1.0)


class StepSizeError(ValueError):
    """dt does not resolve the fastest mode frequency."""


class SymplecticDriftError(RuntimeError):
    """|u|^2 - |v|^2 drifted beyond the configured tolerance."""

    def __init__(self, drift, t_at_max, tol):
        self.drift = drift
        self.t_at_max = t_at_max
        self.tol = tol
        super().__init__(
            f"symplectic invariant drifted to {drift:.3e} at t={t_at_max:.6g} "
            f"(tolerance {tol:.3e}); reduce dt")


def polarization_sign(lam):
    """Coupling sign: +1 for the timelike branch, -1 for spatial ones."""
    if lam not in (0, 1, 2, 3):
        raise ValueError(f"polarization index must be 0..3, got {lam}")
    return _SIGNS[lam]


def rhs(u, v, omega, omega_dot_over_omega, sign):
    """Right-hand side of the coefficient ODEs at one instant."""
    if omega <= 0.0:
        raise ValueError(f"omega must be positive, got {omega}")
    c = sign * 0.5 * omega_dot_over_omega
    du = -1j * omega * u + c * np.conj(v)
    dv = -1j * omega * v + c * np.conj(u)
    return du, dv


@dataclass(frozen=True)
class BogoliubovState:
    """Snapshot of one (mode, polarization) trajectory."""

    u: complex
    v: complex
    sign_tag: int
    t: float

    @property
    def symplectic_residual(self):
        return abs(abs(self.u) ** 2 - abs(self.v) ** 2 - 1.0)

    @property
    def photon_number(self):
        return abs(self.v) ** 2


@dataclass
class EvolutionResult:
    """Sampled (u, v) trajectories for every requested (mode, lambda).

    u and v have shape (n_modes, n_polarizations, n_samples) on a single
    shared time grid.  epsilon_t holds the permittivity at the sample times
    so instantaneous frequencies can be reconstructed downstream.
    """

    t: np.ndarray
    modes: list
    polarizations: tuple
    u: np.ndarray
    v: np.ndarray
    epsilon_t: np.ndarray
    max_symplectic_drift: float
    drift_time: float
    n_steps: int
    dt: float
    frame: str
    rwa: bool

    def _mode_index(self, mode):
        if isinstance(mode, int):
            return mode
        target = tuple(mode.n) if isinstance(mode, CavityMode) else tuple(mode)
        for i, m in enumerate(self.modes):
            if tuple(m.n) == target:
                return i
        raise KeyError(f"mode {target} not in evolution result")

    def entry(self, mode, lam):
        """(u(t), v(t)) series for one mode and polarization."""
        i = self._mode_index(mode)
        j = self.polarizations.index(lam)
        return self.u[i, j], self.v[i, j]

    def photon_numbers(self):
        """|v|^2 with shape (n_modes, n_polarizations, n_samples)."""
        return np.abs(self.v) ** 2

    def symplectic_residuals(self):
        return np.abs(np.abs(self.u) ** 2 - np.abs(self.v) ** 2 - 1.0)

    def index_of_time(self, t):
        i = int(np.argmin(np.abs(self.t - t)))
        spacing = self.dt if self.t.size < 2 else max(self.dt, self.t[1] - self.t[0])
        if abs(self.t[i] - t) > 0.5 * spacing + 1e-12:
            raise ValueError(f"t={t} not on the sample grid (nearest {self.t[i]})")
        return i

    def state_at(self, mode, lam, t):
        i = self.index_of_time(t)
        u, v = self.entry(mode, lam)
        return BogoliubovState(u=complex(u[i]), v=complex(v[i]),
                               sign_tag=int(polarization_sign(lam)), t=float(self.t[i]))


def vacuum_number(entry):
    """Mean photon number measured from the vacuum: |v|^2 for every lambda.

    The metric weight of the number operator and the indefinite commutator
    sign cancel, so the timelike polarization counts positively exactly like
    the spatial ones (docs/physics_notes.md, metric bookkeeping).
    """
    if isinstance(entry, BogoliubovState):
        return entry.photon_number
    u, v, _sign = entry
    return abs(v) ** 2


def _sample_steps(n_steps, stride):
    steps = np.arange(0, n_steps + 1, stride, dtype=np.int64)
    if steps[-1] != n_steps:
        steps = np.append(steps, np.int64(n_steps))
    return steps


def _cumulative_phase(f, dt):
    """Phase integral of f on the half grid tau_j = j*dt/2.

    Composite Simpson over full steps; quartic-accurate half-panel rule for
    the odd points.  Returns an array aligned with f.
    """
    n_half = f.shape[0]
    n_steps = (n_half - 1) // 2
    phi = np.empty_like(f)
    phi[0] = 0.0
    f0 = f[0:-2:2]
    f1 = f[1:-1:2]
    f2 = f[2::2]
    full = (dt / 6.0) * (f0 + 4.0 * f1 + f2)
    phi[2::2] = np.cumsum(full)
    even_base = phi[0:-2:2]
    phi[1:-1:2] = even_base + (dt / 24.0) * (5.0 * f0 + 8.0 * f1 - f2)
    return phi


def evolve(config, profile=None, modes=None, polarizations=None, *,
           frame="fixed", rwa=False, initial=None, sample_stride=None,
           symplectic_tol=None, t_max=None, dt=None):
    """Integrate all requested (mode, lambda) trajectories.

    Parameters default to the config: profile from the medium section, modes
    from run.modes, polarizations from run.polarizations.  frame is "fixed"
    or "rotating"; rwa=True (rotating frame only) replaces the oscillating
    coupling with its resonant average, in which case only modes resonant
    with the drive couple, mirroring the single-mode selection of the
    resonance condition.

    initial optionally overrides the (u, v) = (1, 0) start; it must satisfy
    |u0|^2 - |v0|^2 = 1.  Trajectories are mutually independent and the
    result is identical to serial execution by construction.

    Raises StepSizeError when dt * max omega > 0.1 and SymplecticDriftError
    when the invariant drifts beyond tolerance (a hard failure: it is the
    one exact conservation law available).
    """
    if profile is None:
        profile = config.build_profile()
    if modes is None:
        modes = config.build_modes()
    else:
        modes = [m if isinstance(m, CavityMode) else build_mode(m, config.cavity_side_L)
                 for m in modes]
    if polarizations is None:
        polarizations = config.polarizations
    polarizations = tuple(polarizations)
    t_max = config.t_max if t_max is None else float(t_max)
    dt = config.dt if dt is None else float(dt)
    if symplectic_tol is None:
        symplectic_tol = config.tolerance("symplectic")
    if rwa and frame != "rotating":
        raise ValueError("rwa=True requires frame='rotating'")
    if frame not in ("fixed", "rotating"):
        raise ValueError(f"unknown frame {frame!r}")
    if dt <= 0.0 or t_max < 0.0:
        raise ValueError("need dt > 0 and t_max >= 0")
    if initial is None:
        initial = (1.0 + 0.0j, 0.0 + 0.0j)
    u0, v0 = complex(initial[0]), complex(initial[1])
    if abs((abs(u0) ** 2 - abs(v0) ** 2) - 1.0) > 1e-9:
        raise ValueError("initial (u0, v0) must satisfy |u0|^2 - |v0|^2 = 1")

    n_steps = max(1, int(round(t_max / dt)))
    tau = np.arange(2 * n_steps + 1, dtype=float) * (0.5 * dt)
    eps = np.asarray(profile.eval(tau), dtype=float)
    deps = np.asarray(profile.deriv(tau), dtype=float)
    if np.any(eps <= 0.0):
        raise ValueError("profile is non-positive inside the run window")
    inv_sqrt_eps = 1.0 / np.sqrt(eps)
    coupling = -deps / (4.0 * eps)          # omega_dot / (2 omega)

    if frame == "rotating" and rwa:
        if not isinstance(profile, SinusoidalProfile):
            raise ValueError("rwa reduction needs a sinusoidal profile")
        g = (profile.delta * profile.drive_omega
             / (2.0 * profile.epsilon_static))

    # Step resolution: the fastest rate the integrator must resolve is the
    # mode frequency in the fixed frame, twice that for the oscillating
    # rotating-frame coupling, and only the envelope rate g once the
    # resonance-averaged reduction removes every fast scale.
    omega_max = max(m.k_norm for m in modes) * float(np.max(inv_sqrt_eps))
    if frame == "fixed":
        fast_rate = omega_max
    elif rwa:
        fast_rate = g
    else:
        fast_rate = 2.0 * omega_max
    if dt * fast_rate > MAX_OMEGA_DT + 1e-12:
        raise StepSizeError(
            f"dt*fastest_rate = {dt * fast_rate:.4g} exceeds {MAX_OMEGA_DT}; "
            f"reduce run.dt below {MAX_OMEGA_DT / fast_rate:.4g}")

    if sample_stride is None:
        sample_stride = max(1, n_steps // 2000)
    steps = _sample_steps(n_steps, int(sample_stride))
    t_grid = steps.astype(float) * dt

    if frame == "rotating":
        phi_unit = _cumulative_phase(inv_sqrt_eps, dt)

    n_modes = len(modes)
    n_pol = len(polarizations)
    n_keep = steps.shape[0]
    u_all = np.empty((n_modes, n_pol, n_keep), dtype=np.complex128)
    v_all = np.empty((n_modes, n_pol, n_keep), dtype=np.complex128)
    drift_global = 0.0
    drift_t = 0.0

    for i, mode in enumerate(modes):
        if frame == "fixed":
            omega_m = mode.k_norm * inv_sqrt_eps
            for j, lam in enumerate(polarizations):
                sign = polarization_sign(lam)
                u_s, v_s, drift, dstep = rk4_uv_fixed(
                    u0, v0, sign, omega_m, coupling, dt, n_steps, steps)
                u_all[i, j] = u_s
                v_all[i, j] = v_s
                if drift > drift_global:
                    drift_global = drift
                    drift_t = dstep * dt
        else:
            if rwa:
                omega_static = mode.k_norm / math.sqrt(profile.epsilon_static)
                resonant = abs(omega_static - profile.drive_omega) \
                    <= 1e-9 * profile.drive_omega
                const = -g if resonant else 0.0
                kappa = np.full(2 * n_steps + 1, const, dtype=np.complex128)
            else:
                kappa = (coupling
                         * np.exp(2j * mode.k_norm * phi_unit)).astype(np.complex128)
            phase = np.exp(-1j * mode.k_norm * phi_unit[2 * steps])
            for j, lam in enumerate(polarizations):
                sign = polarization_sign(lam)
                u_s, v_s, drift, dstep = rk4_uv_rotating(
                    u0, v0, sign, kappa, dt, n_steps, steps)
                u_all[i, j] = u_s * phase
                v_all[i, j] = v_s * phase
                if drift > drift_global:
                    drift_global = drift
                    drift_t = dstep * dt

    if drift_global > symplectic_tol:
        raise SymplecticDriftError(drift_global, drift_t, symplectic_tol)

    return EvolutionResult(
        t=t_grid,
        modes=list(modes),
        polarizations=polarizations,
        u=u_all,
        v=v_all,
        epsilon_t=eps[2 * steps],
        max_symplectic_drift=drift_global,
        drift_time=drift_t,
        n_steps=n_steps,
        dt=dt,
        frame=frame,
        rwa=rwa,
    )
