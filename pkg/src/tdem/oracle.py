"""Brute-force verification oracle in a truncated number basis.

States (or density matrices) are evolved by repeated small-step matrix
exponentials of the interaction Hamiltonian and photon numbers are measured
directly.  The stepping rule is deliberately dumb -- piecewise-constant
Hamiltonian, unconditionally unitary per step, step size capped by
norm(H)*dt <= 0.05 and by the drive period -- so the oracle stays simpler
and more trustworthy than the coefficient-ODE integrator it validates.  Its
phase quadrature and evolution path share no code with the dynamics module.

Two Hamiltonians are supported: the constant resonance-averaged squeeze
generator i*s*(adag^2 - a^2), and the full time-dependent two-photon drive
with coefficient (1/4)(kappa_dot/kappa)(t) and accumulated-phase factors
exp(+-2i*Phi(t)), which validates the rotating-wave reduction itself.

The indefinite metric of the timelike polarization is bookkeeping on
expectation values, not a different matrix representation: the truncated
ladder algebra stays positive-definite and the commutator sign enters only
through reported signed expectations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

__all__ = [
    "LeakageError",
    "TruncatedMode",
    "OracleRun",
    "ConstantSqueeze",
    "PermittivityDrive",
    "ladder_operators",
    "make_truncated_mode",
    "build_squeeze_hamiltonian",
    "CommutatorCheck",
    "verify_commutator_metric",
    "thermal_density_matrix",
    "evolve_oracle",
]

# Step-size cap: norm(H) * dt and (phase rate) * dt both stay below this.
MAX_ACTION_PER_STEP = 0.05


class LeakageError(RuntimeError):
    """Truncation-boundary population exceeded the configured threshold."""

    def __init__(self, t_first, leakage, threshold):
        self.t_first = t_first
        self.leakage = leakage
        self.threshold = threshold
        super().__init__(
            f"basis-top leakage {leakage:.3e} exceeded threshold "
            f"{threshold:.3e} at t={t_first:.6g}; increase the cutoff")


def ladder_operators(cutoff):
    """Annihilation/creation matrices in the D-dimensional number basis."""
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    a = np.zeros((cutoff, cutoff))
    for n in range(1, cutoff):
        a[n - 1, n] = math.sqrt(n)
    return a, a.T.copy()


@dataclass(frozen=True)
class TruncatedMode:
    """Ladder and number operators at cutoff D, plus the commutator sign.

    metric_sign is +1 for the bosonic (spatial) polarizations and -1 for the
    timelike one, i.e. the right-hand side of [a, a_dag] for that branch.
    """

    cutoff: int
    a: np.ndarray
    a_dag: np.ndarray
    number: np.ndarray
    metric_sign: int = 1


def make_truncated_mode(cutoff, metric_sign=1):
    if metric_sign not in (1, -1):
        raise ValueError(f"metric_sign must be +1 or -1, got {metric_sign}")
    a, adag = ladder_operators(cutoff)
    return TruncatedMode(cutoff=cutoff, a=a, a_dag=adag, number=adag @ a,
                         metric_sign=metric_sign)


def build_squeeze_hamiltonian(strength, cutoff):
    """H = i*strength*(adag^2 - a^2), Hermitian by construction.

    At cutoff 2 the two-photon ladder leaves the basis entirely and H is the
    zero matrix; that truncation behavior is intended.
    """
    a, adag = ladder_operators(cutoff)
    return 1j * strength * (adag @ adag - a @ a)


@dataclass(frozen=True)
class CommutatorCheck:
    """Residual of the ladder algebra plus the signed vacuum expectation."""

    residual: float
    vacuum_a_adag: float


def verify_commutator_metric(metric_sign, cutoff):
    """Check [a, a_dag] = 1 on the untruncated block.

    Truncation breaks only the last row/column.  The indefinite metric never
    changes the matrices; it flips the sign of reported expectations, e.g.
    the vacuum value of a a_dag is metric_sign * 1.
    """
    if cutoff < 3:
        raise ValueError(f"cutoff must be >= 3, got {cutoff}")
    mode = make_truncated_mode(cutoff, metric_sign)
    comm = mode.a @ mode.a_dag - mode.a_dag @ mode.a
    block = comm[:cutoff - 1, :cutoff - 1]
    residual = float(np.max(np.abs(block - np.eye(cutoff - 1))))
    return CommutatorCheck(residual=residual, vacuum_a_adag=float(metric_sign))


def thermal_density_matrix(n_bar, cutoff):
    """Diagonal Bose-Einstein density matrix, truncated and renormalized."""
    if n_bar < 0.0:
        raise ValueError(f"n_bar must be >= 0, got {n_bar}")
    if n_bar == 0.0:
        rho = np.zeros((cutoff, cutoff))
        rho[0, 0] = 1.0
        return rho
    x = n_bar / (1.0 + n_bar)
    weights = x ** np.arange(cutoff)
    weights /= weights.sum()
    return np.diag(weights)


@dataclass(frozen=True)
class ConstantSqueeze:
    """Resonance-averaged generator: H = i*strength*(adag^2 - a^2)."""

    strength: float
    cutoff: int


@dataclass(frozen=True)
class PermittivityDrive:
    """Full interaction-picture two-photon drive for one mode.

    H(t) = c(t) * (i e^{2i Phi} adag^2 - i e^{-2i Phi} a^2) with
    c(t) = (1/4) * kappa_dot/kappa = eps_dot/(8 eps) and Phi the accumulated
    integral of omega(t) = k_norm/sqrt(eps(t)).
    """

    profile: object
    k_norm: float
    cutoff: int


@dataclass
class OracleRun:
    """Measured time series from one truncated-basis evolution."""

    t: np.ndarray
    expected_n: np.ndarray
    leakage: np.ndarray
    norm: np.ndarray
    final_state: np.ndarray
    cutoff: int
    is_density: bool

    def final_number(self):
        return float(self.expected_n[-1])


def _operator_norm_bound(h):
    # Cheap upper bound on the spectral norm (max absolute row sum).
    return float(np.max(np.sum(np.abs(h), axis=1)))


def _measure(state, is_density, n_diag, top_slice):
    if is_density:
        pops = np.real(np.diag(state))
        norm = float(np.sum(pops))
    else:
        pops = np.abs(state) ** 2
        norm = math.sqrt(float(np.sum(pops)))
    n_val = float(np.dot(n_diag, pops))
    leak = float(np.sum(pops[top_slice]))
    return n_val, leak, norm


def evolve_oracle(hamiltonian, initial, t_max, steps=None, *,
                  leakage_threshold=1e-8, leakage_fraction=0.1):
    """Evolve an initial state and measure the photon number directly.

    hamiltonian is a ConstantSqueeze or PermittivityDrive spec.  initial is
    "vacuum", ("thermal", n_bar), a state vector, or a density matrix.
    steps defaults to the smallest count satisfying the per-step action cap.

    Raises LeakageError at the first sample where the population of the top
    basis slice exceeds leakage_threshold.
    """
    if t_max < 0.0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    cutoff = hamiltonian.cutoff

    if isinstance(initial, str) and initial == "vacuum":
        state = np.zeros(cutoff, dtype=np.complex128)
        state[0] = 1.0
        is_density = False
    elif isinstance(initial, tuple) and len(initial) == 2 and initial[0] == "thermal":
        state = thermal_density_matrix(float(initial[1]), cutoff).astype(np.complex128)
        is_density = True
    elif isinstance(initial, np.ndarray):
        state = initial.astype(np.complex128)
        if state.ndim == 1:
            is_density = False
        elif state.ndim == 2 and state.shape[0] == state.shape[1]:
            is_density = True
        else:
            raise ValueError("initial array must be a vector or a square matrix")
        if state.shape[0] != cutoff:
            raise ValueError(
                f"initial state dimension {state.shape[0]} != cutoff {cutoff}")
    else:
        raise ValueError(f"unrecognized initial state spec {initial!r}")

    n_diag = np.arange(cutoff, dtype=float)
    n_top = max(1, int(round(leakage_fraction * cutoff)))
    top_slice = slice(cutoff - n_top, cutoff)

    if isinstance(hamiltonian, ConstantSqueeze):
        h = build_squeeze_hamiltonian(hamiltonian.strength, cutoff)
        h_rate = _operator_norm_bound(h)
        if steps is None:
            steps = max(1, int(math.ceil(t_max * h_rate / MAX_ACTION_PER_STEP)))
        dt = t_max / steps
        u_step = expm(-1j * dt * h)
        step_generators = None
    elif isinstance(hamiltonian, PermittivityDrive):
        profile = hamiltonian.profile
        k_norm = hamiltonian.k_norm
        a, adag = ladder_operators(cutoff)
        adag2 = (adag @ adag).astype(np.complex128)
        a2 = (a @ a).astype(np.complex128)
        pair_norm = _operator_norm_bound(adag2)

        # Probe the coupling and phase rates to choose the default step.
        probe = np.linspace(0.0, max(t_max, 1e-30), 512)
        eps_probe = np.asarray(profile.eval(probe), dtype=float)
        c_probe = np.asarray(profile.deriv(probe), dtype=float) / (8.0 * eps_probe)
        h_rate = float(np.max(np.abs(c_probe))) * 2.0 * pair_norm
        phase_rate = 2.0 * k_norm / math.sqrt(float(np.min(eps_probe)))
        drive_rate = 2.0 * getattr(profile, "drive_omega", 0.0)
        if steps is None:
            rate = max(h_rate, phase_rate, drive_rate, 1e-30)
            steps = max(1, int(math.ceil(t_max * rate / MAX_ACTION_PER_STEP)))
        dt = t_max / steps

        # Midpoint-sampled Hamiltonian per step; the phase integral of
        # omega(t) is accumulated with a composite Simpson rule on the
        # oracle's own half grid.
        tau = np.arange(2 * steps + 1, dtype=float) * (0.5 * dt)
        eps = np.asarray(profile.eval(tau), dtype=float)
        omega = k_norm / np.sqrt(eps)
        coeff = np.asarray(profile.deriv(tau), dtype=float) / (8.0 * eps)
        phi = np.empty_like(omega)
        phi[0] = 0.0
        f0, f1, f2 = omega[0:-2:2], omega[1:-1:2], omega[2::2]
        phi[2::2] = np.cumsum((dt / 6.0) * (f0 + 4.0 * f1 + f2))
        phi[1:-1:2] = phi[0:-2:2] + (dt / 24.0) * (5.0 * f0 + 8.0 * f1 - f2)

        def step_generators():
            for n in range(steps):
                jm = 2 * n + 1                      # midpoint index
                up = 1j * coeff[jm] * np.exp(2j * phi[jm]) * adag2
                h_n = up + up.conj().T
                yield expm(-1j * dt * h_n)
        u_step = None
    else:
        raise ValueError(f"unrecognized Hamiltonian spec {hamiltonian!r}")

    t_grid = np.arange(steps + 1, dtype=float) * dt
    n_series = np.empty(steps + 1)
    leak_series = np.empty(steps + 1)
    norm_series = np.empty(steps + 1)

    n_val, leak, norm = _measure(state, is_density, n_diag, top_slice)
    n_series[0], leak_series[0], norm_series[0] = n_val, leak, norm
    if leak > leakage_threshold:
        raise LeakageError(0.0, leak, leakage_threshold)

    gens = step_generators() if step_generators is not None else None
    for n in range(steps):
        u = u_step if gens is None else next(gens)
        if is_density:
            state = u @ state @ u.conj().T
        else:
            state = u @ state
        n_val, leak, norm = _measure(state, is_density, n_diag, top_slice)
        n_series[n + 1], leak_series[n + 1], norm_series[n + 1] = n_val, leak, norm
        if leak > leakage_threshold:
            raise LeakageError(t_grid[n + 1], leak, leakage_threshold)

    return OracleRun(t=t_grid, expected_n=n_series, leakage=leak_series,
                     norm=norm_series, final_state=state, cutoff=cutoff,
                     is_density=is_density)
