"""Closed-form resonance results under the rotating-wave approximation.

On resonance (drive frequency equal to the static fundamental frequency)
the oscillating two-photon coupling averages to a constant squeeze
Hamiltonian of strength (1/4)(delta/eps)*Omega acting on the fundamental
mode.  The squeeze parameter grows linearly, r(t) = g t with
g = delta*Omega/(2 eps), and the vacuum photon number per polarization is
sinh^2(r) -- identical for all four polarizations.  With an initial thermal
population n_bar in a transverse polarization, that polarization's count is
n_bar + sinh^2(r)(1 + 2 n_bar); the timelike/longitudinal pair is not
enhanced because their initial contributions cancel under the physical-state
constraint, leaving sinh^2(r) each.

This module is purely analytic; it is both the fast path and the reference
the numerical dynamics and the truncated-Fock oracle are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "RwaPrediction",
    "RwaNumbers",
    "rwa_coefficient",
    "squeeze_rate",
    "vacuum_number_rwa",
    "thermal_number_rwa",
    "fundamental_frequency",
]

ALL_POLARIZATIONS = (0, 1, 2, 3)


def fundamental_frequency(L, epsilon):
    """Static frequency of the lowest mode: 2*pi/(L*sqrt(eps)).

    Resonance means the drive runs at exactly this value.
    """
    if L <= 0.0 or epsilon <= 0.0:
        raise ValueError("need L > 0 and epsilon > 0")
    return 2.0 * math.pi / (L * math.sqrt(epsilon))


def rwa_coefficient(epsilon, delta, drive_omega):
    """Strength of the averaged squeeze Hamiltonian, (1/4)(delta/eps)*Omega."""
    if 2.0 * delta >= epsilon:
        raise ValueError("require 2*delta < epsilon")
    return 0.25 * (delta / epsilon) * drive_omega


def squeeze_rate(epsilon, delta, drive_omega):
    """Growth rate of the squeeze parameter, g = delta*Omega/(2*eps)."""
    if 2.0 * delta >= epsilon:
        raise ValueError("require 2*delta < epsilon")
    return delta * drive_omega / (2.0 * epsilon)


@dataclass(frozen=True)
class RwaPrediction:
    """Resonant drive parameters and the derived squeeze rate."""

    epsilon: float
    delta: float
    drive_omega: float

    def __post_init__(self):
        if 2.0 * self.delta >= self.epsilon:
            raise ValueError("require 2*delta < epsilon")

    @property
    def rate(self):
        return squeeze_rate(self.epsilon, self.delta, self.drive_omega)

    @property
    def coefficient(self):
        return rwa_coefficient(self.epsilon, self.delta, self.drive_omega)

    def r(self, t):
        """Squeeze parameter r(t) = g t."""
        return self.rate * t


@dataclass(frozen=True)
class RwaNumbers:
    """Per-polarization predicted photon numbers and their sum."""

    t: float
    r: float
    per_lambda: dict

    @property
    def total(self):
        return sum(self.per_lambda.values())


def vacuum_number_rwa(prediction, t, lambdas=ALL_POLARIZATIONS):
    """Vacuum photon numbers at time t: sinh^2(r) for every polarization."""
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    r = prediction.r(t)
    n = math.sinh(r) ** 2
    return RwaNumbers(t=float(t), r=r, per_lambda={lam: n for lam in lambdas})


def thermal_number_rwa(prediction, t, n_bar, fundamental=True):
    """Photon numbers with initial transverse thermal occupation.

    n_bar maps transverse polarization indices (1 and/or 2) to nonnegative
    means.  Occupations of the timelike/longitudinal pair are not accepted
    here: their initial contributions enter observables only through the
    constraint cancellation, leaving a bare sinh^2(r) each.

    For non-fundamental modes (fundamental=False) nothing is generated and
    the initial transverse population simply persists.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    for lam, value in n_bar.items():
        if lam not in (1, 2):
            raise ValueError(
                f"n_bar accepts transverse indices 1 and 2 only, got {lam}")
        if value < 0.0:
            raise ValueError(f"n_bar[{lam}] must be >= 0, got {value}")

    r = prediction.r(t)
    generated = math.sinh(r) ** 2 if fundamental else 0.0
    per_lambda = {}
    for lam in ALL_POLARIZATIONS:
        if lam in (1, 2):
            nb = float(n_bar.get(lam, 0.0))
            per_lambda[lam] = nb + generated * (1.0 + 2.0 * nb)
        else:
            per_lambda[lam] = generated
    return RwaNumbers(t=float(t), r=r, per_lambda=per_lambda)
