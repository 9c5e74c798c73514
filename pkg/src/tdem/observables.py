"""Physical-state constraint handling and the headline observables.

The covariant quantization keeps all four polarizations; physical states
satisfy a constraint linking the timelike and longitudinal ladder operators,
which at t = 0 forces equal timelike and longitudinal mean occupations.
Those contributions then cancel in the initial energy.  Once the
permittivity varies, the cancellation fails: the driven evolution populates
both branches and their weighted sum

    E_unphys(t) = sum_k omega_k(t) * [ N3(t) - N0_signed(t) ]

is carried entirely by the longitudinal part of the electric field (the
magnetic field and the transverse electric field contain no timelike or
longitudinal content).  On resonance with a vacuum start this reduces to
2 * omega_1 * sinh^2(r).  A volume-averaged rms longitudinal field follows
from (1/2) eps <E_par^2> V = E_unphys, and the displacement-field boundary
condition turns it into a surface charge density,

    sigma = 2 sinh(r) eps^(1/4) sqrt(pi) / L^2       (canonical output)

quoted here exactly as printed in the source analysis.  An independent
re-derivation through the energy route gives the same structure with
sqrt(2 pi) instead of sqrt(pi); both values are reported side by side in
diagnostics (see docs/physics_notes.md for the derivation and the
discrepancy discussion).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import sigma_to_si
from .rwa import RwaPrediction, fundamental_frequency

__all__ = [
    "ConstraintViolationError",
    "InitialOccupation",
    "ConstraintCheck",
    "SurfaceChargeReport",
    "check_constraint",
    "unphysical_energy",
    "surface_charge",
    "sigma_natural_law",
]


class ConstraintViolationError(ValueError):
    """Initial occupations violate the timelike/longitudinal balance."""


@dataclass(frozen=True)
class InitialOccupation:
    """Per-polarization mean photon numbers at t = 0, ordered lambda = 0..3."""

    n_bar: tuple

    def __post_init__(self):
        occ = tuple(float(x) for x in self.n_bar)
        if len(occ) != 4:
            raise ValueError("n_bar needs four entries (lambda = 0..3)")
        if any(x < 0.0 for x in occ):
            raise ValueError(f"occupations must be >= 0, got {occ}")
        object.__setattr__(self, "n_bar", occ)

    @classmethod
    def vacuum(cls):
        return cls((0.0, 0.0, 0.0, 0.0))

    def __getitem__(self, lam):
        return self.n_bar[lam]


@dataclass(frozen=True)
class ConstraintCheck:
    passed: bool
    residual: float


def check_constraint(occ):
    """Physical-state balance at t = 0: n_bar[3] - n_bar[0] must vanish.

    Failing is a result, not an error; downstream consumers that require a
    physical initial state raise ConstraintViolationError themselves.
    """
    residual = occ[3] - occ[0]
    return ConstraintCheck(passed=(residual == 0.0), residual=residual)


def _require_physical(occ):
    chk = check_constraint(occ)
    if not chk.passed:
        raise ConstraintViolationError(
            "initial occupations violate the timelike/longitudinal balance: "
            f"n_bar[3] - n_bar[0] = {chk.residual} (must be 0)")
    return chk


def unphysical_energy(modes, evolution, occ, t):
    """Energy carried by the timelike/longitudinal pair at time t.

    Uses the signed timelike expectation: with the indefinite commutator the
    vacuum-evolved timelike number is -|v0|^2 before metric weighting, so

        N3(t) = n3 + |v3|^2 (1 + 2 n3)
        N0_signed(t) = n0 + |v0|^2 (2 n0 - 1)

    and each mode contributes omega_k(t) * (N3 - N0_signed); for a physical
    start with |v0| = |v3| this collapses to omega_k(t)*(|v3|^2 + |v0|^2)
    and vanishes identically at t = 0.
    """
    _require_physical(occ)
    for lam in (0, 3):
        if lam not in evolution.polarizations:
            raise ValueError(
                f"evolution lacks polarization {lam}; run with 0 and 3 included")
    idx = evolution.index_of_time(t)
    eps_t = float(evolution.epsilon_t[idx])
    n0 = occ[0]
    n3 = occ[3]
    total = 0.0
    for mode in modes:
        omega_t = mode.k_norm / math.sqrt(eps_t)
        _, v0 = evolution.entry(mode, 0)
        _, v3 = evolution.entry(mode, 3)
        av0 = abs(v0[idx]) ** 2
        av3 = abs(v3[idx]) ** 2
        n3_t = n3 + av3 * (1.0 + 2.0 * n3)
        n0_signed_t = n0 + av0 * (2.0 * n0 - 1.0)
        total += omega_t * (n3_t - n0_signed_t)
    return total


def sigma_natural_law(epsilon, r, L, prefactor=math.sqrt(math.pi)):
    """Surface charge density in natural units, 2 sinh(r) eps^(1/4) pf / L^2."""
    return 2.0 * math.sinh(r) * epsilon ** 0.25 * prefactor / L ** 2


@dataclass(frozen=True)
class SurfaceChargeReport:
    """Surface charge and supporting quantities at one time."""

    t: float
    r: float
    unphysical_energy: float
    e_longitudinal_rms: float
    sigma_natural: float
    sigma_alt_prefactor: float
    sigma_si: float | None = None


def surface_charge(epsilon, delta, drive_omega, t, L=1.0, *, si_scale=None,
                   occupation=None):
    """Closed-form resonant surface charge density at time t.

    Valid for a vacuum (or constraint-passing) initial state under the
    resonant drive; (drive_omega * t) must be supplied in one coherent unit
    system.  With si_scale present the natural value (cavity units, L = 1)
    is converted to C/m^2; requesting SI output without a scale raises.

    sigma_natural is the printed closed form (sqrt(pi) prefactor);
    sigma_alt_prefactor carries the sqrt(2 pi) variant from the independent
    energy-route re-derivation.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if occupation is not None:
        _require_physical(occupation)
    pred = RwaPrediction(epsilon=epsilon, delta=delta, drive_omega=drive_omega)
    r = pred.r(t)
    if r > 700.0:
        raise ValueError(
            f"squeeze parameter r = {r:.4g} overflows sinh; check that t and "
            "the drive frequency are given in one coherent unit system")

    omega1 = fundamental_frequency(L, epsilon)
    energy = 2.0 * omega1 * math.sinh(r) ** 2
    volume = L ** 3
    e_rms = math.sqrt(2.0 * energy / (epsilon * volume))

    sigma_nat = sigma_natural_law(epsilon, r, L)
    sigma_alt = sigma_natural_law(epsilon, r, L, prefactor=math.sqrt(2.0 * math.pi))
    sigma_si = None
    if si_scale is not None:
        sigma_si = sigma_to_si(sigma_nat, si_scale)

    return SurfaceChargeReport(
        t=float(t), r=r, unphysical_energy=energy, e_longitudinal_rms=e_rms,
        sigma_natural=sigma_nat, sigma_alt_prefactor=sigma_alt, sigma_si=sigma_si)
