"""Cavity mode lattice, polarization tetrads, and the null 4-vector.

A cubic cavity of side L with periodic boundary conditions carries plane-wave
modes labelled by integer triples n = (n_x, n_y, n_z), with wave vector
k = 2*pi*n/L and instantaneous frequency omega = |k|/sqrt(eps(t)).

Each mode carries four real polarization 4-vectors e(0)..e(3) (timelike, two
transverse, longitudinal).  They are orthonormal and complete with respect to
the metric diag(1,-1,-1,-1) and depend only on the direction of k, never on
the permittivity, so they are built once per mode.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "METRIC",
    "CavityMode",
    "build_mode",
    "eigenfrequency",
    "null_vector",
    "minkowski_dot",
    "tetrad_gram",
    "completeness_residual",
    "mode_norm_check",
]

# Fixed flat metric, signature (+,-,-,-).  Never recomputed.
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class CavityMode:
    """One cavity mode: lattice triple, wave vector and polarization tetrad.

    tetrad[lam] is the 4-vector e(lam); rows are ordered timelike, transverse,
    transverse, longitudinal.
    """

    n: tuple
    k: np.ndarray
    k_norm: float
    k_parallel: float
    tetrad: np.ndarray
    is_axis_degenerate: bool

    def __post_init__(self):
        self.k.setflags(write=False)
        self.tetrad.setflags(write=False)


def build_mode(n, L):
    """Construct the CavityMode for integer triple n in a box of side L.

    The zero mode (0,0,0) is rejected: it carries no propagating field and
    the 1/sqrt(2*omega) normalization of the operator expansion is singular
    there.

    When k has no component in the x-y plane the generic tetrad formula
    divides by k_parallel = 0; the degenerate convention
    e(1)=(0,1,0,0), e(2)=(0,0,1,0), e(3)=(0,0,0,sign(k_z)) is used instead.
    """
    n = tuple(int(c) for c in n)
    if len(n) != 3:
        raise ValueError(f"mode label must be an integer triple, got {n!r}")
    if n == (0, 0, 0):
        raise ValueError("zero mode (0,0,0) is excluded: omega=0 is singular")
    if L <= 0.0:
        raise ValueError(f"cavity side L must be positive, got {L}")

    k = np.array([2.0 * math.pi * c / L for c in n], dtype=float)
    k1, k2, k3 = k
    k_par = math.hypot(k1, k2)
    k_norm = math.sqrt(k1 * k1 + k2 * k2 + k3 * k3)

    tetrad = np.zeros((4, 4))
    tetrad[0, 0] = 1.0
    degenerate = (n[0] == 0 and n[1] == 0)
    if degenerate:
        tetrad[1] = (0.0, 1.0, 0.0, 0.0)
        tetrad[2] = (0.0, 0.0, 1.0, 0.0)
        tetrad[3] = (0.0, 0.0, 0.0, math.copysign(1.0, k3))
    else:
        tetrad[1] = (0.0, k2 / k_par, -k1 / k_par, 0.0)
        tetrad[2] = (0.0, k1 * k3 / (k_norm * k_par),
                     k2 * k3 / (k_norm * k_par),
                     -k_par / k_norm)
        tetrad[3] = (0.0, k1 / k_norm, k2 / k_norm, k3 / k_norm)

    return CavityMode(n=n, k=k, k_norm=k_norm, k_parallel=k_par,
                      tetrad=tetrad, is_axis_degenerate=degenerate)


def eigenfrequency(mode, epsilon_t):
    """Instantaneous frequency omega = |k| / sqrt(eps(t)).

    epsilon_t may be a scalar or an array of sampled permittivity values.
    """
    eps = np.asarray(epsilon_t, dtype=float)
    if np.any(eps <= 0.0):
        raise ValueError("epsilon must be positive")
    out = mode.k_norm / np.sqrt(eps)
    return float(out) if out.ndim == 0 else out


def null_vector(mode, epsilon_t):
    """The 4-vector ell = (sqrt(eps)*omega, k1, k2, k3); null on dispersion."""
    omega = eigenfrequency(mode, epsilon_t)
    return np.array([math.sqrt(epsilon_t) * omega, *mode.k])


def minkowski_dot(a, b):
    """Four-vector inner product with signature (+,-,-,-)."""
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]


def tetrad_gram(mode):
    """Gram matrix G[l,m] = e(l) . e(m); equals METRIC for a valid tetrad."""
    e = mode.tetrad
    return e @ METRIC @ e.T


def completeness_residual(mode):
    """Max abs entry of sum_lm g^lm e(l)_mu e(m)_nu - g_mu_nu.

    The tetrad rows are metric-orthonormal, so the sum telescopes back to the
    metric itself; the residual is pure floating-point noise for a correct
    tetrad.
    """
    e = mode.tetrad
    recon = e.T @ METRIC @ e
    return float(np.max(np.abs(recon - METRIC)))


def _box_exponential_integral(dk, L):
    """Integral of exp(i*dk*x) over [0, L], evaluated in closed form."""
    if dk == 0.0:
        return complex(L, 0.0)
    return (cmath.exp(1j * dk * L) - 1.0) / (1j * dk)


def mode_norm_check(mode, other=None, epsilon_t=1.0, L=None):
    """Residual of the weighted mode-function inner product.

    Evaluates | integral_V eps * phi_k phi_k'^* d^3x  -  delta_kk' | using
    the closed-form box integral of the lattice exponentials.  The mode
    functions carry a 1/sqrt(eps) amplitude, so the eps weight cancels and
    the result is exactly the lattice Kronecker delta up to rounding.
    """
    if other is None:
        other = mode
    if L is None:
        # Recover L from the wave vector; any nonzero component works.
        for c, kc in zip(mode.n, mode.k):
            if c != 0:
                L = 2.0 * math.pi * c / kc
                break
    if epsilon_t <= 0.0:
        raise ValueError("epsilon must be positive")

    # eps * (1/sqrt(eps))^2 = 1; the box integrals give L^3 * delta_kk'.
    integral = complex(1.0, 0.0)
    for kc, kc2 in zip(mode.k, other.k):
        integral *= _box_exponential_integral(kc - kc2, L)
    integral /= L ** 3
    delta = 1.0 if mode.n == other.n else 0.0
    return abs(integral - delta)
