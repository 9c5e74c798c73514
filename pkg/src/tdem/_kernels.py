"""Fixed-step RK4 inner loops, JIT-compiled.

All kernels consume permittivity-derived coefficient arrays sampled on the
half grid tau_j = j*dt/2 (length 2*n_steps + 1), so the RK4 stages at t,
t + dt/2 and t + dt read precomputed values and the kernels stay independent
of the profile kind.  Trajectories are integrated serially per call; results
are bit-reproducible.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def rk4_uv_fixed(u0, v0, sign, omega, coupling, dt, n_steps, sample_steps):
    """Integrate du/dt = -i*w*u + s*c*conj(v), dv/dt = -i*w*v + s*c*conj(u).

    omega and coupling (= omega_dot / 2 omega) live on the half grid.  The
    symplectic invariant |u|^2 - |v|^2 is monitored every step; the kernel
    returns (u_samples, v_samples, drift_max, step_of_max_drift).
    """
    n_keep = sample_steps.shape[0]
    u_out = np.empty(n_keep, dtype=np.complex128)
    v_out = np.empty(n_keep, dtype=np.complex128)
    u = u0
    v = v0
    drift_max = 0.0
    drift_step = 0
    idx = 0
    if n_keep > 0 and sample_steps[0] == 0:
        u_out[0] = u
        v_out[0] = v
        idx = 1
    for n in range(n_steps):
        j0 = 2 * n
        j1 = j0 + 1
        j2 = j0 + 2
        w0 = omega[j0]
        w1 = omega[j1]
        w2 = omega[j2]
        c0 = sign * coupling[j0]
        c1 = sign * coupling[j1]
        c2 = sign * coupling[j2]

        k1u = -1j * w0 * u + c0 * np.conj(v)
        k1v = -1j * w0 * v + c0 * np.conj(u)
        au = u + 0.5 * dt * k1u
        av = v + 0.5 * dt * k1v
        k2u = -1j * w1 * au + c1 * np.conj(av)
        k2v = -1j * w1 * av + c1 * np.conj(au)
        bu = u + 0.5 * dt * k2u
        bv = v + 0.5 * dt * k2v
        k3u = -1j * w1 * bu + c1 * np.conj(bv)
        k3v = -1j * w1 * bv + c1 * np.conj(bu)
        cu = u + dt * k3u
        cv = v + dt * k3v
        k4u = -1j * w2 * cu + c2 * np.conj(cv)
        k4v = -1j * w2 * cv + c2 * np.conj(cu)

        u = u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)

        d = abs((u.real * u.real + u.imag * u.imag)
                - (v.real * v.real + v.imag * v.imag) - 1.0)
        if d > drift_max:
            drift_max = d
            drift_step = n + 1
        if idx < n_keep and sample_steps[idx] == n + 1:
            u_out[idx] = u
            v_out[idx] = v
            idx += 1
    return u_out, v_out, drift_max, drift_step


@njit(cache=True)
def rk4_uv_rotating(u0, v0, sign, kappa, dt, n_steps, sample_steps):
    """Rotating-frame envelopes: dU/dt = s*kappa*conj(V), dV/dt = s*kappa*conj(U).

    kappa is the complex coupling (omega_dot/2 omega) * exp(2i*Phi) on the
    half grid, or a constant array for the resonance-averaged reduction.
    Same invariant monitoring and sampling contract as rk4_uv_fixed.
    """
    n_keep = sample_steps.shape[0]
    u_out = np.empty(n_keep, dtype=np.complex128)
    v_out = np.empty(n_keep, dtype=np.complex128)
    u = u0
    v = v0
    drift_max = 0.0
    drift_step = 0
    idx = 0
    if n_keep > 0 and sample_steps[0] == 0:
        u_out[0] = u
        v_out[0] = v
        idx = 1
    for n in range(n_steps):
        j0 = 2 * n
        j1 = j0 + 1
        j2 = j0 + 2
        c0 = sign * kappa[j0]
        c1 = sign * kappa[j1]
        c2 = sign * kappa[j2]

        k1u = c0 * np.conj(v)
        k1v = c0 * np.conj(u)
        au = u + 0.5 * dt * k1u
        av = v + 0.5 * dt * k1v
        k2u = c1 * np.conj(av)
        k2v = c1 * np.conj(au)
        bu = u + 0.5 * dt * k2u
        bv = v + 0.5 * dt * k2v
        k3u = c1 * np.conj(bv)
        k3v = c1 * np.conj(bu)
        cu = u + dt * k3u
        cv = v + dt * k3v
        k4u = c2 * np.conj(cv)
        k4v = c2 * np.conj(cu)

        u = u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)

        d = abs((u.real * u.real + u.imag * u.imag)
                - (v.real * v.real + v.imag * v.imag) - 1.0)
        if d > drift_max:
            drift_max = d
            drift_step = n + 1
        if idx < n_keep and sample_steps[idx] == n + 1:
            u_out[idx] = u
            v_out[idx] = v
            idx += 1
    return u_out, v_out, drift_max, drift_step


@njit(cache=True)
def rk4_classical(q0, qd0, k2, eps, deps, d2eps, temporal, dt, n_steps,
                  sample_steps):
    """Per-mode reduction of the gauge-fixed wave equations.

    spatial  (temporal=False):  eps*q'' +   deps*q' + k2*q = 0
    temporal (temporal=True):   eps*q'' + 2*deps*q' + (k2 + d2eps)*q = 0

    Coefficient arrays live on the half grid.  Returns sampled (q, q_dot).
    """
    n_keep = sample_steps.shape[0]
    q_out = np.empty(n_keep, dtype=np.complex128)
    qd_out = np.empty(n_keep, dtype=np.complex128)
    q = q0
    qd = qd0
    idx = 0
    if n_keep > 0 and sample_steps[0] == 0:
        q_out[0] = q
        qd_out[0] = qd
        idx = 1
    for n in range(n_steps):
        j0 = 2 * n
        j1 = j0 + 1
        j2 = j0 + 2

        if temporal:
            a1 = -(2.0 * deps[j0] * qd + (k2 + d2eps[j0]) * q) / eps[j0]
        else:
            a1 = -(deps[j0] * qd + k2 * q) / eps[j0]
        k1q = qd
        k1d = a1

        aq = q + 0.5 * dt * k1q
        ad = qd + 0.5 * dt * k1d
        if temporal:
            a2 = -(2.0 * deps[j1] * ad + (k2 + d2eps[j1]) * aq) / eps[j1]
        else:
            a2 = -(deps[j1] * ad + k2 * aq) / eps[j1]
        k2q = ad
        k2d = a2

        bq = q + 0.5 * dt * k2q
        bd = qd + 0.5 * dt * k2d
        if temporal:
            a3 = -(2.0 * deps[j1] * bd + (k2 + d2eps[j1]) * bq) / eps[j1]
        else:
            a3 = -(deps[j1] * bd + k2 * bq) / eps[j1]
        k3q = bd
        k3d = a3

        cq = q + dt * k3q
        cd = qd + dt * k3d
        if temporal:
            a4 = -(2.0 * deps[j2] * cd + (k2 + d2eps[j2]) * cq) / eps[j2]
        else:
            a4 = -(deps[j2] * cd + k2 * cq) / eps[j2]
        k4q = cd
        k4d = a4

        q = q + (dt / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        qd = qd + (dt / 6.0) * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)

        if idx < n_keep and sample_steps[idx] == n + 1:
            q_out[idx] = q
            qd_out[idx] = qd
            idx += 1
    return q_out, qd_out
