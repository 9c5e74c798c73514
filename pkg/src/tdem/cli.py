"""Command-line surface: subcommand dispatch, sweeps, and validation.

Subcommands: simulate, rwa, oracle, sigma, classical, modes, sweep,
validate.  Every run writes its tables plus a manifest.json listing output
checksums; identical config and version reproduce identical output bytes.

Exit codes: 0 success, 1 validation-suite failure, 2 usage error,
3 invalid config, 4 runtime failure.  Failures print a machine-readable
JSON object {code, message, context} to stderr.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .classical import (adiabatic_amplitude_check, integrate_classical,
                        parametric_growth_rate, ramp_profile)
from .config import (ConfigError, SimulationConfig, config_to_dict,
                     load_config)
from .dynamics import StepSizeError, SymplecticDriftError, evolve
from .io import RunManifest, format_value, write_json, write_table
from .modes import (build_mode, completeness_residual, eigenfrequency,
                    minkowski_dot, mode_norm_check, null_vector, tetrad_gram,
                    METRIC)
from .observables import (InitialOccupation, check_constraint, surface_charge,
                          unphysical_energy)
from .oracle import (ConstantSqueeze, PermittivityDrive, evolve_oracle,
                     verify_commutator_metric)
from .permittivity import SinusoidalProfile, TimeReversedProfile
from .rwa import (RwaPrediction, rwa_coefficient, squeeze_rate,
                  thermal_number_rwa, vacuum_number_rwa)

ENV_CONFIG = "TDEM_CONFIG"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_RUNTIME = 4

# Default scenario used when a subcommand that can run standalone gets no
# config: unit-frequency fundamental (L = 2*pi), mild resonant drive.
_DEFAULT_DOC = {
    "cavity": {"L": 2.0 * math.pi},
    "medium": {"epsilon": 1.0, "delta": 1e-3, "omega": 1.0},
    "run": {"t_max": 200.0, "dt": 0.005, "modes": [[1, 0, 0]],
            "polarizations": [0, 1, 2, 3]},
}


def _fail(code, message, context=None):
    payload = {"code": code, "message": message, "context": context or {}}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    return code


def _load_cli_config(args, required=False):
    path = args.config or os.environ.get(ENV_CONFIG)
    if path:
        return load_config(Path(path))
    if required:
        raise ConfigError(
            f"config: required for this subcommand (pass --config or set {ENV_CONFIG})")
    return load_config(dict(_DEFAULT_DOC))


def _outdir(args):
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(args, subcommand, config):
    return RunManifest(tool="tdem", version=__version__, subcommand=subcommand,
                       config=None if config is None else config_to_dict(config),
                       argv=list(sys.argv[1:]))


def _sample_times(t_max, n=101):
    return np.linspace(0.0, t_max, n)


# ----------------------------------------------------------------------
# simulate
# ----------------------------------------------------------------------

def _run_simulate(config, outdir, fmt):
    result = evolve(config)
    numbers = result.photon_numbers()
    resid = result.symplectic_residuals()

    rows = []
    for i, _mode in enumerate(result.modes):
        for j, lam in enumerate(result.polarizations):
            u = result.u[i, j]
            v = result.v[i, j]
            for s in range(result.t.size):
                rows.append((result.t[s], i, lam,
                             u[s].real, u[s].imag, v[s].real, v[s].imag,
                             numbers[i, j, s], resid[i, j, s]))
    header = ["t", "mode_index", "lambda", "re_u", "im_u", "re_v", "im_v",
              "n_photons", "symplectic_residual"]
    ext = "csv" if fmt == "csv" else "json"
    ts_path = outdir / f"timeseries.{ext}"
    checksum = write_table(ts_path, header, rows, fmt)

    total_n = float(numbers[:, :, -1].sum())
    summary = {
        "t_end": float(result.t[-1]),
        "n_steps": result.n_steps,
        "max_symplectic_drift": result.max_symplectic_drift,
        "total_photons_t_end": total_n,
        "per_mode_lambda_t_end": {
            f"{tuple(m.n)}|{lam}": float(numbers[i, j, -1])
            for i, m in enumerate(result.modes)
            for j, lam in enumerate(result.polarizations)},
    }
    sum_path = outdir / "summary.json"
    sum_checksum = write_json(sum_path, summary)
    return [(ts_path, checksum), (sum_path, sum_checksum)], total_n


def cmd_simulate(args):
    config = _load_cli_config(args, required=True)
    outdir = _outdir(args)
    manifest = _manifest(args, "simulate", config)
    start = time.perf_counter()
    outputs, total_n = _run_simulate(config, outdir, args.format)
    manifest.wall_time_s = time.perf_counter() - start
    for path, checksum in outputs:
        manifest.add_output(path, checksum)
    manifest.write(outdir)
    if not args.quiet:
        print(f"simulate: total photons at t_end = {format_value(total_n)}")
    return EXIT_OK


# ----------------------------------------------------------------------
# rwa
# ----------------------------------------------------------------------

def cmd_rwa(args):
    config = _load_cli_config(args)
    outdir = _outdir(args)
    manifest = _manifest(args, "rwa", config)
    start = time.perf_counter()

    pred = RwaPrediction(epsilon=config.epsilon_static, delta=config.delta,
                         drive_omega=config.drive_omega)
    occ = config.initial_occupations
    n_bar = {lam: occ[lam] for lam in (1, 2) if occ[lam] > 0.0}
    rows = []
    for t in _sample_times(config.t_max):
        nums = thermal_number_rwa(pred, t, n_bar) if n_bar \
            else vacuum_number_rwa(pred, t)
        rows.append((t, nums.r, nums.per_lambda[0], nums.per_lambda[1],
                     nums.per_lambda[2], nums.per_lambda[3], nums.total))
    header = ["t", "r", "n_lambda0", "n_lambda1", "n_lambda2", "n_lambda3",
              "total"]
    ext = "csv" if args.format == "csv" else "json"
    path = outdir / f"rwa.{ext}"
    checksum = write_table(path, header, rows, args.format)

    manifest.wall_time_s = time.perf_counter() - start
    manifest.add_output(path, checksum)
    manifest.write(outdir)
    if not args.quiet:
        print(f"rwa: r(t_max) = {format_value(rows[-1][1])}, "
              f"total N = {format_value(rows[-1][6])}")
    return EXIT_OK


# ----------------------------------------------------------------------
# oracle
# ----------------------------------------------------------------------

def cmd_oracle(args):
    config = _load_cli_config(args)
    outdir = _outdir(args)
    manifest = _manifest(args, "oracle", config)
    start = time.perf_counter()

    cutoff = args.cutoff or config.fock_cutoff
    delta = config.delta if config.delta > 0.0 else 0.02
    omega = config.drive_omega if config.drive_omega > 0.0 \
        else config.fundamental_frequency()
    g = squeeze_rate(config.epsilon_static, delta, omega)
    t_max = args.r / g

    if args.mode == "rwa":
        spec = ConstantSqueeze(
            strength=rwa_coefficient(config.epsilon_static, delta, omega),
            cutoff=cutoff)
    else:
        profile = SinusoidalProfile(config.epsilon_static, delta, omega)
        k_norm = build_mode(config.mode_list[0], config.cavity_side_L).k_norm
        spec = PermittivityDrive(profile=profile, k_norm=k_norm, cutoff=cutoff)

    initial = "vacuum" if args.nbar == 0.0 else ("thermal", args.nbar)
    run = evolve_oracle(spec, initial, t_max, args.steps,
                        leakage_threshold=config.tolerance("leakage"))

    rows = list(zip(run.t, run.expected_n, run.leakage, run.norm))
    ext = "csv" if args.format == "csv" else "json"
    path = outdir / f"oracle.{ext}"
    checksum = write_table(path, ["t", "N", "leakage", "norm"], rows, args.format)

    manifest.wall_time_s = time.perf_counter() - start
    manifest.add_output(path, checksum)
    manifest.write(outdir)
    if not args.quiet:
        print(f"oracle[{args.mode}]: N(t_max) = {format_value(run.final_number())} "
              f"(sinh^2(r) = {format_value(math.sinh(args.r) ** 2)})")
    return EXIT_OK


# ----------------------------------------------------------------------
# sigma
# ----------------------------------------------------------------------

def cmd_sigma(args):
    config = _load_cli_config(args)
    outdir = _outdir(args)
    manifest = _manifest(args, "sigma", config)
    start = time.perf_counter()

    scale = config.si_scale
    # With an SI frequency pinned, run times are in seconds and the squeeze
    # argument uses the SI drive; otherwise everything is natural units.
    if scale is not None and scale.omega1_rad_s is not None:
        drive = scale.omega1_rad_s
    else:
        drive = config.drive_omega

    rows = []
    for t in _sample_times(config.t_max):
        report = surface_charge(config.epsilon_static, config.delta, drive, t,
                                L=1.0, si_scale=scale)
        rows.append((t, report.r, report.unphysical_energy,
                     report.sigma_natural, report.sigma_si,
                     report.sigma_alt_prefactor))
    header = ["t", "r", "unphysical_energy", "sigma_natural", "sigma_si",
              "sigma_alt_prefactor"]
    ext = "csv" if args.format == "csv" else "json"
    path = outdir / f"sigma.{ext}"
    checksum = write_table(path, header, rows, args.format)

    manifest.wall_time_s = time.perf_counter() - start
    manifest.add_output(path, checksum)
    manifest.write(outdir)
    if not args.quiet:
        last = rows[-1]
        si_txt = format_value(last[4]) if last[4] is not None else "n/a"
        print(f"sigma: r = {format_value(last[1])}, natural = "
              f"{format_value(last[3])}, SI = {si_txt}")
    return EXIT_OK


# ----------------------------------------------------------------------
# classical
# ----------------------------------------------------------------------

def cmd_classical(args):
    config = _load_cli_config(args)
    outdir = _outdir(args)
    manifest = _manifest(args, "classical", config)
    start = time.perf_counter()

    profile = config.build_profile()
    mode = build_mode(config.mode_list[0], config.cavity_side_L)
    omega0 = mode.k_norm / math.sqrt(config.epsilon_static)
    dt = min(config.dt, 0.02 / omega0)
    stride = max(1, int(round((2.0 * math.pi / omega0) / (24.0 * dt))))

    rows = []
    for branch in ("temporal", "spatial"):
        traj = integrate_classical(profile, mode.k_norm, branch,
                                   config.t_max, dt,
                                   q0=1.0 + 0.0j, qd0=-1j * omega0,
                                   sample_stride=stride)
        env = traj.amplitude()
        for s in range(traj.t.size):
            rows.append((traj.t[s], traj.q[s].real, traj.q[s].imag,
                         env[s], branch))
    ext = "csv" if args.format == "csv" else "json"
    path = outdir / f"classical.{ext}"
    checksum = write_table(path, ["t", "re_q", "im_q", "envelope", "branch"],
                           rows, args.format)

    summary = {}
    if config.delta > 0.0:
        g = squeeze_rate(config.epsilon_static, config.delta, config.drive_omega)
        fit = parametric_growth_rate(profile, mode.k_norm, t_max=3.2 / g)
        summary["growth"] = {"mu": fit.mu, "mu_expected": g,
                             "r_squared": fit.r_squared,
                             "inconclusive": fit.inconclusive}
    ramp_periods = 500.0
    t_ramp = ramp_periods * 2.0 * math.pi / omega0
    ramp = ramp_profile(config.epsilon_static, 4.0 * config.epsilon_static, t_ramp)
    afit = adiabatic_amplitude_check(ramp, mode.k_norm, t_ramp)
    summary["adiabatic"] = {"exponent": afit.exponent,
                            "exponent_expected": -0.25,
                            "amplitude_ratio": afit.amplitude_ratio,
                            "r_squared": afit.r_squared,
                            "inconclusive": afit.inconclusive}
    sum_path = outdir / "classical_summary.json"
    sum_checksum = write_json(sum_path, summary)

    manifest.wall_time_s = time.perf_counter() - start
    manifest.add_output(path, checksum)
    manifest.add_output(sum_path, sum_checksum)
    manifest.write(outdir)
    if not args.quiet:
        print(f"classical: summary written to {sum_path}")
    return EXIT_OK


# ----------------------------------------------------------------------
# modes
# ----------------------------------------------------------------------

def cmd_modes(args):
    config = _load_cli_config(args)
    outdir = _outdir(args)
    manifest = _manifest(args, "modes", config)
    start = time.perf_counter()

    rows = []
    for n in config.mode_list:
        mode = build_mode(n, config.cavity_side_L)
        omega0 = eigenfrequency(mode, config.epsilon_static)
        rows.append((n[0], n[1], n[2], mode.k[0], mode.k[1], mode.k[2],
                     mode.k_norm, mode.k_parallel, omega0,
                     mode.is_axis_degenerate))
    header = ["n_x", "n_y", "n_z", "k1", "k2", "k3", "k_norm", "k_parallel",
              "omega_t0", "is_axis_degenerate"]
    ext = "csv" if args.format == "csv" else "json"
    path = outdir / f"modes.{ext}"
    checksum = write_table(path, header, rows, args.format)

    manifest.wall_time_s = time.perf_counter() - start
    manifest.add_output(path, checksum)
    manifest.write(outdir)
    if not args.quiet:
        print(f"modes: {len(rows)} lattice entries written")
    return EXIT_OK


# ----------------------------------------------------------------------
# sweep
# ----------------------------------------------------------------------

def _sweep_worker(payload):
    doc, param, value, outdir_str, fmt = payload
    config = load_config(doc).with_value(param, value)
    outdir = Path(outdir_str)
    outdir.mkdir(parents=True, exist_ok=True)
    outputs, total_n = _run_simulate(config, outdir, fmt)
    manifest = RunManifest(tool="tdem", version=__version__, subcommand="simulate",
                           config=config_to_dict(config))
    for path, checksum in outputs:
        manifest.add_output(path, checksum)
    manifest.write(outdir)
    if config.delta > 0.0 and config.drive_omega > 0.0:
        report = surface_charge(config.epsilon_static, config.delta,
                                config.drive_omega, config.t_max, L=1.0)
        sigma_nat = report.sigma_natural
    else:
        sigma_nat = 0.0
    return value, total_n, sigma_nat


def cmd_sweep(args):
    config = _load_cli_config(args, required=True)
    if not args.values:
        raise ConfigError("sweep: empty value list")
    try:
        values = [float(v) for v in args.values.split(",") if v != ""]
    except ValueError:
        raise ConfigError(f"sweep: values must be numeric, got {args.values!r}") \
            from None
    if not values:
        raise ConfigError("sweep: empty value list")
    # Fail early on unknown / non-scalar parameter paths.
    config.with_value(args.param, values[0])

    outdir = _outdir(args)
    manifest = _manifest(args, "sweep", config)
    start = time.perf_counter()

    doc = config_to_dict(config)
    leaf = args.param.split(".")[-1]
    payloads = []
    for i, value in enumerate(values):
        subdir = outdir / f"{i:03d}_{leaf}_{value:.6g}"
        payloads.append((doc, args.param, value, str(subdir), args.format))

    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_worker, payloads))
    else:
        results = [_sweep_worker(p) for p in payloads]

    path = outdir / "sweep_summary.csv"
    checksum = write_table(path, ["value", "total_n_t_max", "sigma_natural_t_max"],
                           results, "csv")
    manifest.wall_time_s = time.perf_counter() - start
    manifest.add_output(path, checksum)
    manifest.write(outdir)
    if not args.quiet:
        print(f"sweep: {len(results)} runs complete")
    return EXIT_OK


# ----------------------------------------------------------------------
# validate
# ----------------------------------------------------------------------

def _random_mode_labels(rng, count, degenerate):
    labels = []
    while len(labels) < count:
        if degenerate:
            n = (0, 0, int(rng.integers(1, 7)) * int(rng.choice((-1, 1))))
        else:
            n = tuple(int(x) for x in rng.integers(-6, 7, size=3))
            if n == (0, 0, 0) or (n[0] == 0 and n[1] == 0):
                continue
        labels.append(n)
    return labels


def run_validation_suite():
    """Every module's invariant battery with fixed seeds.

    Returns a list of (check, passed, measured, threshold, sense) rows;
    sense is 'max' (pass iff measured <= threshold) or 'min'.
    """
    rows = []

    def check_max(name, measured, threshold):
        rows.append((name, bool(measured <= threshold), float(measured),
                     float(threshold), "max"))

    def check_min(name, measured, threshold):
        rows.append((name, bool(measured >= threshold), float(measured),
                     float(threshold), "min"))

    rng = np.random.default_rng(20240521)
    L = 2.0 * math.pi

    # --- tetrad algebra over random and axis-degenerate modes
    labels = _random_mode_labels(rng, 50, False) + _random_mode_labels(rng, 10, True)
    cavity_modes = [build_mode(n, L) for n in labels]
    orth = max(float(np.max(np.abs(tetrad_gram(m) - METRIC))) for m in cavity_modes)
    comp = max(completeness_residual(m) for m in cavity_modes)
    check_max("tetrad_orthonormality", orth, 1e-12)
    check_max("tetrad_completeness", comp, 1e-12)

    nullity = 0.0
    transv = 0.0
    for m in cavity_modes:
        for eps in (1.0, 2.5, 4.0):
            ell = null_vector(m, eps)
            nullity = max(nullity, abs(minkowski_dot(ell, ell)))
            transv = max(transv,
                         abs(minkowski_dot(ell, m.tetrad[1])),
                         abs(minkowski_dot(ell, m.tetrad[2])),
                         abs(minkowski_dot(ell, m.tetrad[0])
                             + minkowski_dot(ell, m.tetrad[3])))
    check_max("null_vector_nullity", nullity, 1e-12)
    check_max("null_transversality", transv, 1e-12)

    pair_resid = 0.0
    for _ in range(100):
        a = cavity_modes[int(rng.integers(len(cavity_modes)))]
        b = cavity_modes[int(rng.integers(len(cavity_modes)))]
        pair_resid = max(pair_resid, mode_norm_check(a, b, 2.0, L))
    check_max("mode_norm_orthonormality", pair_resid, 1e-12)

    # --- permittivity derivatives
    prof = SinusoidalProfile(4.0, 0.1, 1.7)
    h = 1e-5
    fd_err = 0.0
    for t in rng.uniform(0.0, 20.0, size=64):
        fd = (prof.eval(t + h) - prof.eval(t - h)) / (2.0 * h)
        fd_err = max(fd_err, abs(fd - prof.deriv(t)) / max(1.0, abs(prof.deriv(t))))
    check_max("permittivity_derivative_fd", fd_err, 1e-6)
    kd, wd = prof.log_derivative_ratios(np.linspace(0.0, 20.0, 97))
    check_max("log_ratio_antisymmetry", float(np.max(np.abs(kd + wd))), 1e-15)

    # --- dynamics: static reduction, invariant, lambda independence, RWA law
    cfg_static = SimulationConfig(cavity_side_L=L, epsilon_static=1.0,
                                  t_max=10.0 * 2.0 * math.pi, dt=3e-3,
                                  mode_list=((1, 0, 0),))
    res = evolve(cfg_static)
    u, v = res.entry((1, 0, 0), 3)
    check_max("static_vacuum_v", float(np.max(np.abs(v))), 1e-12)
    phase_err = float(np.max(np.abs(u * np.exp(1j * res.t) - 1.0)))
    check_max("static_vacuum_phase", phase_err, 1e-9)

    cfg_res = SimulationConfig(cavity_side_L=L, epsilon_static=1.0, delta=1e-3,
                               drive_omega=1.0, t_max=500.0, dt=5e-3,
                               mode_list=((1, 0, 0),))
    res = evolve(cfg_res)
    check_max("symplectic_drift", res.max_symplectic_drift, 1e-9)
    nums = res.photon_numbers()[0]
    lam_spread = float(np.max(np.abs(nums - nums[0:1, :])))
    check_max("lambda_independence", lam_spread, 1e-12)

    g = squeeze_rate(1.0, 1e-3, 1.0)
    idx = res.index_of_time(500.0)
    expected = math.sinh(g * res.t[idx]) ** 2
    rel = abs(nums[0, idx] - expected) / expected
    check_max("rwa_squeeze_law_dynamics", rel, 0.05)

    # --- time reversal
    prof_fwd = SinusoidalProfile(1.0, 1e-3, 1.0)
    t_half = 200.0
    cfg_rev = SimulationConfig(cavity_side_L=L, epsilon_static=1.0, delta=1e-3,
                               drive_omega=1.0, t_max=t_half, dt=5e-3,
                               mode_list=((1, 0, 0),), polarizations=(3,))
    fwd = evolve(cfg_rev, profile=prof_fwd)
    u1 = fwd.u[0, 0, -1]
    v1 = fwd.v[0, 0, -1]
    back = evolve(cfg_rev, profile=TimeReversedProfile(prof_fwd, t_half),
                  initial=(np.conj(u1), np.conj(v1)))
    rev_err = max(abs(back.u[0, 0, -1] - 1.0), abs(back.v[0, 0, -1]))
    check_max("time_reversal", float(rev_err), 1e-6)

    # --- oracle cross-checks
    strength = rwa_coefficient(1.0, 1e-3, 1.0)
    r_target = 0.5
    t_or = r_target / (2.0 * strength)
    run = evolve_oracle(ConstantSqueeze(strength=strength, cutoff=40), "vacuum", t_or)
    check_max("oracle_squeeze_law",
              abs(run.final_number() - math.sinh(r_target) ** 2), 1e-6)

    cfg_rwa = SimulationConfig(cavity_side_L=L, epsilon_static=1.0, delta=1e-3,
                               drive_omega=1.0, t_max=t_or, dt=t_or / 4000.0,
                               mode_list=((1, 0, 0),), polarizations=(1,))
    env = evolve(cfg_rwa, frame="rotating", rwa=True)
    v_sq = float(np.abs(env.v[0, 0, -1]) ** 2)
    check_max("oracle_dynamics_equivalence", abs(run.final_number() - v_sq), 1e-6)

    # The squeezed thermal tail crosses 1e-8 at the top of a D=60 basis;
    # 1e-6 leakage is still three orders below the 1% comparison tolerance.
    thermal = evolve_oracle(ConstantSqueeze(strength=strength, cutoff=60),
                            ("thermal", 1.0), t_or, leakage_threshold=1e-6)
    expected_th = 1.0 + 3.0 * math.sinh(r_target) ** 2
    check_max("oracle_thermal_enhancement",
              abs(thermal.final_number() - expected_th) / expected_th, 1e-2)
    check_max("oracle_commutator",
              verify_commutator_metric(1, 16).residual, 1e-12)
    check_max("oracle_norm_drift",
              float(np.max(np.abs(run.norm - 1.0))) / max(t_or, 1.0), 1e-9)

    # --- constraint and surface charge
    occ = InitialOccupation((0.3, 1.0, 1.0, 0.3))
    check_max("gb_constraint_residual", abs(check_constraint(occ).residual), 0.0)
    modes_e = [build_mode((1, 0, 0), L)]
    cfg_e = SimulationConfig(cavity_side_L=L, epsilon_static=1.0, delta=1e-3,
                             drive_omega=1.0, t_max=1.0, dt=5e-3,
                             mode_list=((1, 0, 0),))
    res_e = evolve(cfg_e)
    check_max("gb_energy_t0", abs(unphysical_energy(modes_e, res_e, occ, 0.0)), 0.0)

    report = surface_charge(1.0, 1e-8, 1e9, 1.0, L=1.0,
                            si_scale=_paper_scale())
    check_min("sigma_paper_band_low", report.sigma_si, 1e-15)
    check_max("sigma_paper_band_high", report.sigma_si, 1e-13)

    # --- classical battery
    prof_c = SinusoidalProfile(1.0, 1e-3, 1.0)
    fit = parametric_growth_rate(prof_c, 1.0, t_max=3.2 / g)
    check_max("classical_growth_rate", abs(fit.mu / g - 1.0), 0.10)

    t_ramp = 500.0 * 2.0 * math.pi
    ramp = ramp_profile(1.0, 4.0, t_ramp)
    afit = adiabatic_amplitude_check(ramp, 1.0, t_ramp)
    check_max("classical_adiabatic_exponent", abs(afit.exponent + 0.25), 0.02)

    from .permittivity import ConstantProfile
    prof_const = ConstantProfile(1.0)
    tr_t = integrate_classical(prof_const, 1.0, "temporal", 50.0, 5e-3)
    tr_s = integrate_classical(prof_const, 1.0, "spatial", 50.0, 5e-3)
    check_max("classical_branch_static_match",
              float(np.max(np.abs(tr_t.q - tr_s.q))), 0.0)
    dr_t = integrate_classical(prof_c, 1.0, "temporal", 200.0, 5e-3)
    dr_s = integrate_classical(prof_c, 1.0, "spatial", 200.0, 5e-3)
    check_min("classical_branch_driven_diverge",
              float(np.max(np.abs(dr_t.q - dr_s.q))), 1e-6)

    return rows


def _paper_scale():
    from .config import SiScale
    return SiScale(L_meters=0.1, omega1_rad_s=1e9)


def cmd_validate(args):
    outdir = _outdir(args)
    manifest = _manifest(args, "validate", None)
    start = time.perf_counter()
    rows = run_validation_suite()
    path = outdir / "validate_results.csv"
    checksum = write_table(path, ["check", "passed", "measured", "threshold",
                                  "sense"], rows, "csv")
    manifest.wall_time_s = time.perf_counter() - start
    manifest.add_output(path, checksum)
    manifest.write(outdir)

    failed = [r[0] for r in rows if not r[1]]
    if not args.quiet:
        for name, passed, measured, threshold, sense in rows:
            status = "ok" if passed else "FAIL"
            print(f"  [{status}] {name}: {format_value(measured)} "
                  f"({sense} {format_value(threshold)})")
        print(f"validate: {len(rows) - len(failed)}/{len(rows)} checks passed")
    if failed:
        return _fail(EXIT_VALIDATION, "validation failed", {"failed": failed})
    return EXIT_OK


# ----------------------------------------------------------------------
# parser / dispatch
# ----------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="tdem",
        description="Photon generation in cavities with time-dependent "
                    "permittivity: mode dynamics, analytics, oracles.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--config", default=None,
                       help=f"config file path (or set {ENV_CONFIG})")
        p.add_argument("--output", default="tdem_out", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers")
        p.add_argument("--seed", type=int, default=0,
                       help="reserved; all current algorithms are deterministic")
        p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("simulate", help="integrate the mode dynamics")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rwa", help="closed-form resonance predictions")
    common(p)
    p.set_defaults(func=cmd_rwa)

    p = sub.add_parser("oracle", help="truncated-basis verification run")
    common(p)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--r", type=float, default=0.5, help="target squeeze parameter")
    p.add_argument("--nbar", type=float, default=0.0, help="thermal initial mean")
    p.add_argument("--mode", choices=("rwa", "full"), default="rwa")
    p.add_argument("--steps", type=int, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sigma", help="surface charge density estimate")
    common(p)
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("classical", help="classical mode reductions and fits")
    common(p)
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("modes", help="dump the mode lattice")
    common(p)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("sweep", help="parameter sweep of simulate runs")
    common(p)
    p.add_argument("--param", required=True, help="dotted config path, "
                   "e.g. medium.delta")
    p.add_argument("--values", required=True, help="comma-separated numbers")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="run the full invariant suite")
    common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def dispatch(argv=None):
    """Parse argv, run the subcommand, and map failures to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, str(exc), {"type": "ConfigError"})
    except (StepSizeError, SymplecticDriftError) as exc:
        return _fail(EXIT_RUNTIME, str(exc), {"type": type(exc).__name__})
    except (ValueError, RuntimeError, OSError) as exc:
        return _fail(EXIT_RUNTIME, str(exc), {"type": type(exc).__name__})


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
