"""Permittivity profiles: values, analytic derivatives, tabulated loading."""

import math

import numpy as np
import pytest

from tdem.permittivity import (ConstantProfile, SinusoidalProfile,
                               TabulatedProfile, TimeReversedProfile,
                               log_derivative_ratios)


def test_sinusoidal_values():
    prof = SinusoidalProfile(4.0, 0.1, 1.0)
    assert prof.eval(0.0) == 4.0
    # 2*Omega*t = pi/2 puts the modulation at its positive peak.
    t_peak = math.pi / 4.0
    assert prof.eval(t_peak) == pytest.approx(4.2, abs=1e-14)
    assert ConstantProfile(1.0).eval(123.4) == 1.0


def test_positivity_guard():
    with pytest.raises(ValueError, match="non-positive"):
        SinusoidalProfile(1.0, 0.5001, 1.0)
    # Boundary case 2*delta == epsilon is rejected too.
    with pytest.raises(ValueError, match="non-positive"):
        SinusoidalProfile(1.0, 0.5, 1.0)
    SinusoidalProfile(1.0, 0.4999, 1.0)


def test_log_ratios_constant():
    kd, wd = ConstantProfile(2.0).log_derivative_ratios(3.3)
    assert kd == 0.0 and wd == 0.0


def test_log_ratios_sinusoidal_t0():
    eps, delta, omega = 4.0, 0.1, 1.7
    prof = SinusoidalProfile(eps, delta, omega)
    kd, wd = prof.log_derivative_ratios(0.0)
    assert kd == pytest.approx(2.0 * delta * omega / eps, rel=1e-14)
    assert wd == pytest.approx(-2.0 * delta * omega / eps, rel=1e-14)


def test_ratio_antisymmetry_everywhere():
    prof = SinusoidalProfile(2.5, 0.3, 0.9)
    t = np.linspace(0.0, 40.0, 257)
    kd, wd = log_derivative_ratios(prof, t)
    assert np.max(np.abs(kd + wd)) == 0.0


@pytest.mark.parametrize("prof", [
    ConstantProfile(3.0),
    SinusoidalProfile(4.0, 0.1, 1.3),
    SinusoidalProfile(1.0, 0.49, 5.0),
])
def test_derivatives_match_finite_differences(prof):
    rng = np.random.default_rng(42)
    h = 1e-5
    for t in rng.uniform(1.0, 30.0, size=40):
        fd1 = (prof.eval(t + h) - prof.eval(t - h)) / (2.0 * h)
        fd2 = (prof.eval(t + h) - 2.0 * prof.eval(t) + prof.eval(t - h)) / h ** 2
        scale1 = max(1.0, abs(prof.deriv(t)))
        scale2 = max(1.0, abs(prof.deriv2(t)))
        assert abs(fd1 - prof.deriv(t)) / scale1 < 1e-8
        assert abs(fd2 - prof.deriv2(t)) / scale2 < 1e-4


def test_tabulated_matches_analytic_ratios():
    src = SinusoidalProfile(4.0, 0.1, 1.0)
    t_grid = np.linspace(0.0, 20.0, 4001)
    tab = TabulatedProfile(t_grid, src.eval(t_grid))
    rng = np.random.default_rng(7)
    for t in rng.uniform(0.5, 19.5, size=50):
        kd_t, wd_t = tab.log_derivative_ratios(t)
        kd_a, _ = src.log_derivative_ratios(t)
        assert abs(kd_t - kd_a) / max(abs(kd_a), 1e-3) < 1e-6
        assert kd_t + wd_t == 0.0


def test_tabulated_validation_and_range():
    t = np.linspace(0.0, 1.0, 16)
    with pytest.raises(ValueError, match="increasing"):
        TabulatedProfile(t[::-1], np.ones(16))
    with pytest.raises(ValueError, match="positive"):
        TabulatedProfile(t, np.zeros(16))
    prof = TabulatedProfile(t, 2.0 + t)
    with pytest.raises(ValueError, match="extrapolation"):
        prof.eval(1.5)
    with pytest.raises(ValueError, match="extrapolation"):
        prof.deriv(-0.5)


def test_tabulated_from_csv(tmp_path):
    src = SinusoidalProfile(2.0, 0.2, 1.0)
    t = np.linspace(0.0, 10.0, 801)
    path = tmp_path / "drive.csv"
    lines = ["t,epsilon"] + [f"{ti},{src.eval(ti)}" for ti in t]
    path.write_text("\n".join(lines) + "\n")
    prof = TabulatedProfile.from_csv(path)
    assert prof.eval(3.21) == pytest.approx(src.eval(3.21), rel=1e-9)

    bad = tmp_path / "bad.csv"
    bad.write_text("t,epsilon\n")
    with pytest.raises(ValueError, match="no data"):
        TabulatedProfile.from_csv(bad)


def test_time_reversed_profile():
    src = SinusoidalProfile(2.0, 0.2, 1.3)
    rev = TimeReversedProfile(src, 10.0)
    for t in (0.0, 1.7, 9.9):
        assert rev.eval(t) == pytest.approx(src.eval(10.0 - t), rel=1e-15)
        assert rev.deriv(t) == pytest.approx(-src.deriv(10.0 - t), rel=1e-12, abs=1e-15)
        assert rev.deriv2(t) == pytest.approx(src.deriv2(10.0 - t), rel=1e-12, abs=1e-15)
