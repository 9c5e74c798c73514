"""Shared fixtures: warm the JIT kernels once so timed tests stay honest."""

import math

import pytest

from tdem.classical import integrate_classical
from tdem.config import SimulationConfig
from tdem.dynamics import evolve
from tdem.permittivity import ConstantProfile


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load from cache) the integrator kernels before any test.

    Runtime-bounded acceptance checks measure algorithm time, not the
    one-time JIT compilation cost.
    """
    cfg = SimulationConfig(cavity_side_L=2.0 * math.pi, t_max=0.05, dt=0.01)
    evolve(cfg)
    evolve(cfg, frame="rotating")
    integrate_classical(ConstantProfile(1.0), 1.0, "spatial", 0.05, 0.01)
    integrate_classical(ConstantProfile(1.0), 1.0, "temporal", 0.05, 0.01)
