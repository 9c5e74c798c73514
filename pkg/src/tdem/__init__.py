"""tdem: photon generation in cavities with time-dependent permittivity.

The package models a cubic cavity filled with a linear, nondispersive
medium whose permittivity varies in time.  All four photon polarizations
are kept (covariant quantization with an indefinite-metric timelike branch)
and the driven evolution is reduced exactly to independent Bogoliubov
coefficient ODEs per (mode, polarization).  Companion modules provide the
closed-form resonance analytics, a truncated-Fock-space verification
oracle, the classical per-mode wave equations, physical-state constraint
handling with the surface-charge observable, and a deterministic CLI.
"""

__version__ = "0.1.0"

from . import classical, config, dynamics, modes, observables, oracle
from . import permittivity, rwa

__all__ = [
    "__version__",
    "classical",
    "config",
    "dynamics",
    "modes",
    "observables",
    "oracle",
    "permittivity",
    "rwa",
]
