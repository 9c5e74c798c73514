"""Simulation configuration, unit conventions, and the SI output boundary.

Everything inside the package runs in natural units (c = hbar = eps0 = mu0
= 1) with the cavity side as the length unit.  The only place SI units
appear is the conversion of the surface charge density at the output
boundary: a natural-unit quantity of dimension 1/length^2 maps to C/m^2
through the factor sqrt(eps0 * hbar * c) / L_meters^2.  See
docs/physics_notes.md for the dimensional bookkeeping.

Configs load from a YAML (or JSON) key-value tree; the schema is documented
in the README.  Loaded configs are immutable and safe to share across
workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import scipy.constants
import yaml

from . import modes as modes_mod
from . import permittivity as perm_mod

__all__ = [
    "ConfigError",
    "SiScale",
    "SimulationConfig",
    "load_config",
    "serialize_config",
    "sigma_to_si",
    "HBAR",
    "C_LIGHT",
    "EPS0",
]

HBAR = scipy.constants.hbar          # J s
C_LIGHT = scipy.constants.c          # m / s
EPS0 = scipy.constants.epsilon_0     # F / m


class ConfigError(ValueError):
    """Schema or invariant violation; message names the offending field."""


@dataclass(frozen=True)
class SiScale:
    """SI reference for converting the natural-unit surface charge density.

    sigma_factor is the unique dimensionally consistent map from a
    natural-unit quantity of dimension 1/length^2 (with the cavity side as
    the length unit) to C/m^2.  omega1_rad_s optionally pins the SI value of
    the fundamental angular frequency so run times given in seconds can be
    converted to squeeze parameters.
    """

    L_meters: float
    omega1_rad_s: float | None = None
    hbar: float = HBAR
    c: float = C_LIGHT
    eps0: float = EPS0

    def __post_init__(self):
        if self.L_meters <= 0.0:
            raise ConfigError(f"si.L_meters: must be positive, got {self.L_meters}")
        if self.omega1_rad_s is not None and self.omega1_rad_s <= 0.0:
            raise ConfigError(
                f"si.omega1_rad_s: must be positive, got {self.omega1_rad_s}")

    @property
    def sigma_factor(self):
        """C/m^2 per natural surface-charge unit."""
        return math.sqrt(self.eps0 * self.hbar * self.c) / self.L_meters ** 2


def sigma_to_si(sigma_natural, scale):
    """Convert a natural-unit surface charge density to C/m^2.

    A missing scale is an explicit error; natural units are never silently
    passed through.
    """
    if scale is None:
        raise ConfigError("si: SI scale required for surface-charge conversion "
                          "but none configured")
    return sigma_natural * scale.sigma_factor


_DEFAULT_TOLERANCES = {
    "symplectic": 1e-9,
    "leakage": 1e-8,
    "rwa_relative": 0.05,
}


@dataclass(frozen=True)
class SimulationConfig:
    """Validated, immutable simulation parameters.

    delta and drive_omega define the modulated permittivity
    eps(t) = epsilon_static + 2*delta*sin(2*drive_omega*t); delta = 0 turns
    the drive off.  mode_list holds integer triples (the zero mode is
    excluded).  initial_occupations are the per-polarization mean photon
    numbers at t = 0, ordered lambda = 0..3.
    """

    cavity_side_L: float
    epsilon_static: float = 1.0
    delta: float = 0.0
    drive_omega: float = 0.0
    t_max: float = 100.0
    dt: float = 0.005
    mode_list: tuple = ((1, 0, 0),)
    polarizations: tuple = (0, 1, 2, 3)
    initial_occupations: tuple = (0.0, 0.0, 0.0, 0.0)
    fock_cutoff: int = 40
    tolerances: tuple = tuple(sorted(_DEFAULT_TOLERANCES.items()))
    si_scale: SiScale | None = None
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.cavity_side_L <= 0.0:
            raise ConfigError(f"cavity.L: must be positive, got {self.cavity_side_L}")
        if self.epsilon_static < 1.0:
            raise ConfigError(
                f"medium.epsilon: must be >= 1, got {self.epsilon_static}")
        if self.delta < 0.0:
            raise ConfigError(f"medium.delta: must be >= 0, got {self.delta}")
        if 2.0 * self.delta >= self.epsilon_static:
            raise ConfigError(
                "medium.delta: permittivity may become non-positive "
                f"(2*delta = {2.0 * self.delta} >= epsilon = {self.epsilon_static})")
        if self.delta > 0.0 and self.drive_omega <= 0.0:
            raise ConfigError("medium.omega: must be positive when delta > 0")
        if self.drive_omega < 0.0:
            raise ConfigError(f"medium.omega: must be >= 0, got {self.drive_omega}")
        if self.dt <= 0.0:
            raise ConfigError(f"run.dt: must be positive, got {self.dt}")
        if self.t_max < 0.0:
            raise ConfigError(f"run.t_max: must be >= 0, got {self.t_max}")
        if self.fock_cutoff < 2:
            raise ConfigError(f"oracle.cutoff: must be >= 2, got {self.fock_cutoff}")

        try:
            object.__setattr__(self, "mode_list",
                               tuple(tuple(int(c) for c in n) for n in self.mode_list))
        except (TypeError, ValueError):
            raise ConfigError(
                f"run.modes: entries must be integer triples, got {self.mode_list!r}"
            ) from None
        if not self.mode_list:
            raise ConfigError("run.modes: at least one mode required")
        for n in self.mode_list:
            if len(n) != 3:
                raise ConfigError(f"run.modes: entry {n!r} is not an integer triple")
            if n == (0, 0, 0):
                raise ConfigError("run.modes: zero mode (0,0,0) is excluded "
                                  "(no propagating field, singular normalization)")

        try:
            object.__setattr__(self, "polarizations",
                               tuple(int(p) for p in self.polarizations))
        except (TypeError, ValueError):
            raise ConfigError(
                f"run.polarizations: entries must be integers, "
                f"got {self.polarizations!r}") from None
        if not self.polarizations:
            raise ConfigError("run.polarizations: at least one required")
        if any(p not in (0, 1, 2, 3) for p in self.polarizations):
            raise ConfigError(
                f"run.polarizations: entries must lie in {{0,1,2,3}}, "
                f"got {self.polarizations}")
        if len(set(self.polarizations)) != len(self.polarizations):
            raise ConfigError("run.polarizations: duplicate entries")

        occ = tuple(float(x) for x in self.initial_occupations)
        if len(occ) != 4:
            raise ConfigError("initial.n_bar: expected four entries (lambda=0..3)")
        if any(x < 0.0 for x in occ):
            raise ConfigError(f"initial.n_bar: entries must be >= 0, got {occ}")
        object.__setattr__(self, "initial_occupations", occ)

        if isinstance(self.tolerances, dict):
            object.__setattr__(self, "tolerances",
                               tuple(sorted(self.tolerances.items())))
        for name, value in self.tolerances:
            if value <= 0.0:
                raise ConfigError(f"tolerances.{name}: must be positive, got {value}")

        if self.output_format not in ("csv", "json"):
            raise ConfigError(
                f"output.format: must be 'csv' or 'json', got {self.output_format!r}")

    def tolerance(self, name):
        for key, value in self.tolerances:
            if key == name:
                return value
        return _DEFAULT_TOLERANCES[name]

    def build_profile(self):
        """The permittivity profile this config describes."""
        if self.delta == 0.0:
            return perm_mod.ConstantProfile(self.epsilon_static)
        return perm_mod.SinusoidalProfile(self.epsilon_static, self.delta,
                                          self.drive_omega)

    def build_modes(self):
        return [modes_mod.build_mode(n, self.cavity_side_L) for n in self.mode_list]

    def fundamental_frequency(self):
        """Static frequency of the lowest mode, 2*pi/(L*sqrt(eps))."""
        return 2.0 * math.pi / (self.cavity_side_L * math.sqrt(self.epsilon_static))

    def with_value(self, dotted_key, value):
        """Return a copy with one schema field replaced (sweep support)."""
        doc = config_to_dict(self)
        section = doc
        parts = dotted_key.split(".")
        for part in parts[:-1]:
            if part not in section or not isinstance(section[part], dict):
                raise ConfigError(f"{dotted_key}: unknown config field")
            section = section[part]
        leaf = parts[-1]
        if leaf not in section:
            raise ConfigError(f"{dotted_key}: unknown config field")
        if not isinstance(section[leaf], (int, float)) or isinstance(section[leaf], bool):
            raise ConfigError(f"{dotted_key}: not a scalar numeric field")
        section[leaf] = value
        return _config_from_dict(doc)


def _require(doc, section, key, kind, path):
    try:
        value = doc[section][key]
    except (KeyError, TypeError):
        raise ConfigError(f"{path}: missing required field") from None
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is not float and isinstance(value, kind):
        return value
    raise ConfigError(f"{path}: expected {kind.__name__}, got {value!r}")


def _optional(doc, section, key, default):
    sec = doc.get(section)
    if not isinstance(sec, dict):
        return default
    return sec.get(key, default)


_KNOWN_SECTIONS = {"cavity", "medium", "run", "initial", "oracle",
                   "tolerances", "si", "output"}


def _config_from_dict(doc):
    if not isinstance(doc, dict):
        raise ConfigError("config: document root must be a key-value tree")
    unknown = set(doc) - _KNOWN_SECTIONS
    if unknown:
        raise ConfigError(f"config: unknown section(s) {sorted(unknown)}")

    L = _require(doc, "cavity", "L", float, "cavity.L")
    epsilon = _require(doc, "medium", "epsilon", float, "medium.epsilon")
    delta = _require(doc, "medium", "delta", float, "medium.delta")
    omega = float(_optional(doc, "medium", "omega", 0.0))

    run = doc.get("run", {})
    if "modes" not in run:
        raise ConfigError("run.modes: missing required field")
    mode_list = run["modes"]
    if not isinstance(mode_list, list):
        raise ConfigError("run.modes: expected a list of integer triples")

    t_max = float(_optional(doc, "run", "t_max", 100.0))
    dt = float(_optional(doc, "run", "dt", 0.005))
    polarizations = _optional(doc, "run", "polarizations", [0, 1, 2, 3])

    n_bar_doc = _optional(doc, "initial", "n_bar", {})
    occ = [0.0, 0.0, 0.0, 0.0]
    if n_bar_doc:
        if not isinstance(n_bar_doc, dict):
            raise ConfigError("initial.n_bar: expected a mapping lambda -> mean")
        for lam, value in n_bar_doc.items():
            try:
                lam_idx = int(lam)
            except (TypeError, ValueError):
                raise ConfigError(
                    f"initial.n_bar: key {lam!r} is not a polarization index") from None
            if lam_idx not in (0, 1, 2, 3):
                raise ConfigError(f"initial.n_bar: index {lam_idx} outside 0..3")
            occ[lam_idx] = float(value)

    cutoff = int(_optional(doc, "oracle", "cutoff", 40))

    tolerances = dict(_DEFAULT_TOLERANCES)
    tol_doc = doc.get("tolerances", {})
    if tol_doc:
        if not isinstance(tol_doc, dict):
            raise ConfigError("tolerances: expected a mapping name -> value")
        for name, value in tol_doc.items():
            tolerances[str(name)] = float(value)

    si_scale = None
    si_doc = doc.get("si")
    if si_doc:
        if not isinstance(si_doc, dict) or "L_meters" not in si_doc:
            raise ConfigError("si.L_meters: missing required field")
        omega1 = si_doc.get("omega1_rad_s")
        si_scale = SiScale(L_meters=float(si_doc["L_meters"]),
                           omega1_rad_s=None if omega1 is None else float(omega1))

    output_path = _optional(doc, "output", "path", None)
    output_format = _optional(doc, "output", "format", "csv")

    return SimulationConfig(
        cavity_side_L=L,
        epsilon_static=epsilon,
        delta=delta,
        drive_omega=omega,
        t_max=t_max,
        dt=dt,
        mode_list=tuple(tuple(n) for n in mode_list),
        polarizations=tuple(polarizations),
        initial_occupations=tuple(occ),
        fock_cutoff=cutoff,
        tolerances=tuple(sorted(tolerances.items())),
        si_scale=si_scale,
        output_path=output_path,
        output_format=str(output_format),
    )


def load_config(source):
    """Load and validate a configuration.

    source may be a path to a YAML/JSON file, a YAML text document, or an
    already-parsed dict.  All invariants are checked; defaults are applied
    for omitted optional fields.
    """
    if isinstance(source, dict):
        return _config_from_dict(source)
    is_path = isinstance(source, Path)
    if not is_path and isinstance(source, str) and "\n" not in source:
        try:
            is_path = Path(source).expanduser().is_file()
        except OSError:
            is_path = False
    if is_path:
        text = Path(source).expanduser().read_text()
    else:
        text = source
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config: malformed document ({exc})") from None
    if doc is None:
        raise ConfigError("config: empty document")
    return _config_from_dict(doc)


def config_to_dict(config):
    """Nested plain-dict snapshot of a config (inverse of loading)."""
    doc = {
        "cavity": {"L": config.cavity_side_L},
        "medium": {"epsilon": config.epsilon_static,
                   "delta": config.delta,
                   "omega": config.drive_omega},
        "run": {"t_max": config.t_max,
                "dt": config.dt,
                "modes": [list(n) for n in config.mode_list],
                "polarizations": list(config.polarizations)},
        "initial": {"n_bar": {i: config.initial_occupations[i] for i in range(4)}},
        "oracle": {"cutoff": config.fock_cutoff},
        "tolerances": dict(config.tolerances),
    }
    if config.si_scale is not None:
        doc["si"] = {"L_meters": config.si_scale.L_meters}
        if config.si_scale.omega1_rad_s is not None:
            doc["si"]["omega1_rad_s"] = config.si_scale.omega1_rad_s
    output = {}
    if config.output_path is not None:
        output["path"] = config.output_path
    output["format"] = config.output_format
    doc["output"] = output
    return doc


def serialize_config(config):
    """Canonical YAML snapshot; load_config(serialize_config(c)) == c."""
    return yaml.safe_dump(config_to_dict(config), sort_keys=True,
                          default_flow_style=False)
