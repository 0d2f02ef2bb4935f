"""Experiment configuration: one TOML file per run, strictly validated.

Unknown sections or keys are errors, by design: a config that silently
ignores a typo is a reproducibility hazard.  Values are typed scalars plus
flat lists; the same seed and config must reproduce CSV output byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib


class ConfigError(ValueError):
    pass


_FLOAT = ("float",)
_INT = ("int",)
_STR = ("str",)
_BOOL = ("bool",)
_FLOAT_OR_STR = ("float", "str")
_LIST_FLOAT = ("list-float",)
_BOX = ("box",)

# section -> key -> accepted kinds. This is the complete config surface; any
# key outside it is rejected with the offending name.
_SCHEMA = {
    "experiment": {
        "id": _STR,
        "seed": _INT,
        "threads": _INT,
    },
    "kernel": {
        "profile": _STR,
        "radius": _FLOAT,
        "dim": _INT,
    },
    "nonlinearity": {
        "kind": _STR,
        "mu": _FLOAT_OR_STR,
        "coeff": _FLOAT,
        "cap": _FLOAT,
    },
    "geometry": {
        "box": _BOX,
        "half_width": _FLOAT,
        "k_pts": _INT,
        "spacing": _FLOAT,
    },
    "reference": {
        "amplitude": _FLOAT,
        "variance": _FLOAT,
    },
    "integrator": {
        "method": _STR,
        "cfl_safety": _FLOAT,
        "dt": _FLOAT,
    },
    "time": {
        "horizon": _FLOAT,
        "sample_count": _INT,
        "sample_start": _FLOAT,
        "fit_start": _FLOAT,
        "points_per_decade": _INT,
    },
    "sweep": {
        "epsilons": _LIST_FLOAT,
        "rescale": _STR,
    },
    "initial": {
        "kind": _STR,
        "amplitude": _FLOAT,
        "width": _FLOAT,
    },
    "samples": {
        "pairs": _INT,
        "draws": _INT,
        "fields": _INT,
    },
    "tolerances": {
        "min_order": _FLOAT,
        "contamination": _FLOAT,
        "threshold_ratio": _FLOAT,
        "lambda1_slack": _FLOAT,
        "exponent_lo": _FLOAT,
        "exponent_hi": _FLOAT,
        "l1_step": _FLOAT,
        "gap": _FLOAT,
        "dj_rel": _FLOAT,
        "class_tol": _FLOAT,
    },
}

_DEFAULTS = {
    ("experiment", "seed"): 0,
    ("experiment", "threads"): 1,
    ("kernel", "dim"): 1,
    ("integrator", "method"): "rk4",
    ("integrator", "cfl_safety"): 0.25,
    ("time", "sample_count"): 11,
    ("time", "sample_start"): 1.0,
    ("time", "points_per_decade"): 20,
    ("sweep", "rescale"): "discrete",
    ("geometry", "k_pts"): 8,
    ("initial", "kind"): "bump",
    ("initial", "amplitude"): 0.5,
    ("initial", "width"): 1.0,
    ("samples", "pairs"): 20,
    ("samples", "draws"): 100000,
    ("samples", "fields"): 10,
    ("tolerances", "min_order"): 0.9,
    ("tolerances", "contamination"): 1e-3,
    ("tolerances", "threshold_ratio"): 1e-3,
    ("tolerances", "lambda1_slack"): 0.1,
    ("tolerances", "l1_step"): 1e-10,
    ("tolerances", "gap"): 1e-8,
    ("tolerances", "dj_rel"): 1e-6,
    ("tolerances", "class_tol"): 1e-12,
}


def _check_scalar(section: str, key: str, value, kinds) -> object:
    where = f"{section}.{key}"
    # bool is an int subclass; keep the kinds disjoint.
    if isinstance(value, bool):
        if "bool" in kinds:
            return value
        raise ConfigError(f"{where}: expected {'/'.join(kinds)}, got a boolean")
    if isinstance(value, int):
        if "int" in kinds:
            return int(value)
        if "float" in kinds:
            return float(value)
    if isinstance(value, float) and "float" in kinds:
        return float(value)
    if isinstance(value, str) and "str" in kinds:
        return value
    if "list-float" in kinds:
        if not isinstance(value, list) or not value:
            raise ConfigError(f"{where}: expected a nonempty list of numbers")
        out = []
        for item in value:
            if isinstance(item, bool) or not isinstance(item, (int, float)):
                raise ConfigError(f"{where}: expected a list of numbers")
            out.append(float(item))
        return out
    if "box" in kinds:
        return _check_box(where, value)
    raise ConfigError(f"{where}: expected {'/'.join(kinds)}, got {type(value).__name__}")


def _check_box(where: str, value) -> tuple:
    """A 1D box is [a, b]; a 2D box is [[a1, b1], [a2, b2]]."""
    if not isinstance(value, list):
        raise ConfigError(f"{where}: expected [a, b] or [[a1, b1], [a2, b2]]")
    if len(value) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        a, b = float(value[0]), float(value[1])
        if not a < b:
            raise ConfigError(f"{where}: box must satisfy a < b")
        return (a, b)
    if len(value) == 2 and all(isinstance(v, list) for v in value):
        return tuple(_check_box(where, axis) for axis in value)
    raise ConfigError(f"{where}: expected [a, b] or [[a1, b1], [a2, b2]]")


@dataclass
class ExperimentConfig:
    """Validated, typed view of one config file.

    Sections land as plain dicts with defaults filled in; experiments pull
    what they need through ``need``/``get`` so a missing required key fails
    with its full dotted name.
    """

    sections: dict = field(default_factory=dict)
    source: str = "<inline>"

    def get(self, section: str, key: str, default=None):
        return self.sections.get(section, {}).get(key, default)

    def need(self, section: str, key: str):
        value = self.get(section, key)
        if value is None:
            raise ConfigError(f"{self.source}: missing required key {section}.{key}")
        return value

    @property
    def experiment_id(self) -> str:
        return self.need("experiment", "id")

    @property
    def seed(self) -> int:
        return self.get("experiment", "seed")

    @property
    def threads(self) -> int:
        return self.get("experiment", "threads")


def validate_config(raw: dict, source: str = "<inline>") -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"{source}: top level must be a table of sections")
    sections: dict = {}
    for name, body in raw.items():
        if name not in _SCHEMA:
            raise ConfigError(f"{source}: unknown section [{name}]")
        if not isinstance(body, dict):
            raise ConfigError(f"{source}: [{name}] must be a table, got {type(body).__name__}")
        allowed = _SCHEMA[name]
        out = {}
        for key, value in body.items():
            if key not in allowed:
                raise ConfigError(f"{source}: unknown key {name}.{key}")
            out[key] = _check_scalar(name, key, value, allowed[key])
        sections[name] = out
    for (section, key), default in _DEFAULTS.items():
        sections.setdefault(section, {}).setdefault(key, default)
    if "id" not in sections.get("experiment", {}):
        raise ConfigError(f"{source}: experiment.id is required")
    return ExperimentConfig(sections=sections, source=source)


def load_config(path: str) -> ExperimentConfig:
    try:
        fh = open(path, "rb")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    with fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return validate_config(raw, source=str(path))
