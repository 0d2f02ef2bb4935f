"""Config schema: strict keys, type rules, defaults, and error naming."""

import pytest

from nldiff import ConfigError, load_config, validate_config


def _minimal(**overrides):
    raw = {
        "experiment": {"id": "property-suite", "seed": 1},
        "kernel": {"profile": "uniform", "radius": 1.0},
        "nonlinearity": {"kind": "kpz", "mu": 1.0},
    }
    for section, table in overrides.items():
        raw.setdefault(section, {}).update(table)
    return raw


def test_all_shipped_configs_validate(config_dir):
    paths = sorted(config_dir.glob("*.toml"))
    assert len(paths) == 8
    for path in paths:
        cfg = load_config(path)
        stem = path.stem
        # file name starts with the experiment id it declares
        assert stem.startswith(cfg.experiment_id)
        assert cfg.seed == 20250819


def test_unknown_section_and_key_are_named():
    with pytest.raises(ConfigError, match="mystery"):
        validate_config(_minimal(mystery={"x": 1}))
    with pytest.raises(ConfigError, match="kernel.griddle"):
        validate_config(_minimal(kernel={"griddle": 2}))


def test_type_rules():
    # bool is not an int
    with pytest.raises(ConfigError, match="threads"):
        validate_config(_minimal(experiment={"threads": True}))
    # float where an int is required
    with pytest.raises(ConfigError, match="seed"):
        validate_config(_minimal(experiment={"seed": 1.5}))
    # string where a float is required
    with pytest.raises(ConfigError, match="radius"):
        validate_config(_minimal(kernel={"radius": "wide"}))
    # ints are accepted where floats are required
    cfg = validate_config(_minimal(kernel={"radius": 2}))
    assert cfg.get("kernel", "radius") == 2.0
    assert isinstance(cfg.get("kernel", "radius"), float)


def test_mu_accepts_scalar_or_path():
    assert validate_config(_minimal()).get("nonlinearity", "mu") == 1.0
    cfg = validate_config(_minimal(nonlinearity={"mu": "profiles/mu.csv"}))
    assert cfg.get("nonlinearity", "mu") == "profiles/mu.csv"


def test_box_shapes():
    cfg = validate_config(_minimal(geometry={"box": [-1.0, 1.0]}))
    assert cfg.get("geometry", "box") == (-1.0, 1.0)
    cfg2 = validate_config(_minimal(geometry={"box": [[-1.0, 1.0], [0.0, 2.0]]}))
    assert cfg2.get("geometry", "box") == ((-1.0, 1.0), (0.0, 2.0))
    with pytest.raises(ConfigError, match="box"):
        validate_config(_minimal(geometry={"box": [-1.0, "one"]}))
    with pytest.raises(ConfigError, match="box"):
        validate_config(_minimal(geometry={"box": [1.0, 2.0, 3.0]}))


def test_defaults_and_accessors():
    cfg = validate_config(_minimal())
    assert cfg.threads == 1
    assert cfg.get("geometry", "k_pts") == 8
    assert cfg.get("integrator", "method") == "rk4"
    assert cfg.get("tolerances", "class_tol") == 1e-12
    # get with explicit fallback beats the schema default
    assert cfg.get("time", "horizon", 2.5) == 2.5
    with pytest.raises(ConfigError, match="time.horizon"):
        cfg.need("time", "horizon")


def test_need_returns_present_values():
    cfg = validate_config(_minimal(time={"horizon": 0.25}))
    assert cfg.need("time", "horizon") == 0.25


def test_experiment_id_required():
    with pytest.raises(ConfigError, match="experiment.id"):
        validate_config({"experiment": {"seed": 3}})


def test_malformed_toml_reports_config_error(tmp_path):
    bad = tmp_path / "broken.toml"
    bad.write_text("[experiment\nid = oops")
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")


def test_epsilon_list_type_checked():
    cfg = validate_config(_minimal(sweep={"epsilons": [0.2, 0.1]}))
    assert list(cfg.get("sweep", "epsilons")) == [0.2, 0.1]
    with pytest.raises(ConfigError, match="epsilons"):
        validate_config(_minimal(sweep={"epsilons": [0.2, "small"]}))
