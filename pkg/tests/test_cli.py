import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdnls.cli import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    ConfigError,
    ExperimentConfig,
    main,
    parse_config_text,
    run,
    sweep,
    validate_config,
)

ATLAS = "sigma = 2\nc_grid = -0.5, 0, 0.5\n"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# -- config parsing ----------------------------------------------------------


def test_parse_flat_config():
    raw = parse_config_text("a = 1\n# comment\nb = x, y\n\nc=3 # trailing\n")
    assert raw == {"a": "1", "b": "x, y", "c": "3"}


def test_parse_rejects_malformed_line():
    with pytest.raises(ConfigError):
        parse_config_text("just a line\n")


def test_parse_rejects_duplicate_keys():
    with pytest.raises(ConfigError):
        parse_config_text("a = 1\na = 2\n")


def test_validate_unknown_experiment():
    with pytest.raises(ConfigError, match="unknown experiment"):
        validate_config("frobnicate", {})


def test_validate_unknown_key_names_it():
    with pytest.raises(ConfigError, match="bogus"):
        validate_config("evolve", {"bogus": "1"})


def test_validate_missing_required_field():
    with pytest.raises(ConfigError, match="sigma"):
        validate_config("soliton-atlas", {"c_grid": "0"})


def test_validate_field_specific_messages():
    with pytest.raises(ConfigError, match="'dt'"):
        validate_config("evolve", {"dt": "-1"})
    with pytest.raises(ConfigError, match="'n_points'"):
        validate_config("evolve", {"n_points": "1000"})
    with pytest.raises(ConfigError, match="'c_grid'"):
        validate_config("soliton-atlas", {"sigma": "2", "c_grid": "3.0"})
    with pytest.raises(ConfigError, match="'norm'"):
        validate_config("theorem1-scan", {"sigma": "2", "norm": "L7"})


def test_config_hash_is_stable_and_order_free():
    a = validate_config("soliton-atlas", {"sigma": "2", "c_grid": "0, 0.5"})
    b = validate_config("soliton-atlas", {"c_grid": "0, 0.5", "sigma": "2"})
    assert a.config_hash() == b.config_hash()
    c = validate_config("soliton-atlas", {"sigma": "2", "c_grid": "0"})
    assert a.config_hash() != c.config_hash()


@settings(max_examples=40, deadline=None)
@given(
    key=st.sampled_from(["sigma", "omega", "dt", "t_end", "n_points", "equation"]),
    value=st.sampled_from(["-3", "0", "abc", "", "nan", "1e309", "[1,2]"]),
)
def test_fuzzed_invalid_values_are_validation_errors(key, value):
    """Bad field values must raise ConfigError, never leak other exceptions."""
    base = {"sigma": "2"}
    base[key] = value
    try:
        validate_config("evolve", base)
    except ConfigError:
        pass  # the only acceptable failure mode


@settings(max_examples=25, deadline=None)
@given(st.text(max_size=60))
def test_fuzzed_config_text_parses_or_raises_config_error(text):
    try:
        parse_config_text(text)
    except ConfigError:
        pass


# -- running -----------------------------------------------------------------


def test_main_exit_codes(tmp_path):
    good = write(tmp_path, "atlas.cfg", ATLAS)
    assert main(["soliton-atlas", "--config", good, "--out", str(tmp_path / "o")]) == EXIT_OK
    bad = write(tmp_path, "bad.cfg", "sigma = 2\nwhat = 1\n")
    assert main(["soliton-atlas", "--config", bad]) == EXIT_VALIDATION
    assert main(["soliton-atlas", "--config", str(tmp_path / "missing.cfg")]) == EXIT_VALIDATION


def test_main_numerical_failure_exit_code(tmp_path):
    # amplitude far above the stability guard at this resolution
    cfg = write(
        tmp_path, "blowup.cfg",
        "sigma = 2\ndelta = 5\ndt = 1e-2\nt_end = 0.1\nn_points = 1024\n",
    )
    assert main(["evolve", "--config", cfg, "--out", str(tmp_path / "o")]) == EXIT_NUMERICAL


def test_run_writes_csv_and_manifest(tmp_path):
    cfg = validate_config("soliton-atlas", parse_config_text(ATLAS))
    record = run(cfg, out_dir=tmp_path)
    stem = f"soliton-atlas-{record.config_hash}"
    csv_text = (tmp_path / f"{stem}.csv").read_text()
    lines = csv_text.strip().split("\n")
    assert lines[0].startswith("c,alpha,")
    assert len(lines) == 4  # header + one row per speed
    manifest = json.loads((tmp_path / f"{stem}.json").read_text())
    assert manifest["config_hash"] == record.config_hash
    assert manifest["config"]["experiment"] == "soliton-atlas"
    assert "timestamp" in manifest and "timestamp" not in csv_text


def test_csv_reruns_are_byte_identical(tmp_path):
    cfg = validate_config("soliton-atlas", parse_config_text(ATLAS))
    r1 = run(cfg, out_dir=tmp_path / "a")
    r2 = run(cfg, out_dir=tmp_path / "b")
    stem = f"soliton-atlas-{r1.config_hash}"
    assert (tmp_path / "a" / f"{stem}.csv").read_bytes() == (
        tmp_path / "b" / f"{stem}.csv"
    ).read_bytes()
    assert r1.csv_text() == r2.csv_text()


def test_csv_carries_17_significant_digits():
    cfg = validate_config("soliton-atlas", {"sigma": "2", "c_grid": "0"})
    record = run(cfg)
    row = record.csv_text().strip().split("\n")[1].split(",")
    mass = float(row[2])
    assert row[2] == format(mass, ".17g")  # round-trips exactly


def test_sweep_preserves_input_order_and_isolates_failures():
    good = validate_config("soliton-atlas", {"sigma": "2", "c_grid": "0"})
    # numerically doomed run sandwiched between two good ones
    doomed = ExperimentConfig(
        "evolve",
        {**validate_config("evolve", {"sigma": "2"}).parameters,
         "delta": 5.0, "dt": 1e-2, "t_end": 0.1},
    )
    other = validate_config("theorem1-scan",
                            {"sigma": "2", "norm": "Lpc", "num_points": "5"})
    results = sweep([good, doomed, other], workers=3)
    assert results[0].experiment == "soliton-atlas"
    assert isinstance(results[1], Exception)
    assert results[2].experiment == "theorem1-scan"


def test_sweep_of_empty_list_is_empty():
    assert sweep([], workers=4) == []


def test_sweep_of_identical_configs_gives_identical_payloads():
    cfg = validate_config("soliton-atlas", {"sigma": "2", "c_grid": "0, 0.5"})
    results = sweep([cfg, cfg, cfg], workers=3)
    texts = {r.csv_text() for r in results}
    assert len(texts) == 1


def test_config_normalized_round_trip():
    cfg = validate_config("theorem1-scan", {"sigma": "2", "norm": "Lpc"})
    norm = cfg.normalized()
    text = "\n".join(f"{k} = {v}" for k, v in norm.items() if k != "experiment")
    again = validate_config("theorem1-scan", parse_config_text(text))
    assert again.normalized() == norm
    assert again.config_hash() == cfg.config_hash()


def test_sweep_requires_experiment_key(tmp_path):
    cfg = write(tmp_path, "s.cfg", ATLAS)  # no experiment = line
    assert main(["sweep", "--config", cfg]) == EXIT_VALIDATION


def test_sweep_end_to_end(tmp_path):
    c1 = write(tmp_path, "one.cfg",
               "experiment = soliton-atlas\n" + ATLAS + "output_path = one\n")
    c2 = write(tmp_path, "two.cfg",
               "experiment = theorem1-scan\nsigma = 2\nnorm = Lpc\n"
               "num_points = 5\noutput_path = two\n")
    out = str(tmp_path / "o")
    assert main(["sweep", "--config", c1, "--config", c2,
                 "--workers", "2", "--out", out]) == EXIT_OK
    assert (tmp_path / "o" / "one.csv").exists()
    assert (tmp_path / "o" / "two.json").exists()


def test_seed_override(tmp_path):
    cfg = write(tmp_path, "p.cfg", "probe = strichartz\nq = inf\nr = 2\n")
    assert main(["ineq-probe", "--config", cfg, "--out",
                 str(tmp_path / "o"), "--seed", "7"]) == EXIT_OK
    manifest = next((tmp_path / "o").glob("*.json"))
    assert json.loads(manifest.read_text())["config"]["seed"] == 7
