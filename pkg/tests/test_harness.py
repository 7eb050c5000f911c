import json

import pytest

from mbred.harness import (
    CHECK_TOLERANCES,
    EXPERIMENTS,
    SUITES,
    CheckRecord,
    ConfigError,
    ExperimentConfig,
    load_config_file,
    run,
)

SMALL_SAMPLES = {
    "verify-metrics": 20,
    "topology": 50,
    "mb-roundtrip": 10,
    "contextuality": 5,
    "dirac-fiber": 10,
    "povm-kernel": 10,
    "simulate": 2000,
    "sharp-effect": 200,
    "extension": 5,
}


def test_smoke_verify_metrics():
    report = run(ExperimentConfig("verify-metrics", dims=[2], samples=10, seed=1))
    assert report.passed
    assert report.checks and all(c.n_cases == 10 for c in report.checks)


def test_vacuous_roundtrip():
    report = run(ExperimentConfig("mb-roundtrip", samples=0))
    assert report.passed
    assert all(c.n_cases == 0 and c.max_error == 0 for c in report.checks)


@pytest.mark.parametrize("experiment", [e for e in EXPERIMENTS if e != "all"])
def test_each_suite_passes_small(experiment):
    dims = [2] if experiment in ("sharp-effect", "simulate") else [2, 3]
    report = run(ExperimentConfig(experiment, dims=dims, samples=SMALL_SAMPLES[experiment], seed=3))
    assert report.passed, [c.to_dict() for c in report.checks if not c.passed]
    assert {c.name for c in report.checks} <= set(CHECK_TOLERANCES)


def test_every_check_has_a_suite():
    assert set(SUITES) == set(EXPERIMENTS) - {"all"}
    seen = set()
    for name in SUITES:
        seen |= {c.name for c in run(ExperimentConfig(name, dims=[2], samples=1, seed=0)).checks}
    assert seen == set(CHECK_TOLERANCES)


def test_determinism():
    cfg = ExperimentConfig("povm-kernel", dims=[2, 3], samples=15, seed=42)
    a = run(cfg).to_json(include_wall_time=False)
    b = run(cfg).to_json(include_wall_time=False)
    assert a == b
    c = run(ExperimentConfig("povm-kernel", dims=[2, 3], samples=15, seed=43)).to_json(include_wall_time=False)
    assert a != c


def test_report_schema(tmp_path):
    out = tmp_path / "r.json"
    report = run(ExperimentConfig("contextuality", dims=[2], samples=3, out=str(out)))
    data = json.loads(out.read_text())
    assert set(data) == {"experiment", "config", "checks", "pass", "wall_time", "version"}
    for rec in data["checks"]:
        assert set(rec) == {"name", "max_error", "tolerance", "pass", "n_cases"}
    assert data["pass"] == report.passed == all(r["pass"] for r in data["checks"])


def test_check_record():
    assert CheckRecord("x", 0.5, 0.5, 1).passed
    assert not CheckRecord("x", 0.6, 0.5, 1).passed


def test_tolerance_override_fails_check():
    report = run(ExperimentConfig("mb-roundtrip", dims=[3], samples=5, tolerances={"mb.roundtrip": -1.0}))
    assert not report.passed


def test_library_tolerance_override_is_scoped():
    from mbred import get_config

    before = get_config()
    # a loose purity tolerance admits mildly mixed example3 states into the pure part,
    # which the representation check then measures against their top eigenvectors
    strict = run(ExperimentConfig("extension", dims=[2], samples=20, example=3, seed=5))
    loose = run(ExperimentConfig("extension", dims=[2], samples=20, example=3, seed=5, tolerances={"purity_tol": 0.5}))
    assert strict.passed and not loose.passed
    assert get_config() == before


@pytest.mark.parametrize(
    "kwargs",
    [
        {"experiment": "nope"},
        {"experiment": "topology", "dims": [0]},
        {"experiment": "topology", "dims": []},
        {"experiment": "topology", "samples": -1},
        {"experiment": "topology", "seed": -1},
        {"experiment": "topology", "seed": 2**64},
        {"experiment": "topology", "tolerances": {"bogus": 1.0}},
        {"experiment": "extension", "example": 4},
    ],
)
def test_invalid_config(kwargs):
    with pytest.raises(ConfigError):
        run(ExperimentConfig(**kwargs))


def test_load_config_file(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"dim": 3, "samples": 4}))
    assert load_config_file(str(p)) == {"dims": [3], "samples": 4}
    p.write_text(json.dumps({"colour": 1}))
    with pytest.raises(ConfigError):
        load_config_file(str(p))
    p.write_text("[1]")
    with pytest.raises(ConfigError):
        load_config_file(str(p))
    with pytest.raises(ConfigError):
        load_config_file(str(tmp_path / "missing.json"))
