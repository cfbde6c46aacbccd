from __future__ import annotations

import json

import pytest

from qpecost.cost import cost_breakdown
from qpecost.experiment import (
    SCHEMA,
    ExperimentConfig,
    RunRecord,
    read_records,
    run_campaign,
    run_one,
    summarize,
    wilson_interval,
)
from qpecost.phase import PhaseFraction, mod1_distance


def test_config_round_trip(tmp_path):
    cfg = ExperimentConfig("acpa", 6, k=4, noise="imperfect", repetitions=5, seed=9)
    path = tmp_path / "cfg.json"
    path.write_text(cfg.to_json())
    again = ExperimentConfig.load(path)
    assert again == cfg
    assert again.config_hash() == cfg.config_hash()
    assert json.loads(cfg.to_json())["schema"] == SCHEMA


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("qft", 4)
    with pytest.raises(ValueError):
        ExperimentConfig("kitaev", 4, phase="0.10", grid=True)
    with pytest.raises(ValueError):
        ExperimentConfig("kitaev", 4, phase="0.12")
    with pytest.raises(ValueError):
        ExperimentConfig("kitaev", 4, noise="loud")
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"schema": "other/9", "algorithm": "kitaev", "n": 4})
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"algorithm": "kitaev", "n": 4, "colour": "red"})


def test_reload_reproduces_results(tmp_path):
    cfg = ExperimentConfig("fpe", 6, repetitions=4, seed=2)
    path = tmp_path / "cfg.json"
    path.write_text(cfg.to_json())
    a = [r.to_json() for r in run_campaign(cfg)]
    b = [r.to_json() for r in run_campaign(ExperimentConfig.load(path))]
    assert a == b


def test_parallel_matches_serial():
    cfg = ExperimentConfig("kitaev", 6, repetitions=8, seed=4)
    assert [r.to_json() for r in run_campaign(cfg, workers=2)] == [r.to_json() for r in run_campaign(cfg)]


@pytest.mark.filterwarnings("ignore::qpecost.acpa.VacuousBoundWarning")
def test_success_flag_matches_distance():
    cfg = ExperimentConfig("acpa", 8, k=3, noise="imperfect", repetitions=40, seed=1)
    for rec in run_campaign(cfg):
        truth = PhaseFraction.from_binary_string(rec.true_phase)
        est = PhaseFraction.from_binary_string(rec.estimated_phase)
        assert rec.success == (mod1_distance(est, truth) < 2**-8)


def test_grid_and_explicit_sources():
    grid = ExperimentConfig("kitaev", 3, grid=True, repetitions=8)
    assert [run_one(grid, r).true_phase for r in range(8)] == [
        str(PhaseFraction(i, 3)) for i in range(8)
    ]
    explicit = ExperimentConfig("kitaev", 4, phase="0.1011", repetitions=2)
    assert {r.true_phase for r in run_campaign(explicit)} == {"0.1011"}


def test_tallies_equal_cost_model():
    for algo, k in (("kitaev", 3), ("acpa", 3), ("acpa", 6)):
        cfg = ExperimentConfig(algo, 9, k=k, repetitions=1)
        rec = run_one(cfg, 0)
        m = cfg.estimator_config().trials
        model = cost_breakdown(algo, 9, k, trials=m)
        assert rec.u_invocations == model.u_invocations_exact
        assert rec.measurements == 9 * m
        if algo == "acpa":
            assert rec.rotations == model.rotation_invocations_applied


def test_larger_k_uses_fewer_trials():
    r3 = run_one(ExperimentConfig("acpa", 8, k=3, seed=7), 0)
    r6 = run_one(ExperimentConfig("acpa", 8, k=6, seed=7), 0)
    assert r6.measurements < r3.measurements


def test_records_round_trip(tmp_path):
    cfg = ExperimentConfig("acpa", 5, repetitions=6, seed=3, timing=True)
    records = list(run_campaign(cfg))
    path = tmp_path / "runs.jsonl"
    path.write_text("".join(r.to_json() + "\n" for r in records))
    back = read_records(path)
    assert back == records
    assert summarize(back) == summarize(records)
    assert all(r.wall_time_s is not None for r in back)


def test_timing_off_omits_wall_time():
    rec = run_one(ExperimentConfig("kitaev", 3), 0)
    assert "wall_time_s" not in json.loads(rec.to_json())
    assert RunRecord.from_json(rec.to_json()) == rec


def test_wilson_interval():
    low, high = wilson_interval(375, 500)
    assert low < 0.75 < high
    assert wilson_interval(0, 10)[0] == 0.0
    summary = summarize([])
    assert summary["runs"] == 0
