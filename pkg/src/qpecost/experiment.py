"""Seeded Monte Carlo campaigns and their JSON Lines persistence."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Iterator

from scipy.stats import binomtest

from .acpa import AcpaConfig, run_acpa
from .fpe import FpeConfig, run_fpe
from .kitaev import KitaevConfig, run_kitaev
from .measurement import NoiseMode, NoiseModel, RngStream
from .phase import PhaseFraction

SCHEMA = "qpecost.experiment/1"
ALGORITHMS = ("kitaev", "acpa", "fpe")

# child stream indices under each run's RngStream
_PHASE_STREAM = 0
_ESTIMATOR_STREAM = 1


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str
    n: int
    k: int = 3
    noise: str = "perfect"
    eta: float | None = None
    phase: str | None = None
    phase_bits: int | None = None
    grid: bool = False
    repetitions: int = 100
    seed: int = 0
    c: float = 0.25
    timing: bool = False

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if self.phase is not None and self.grid:
            raise ValueError("an explicit phase and a grid sweep are mutually exclusive")
        if self.phase is not None:
            PhaseFraction.from_binary_string(self.phase)
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        NoiseMode(self.noise_mode_value)

    @property
    def noise_mode_value(self) -> str:
        return {"imperfect": "worst_case"}.get(self.noise, self.noise)

    @property
    def source(self) -> str:
        return "explicit" if self.phase is not None else "grid" if self.grid else "random"

    @property
    def bits(self) -> int:
        return self.phase_bits or self.n

    def noise_model(self) -> NoiseModel:
        mode = NoiseMode(self.noise_mode_value)
        if mode is NoiseMode.PERFECT:
            return NoiseModel.perfect()
        return NoiseModel(mode, self.eta)

    def estimator_config(self):
        if self.algorithm == "kitaev":
            return KitaevConfig(self.n, self.c)
        if self.algorithm == "acpa":
            return AcpaConfig(self.n, self.k, self.noise_model())
        return FpeConfig(self.n)

    # serialisation -----------------------------------------------------------

    def to_dict(self) -> dict:
        return {"schema": SCHEMA, **asdict(self)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        data = dict(data)
        schema = data.pop("schema", SCHEMA)
        if schema != SCHEMA:
            raise ValueError(f"unsupported config schema {schema!r} (expected {SCHEMA!r})")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        return cls.from_dict(json.loads(Path(path).read_text()))

    def config_hash(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class RunRecord:
    config_hash: str
    seed: int
    run: int
    true_phase: str
    estimated_phase: str
    bit_success: list[bool]
    success: bool
    measurements: int
    u_invocations: int
    u_invocations_log2: float
    rotations: int
    flags: list[str]
    wall_time_s: float | None = None

    def to_json(self) -> str:
        d = asdict(self)
        if self.wall_time_s is None:
            del d["wall_time_s"]
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> RunRecord:
        return cls(**json.loads(line))


def _phase_for_run(cfg: ExperimentConfig, run: int, rng: RngStream) -> PhaseFraction:
    if cfg.source == "explicit":
        return PhaseFraction.from_binary_string(cfg.phase)
    bits = cfg.bits
    if cfg.source == "grid":
        return PhaseFraction(run % (1 << bits), bits)
    return PhaseFraction(int(rng.generator.integers(0, 1 << bits)), bits)


def run_one(cfg: ExperimentConfig, run: int) -> RunRecord:
    """Run ``run`` of the campaign; depends only on ``(cfg, run)``."""
    start = time.perf_counter()
    stream = RngStream(cfg.seed, run)
    phi = _phase_for_run(cfg, run, stream.child(_PHASE_STREAM))
    est_cfg = cfg.estimator_config()
    runner = {"kitaev": run_kitaev, "acpa": run_acpa, "fpe": run_fpe}[cfg.algorithm]
    report = runner(phi, est_cfg, stream.child(_ESTIMATOR_STREAM))
    return RunRecord(
        config_hash=cfg.config_hash(),
        seed=cfg.seed,
        run=run,
        true_phase=str(phi),
        estimated_phase=str(report.phase),
        bit_success=report.bit_flags(phi),
        success=report.succeeded(phi),
        measurements=report.measurements,
        u_invocations=report.u_invocations,
        u_invocations_log2=report.u_invocations_log2,
        rotations=report.rotations,
        flags=report.flags,
        wall_time_s=time.perf_counter() - start if cfg.timing else None,
    )


def _run_star(args):
    return run_one(*args)


def run_campaign(cfg: ExperimentConfig, workers: int = 1) -> Iterator[RunRecord]:
    """Yield the ``cfg.repetitions`` records in run order, optionally on ``workers`` processes."""
    jobs = [(cfg, r) for r in range(cfg.repetitions)]
    if workers <= 1:
        for job in jobs:
            yield run_one(*job)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_run_star, jobs, chunksize=max(1, len(jobs) // (4 * workers)))


def wilson_interval(successes: int, runs: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(successes, runs).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def summarize(records: Iterable[RunRecord]) -> dict:
    records = list(records)
    runs = len(records)
    wins = sum(r.success for r in records)
    low, high = wilson_interval(wins, runs) if runs else (math.nan, math.nan)
    return {
        "type": "summary",
        "runs": runs,
        "successes": wins,
        "success_rate": wins / runs if runs else math.nan,
        "wilson95_low": low,
        "wilson95_high": high,
        "mean_measurements": sum(r.measurements for r in records) / runs if runs else math.nan,
        "flagged_runs": sum(bool(r.flags) for r in records),
    }


def read_records(path: str | Path) -> list[RunRecord]:
    with open(path) as fh:
        return [RunRecord.from_json(line) for line in fh if line.strip()]
