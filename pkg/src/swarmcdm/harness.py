"""Benchmark orchestration: mirrored setting pairs per difficulty, seed
derivation, parallel dispatch with index-ordered aggregation, CSV output."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from swarmcdm import world
from swarmcdm.engine.simulation import DEFAULT_DT, DEFAULT_HORIZON_S, DEFAULT_N_ROBOTS, run_once
from swarmcdm.mechanisms import make_mechanism
from swarmcdm.seeding import derive_seed

CSV_SCHEMA_LINE = "# schema=v1"

RUN_COLUMNS = ("mechanism", "difficulty", "dominant", "setting", "seed",
               "consensus_time_s", "consensus_opinion", "correct",
               "final_correct_count", "msgs_delivered")
REPORT_COLUMNS = ("mechanism", "difficulty", "dominant", "runs", "consensus_runs",
                  "exit_probability", "mean_consensus_time_s")

# Stream tag separating the per-pair dynamics seed from the setting seed.
_TAG_DYNAMICS = 0x5EED


class ConfigError(ValueError):
    """Invalid experiment configuration; the CLI exits with code 2."""


@dataclass
class ExperimentConfig:
    mechanism: str = "vm"
    difficulties: tuple = world.BENCHMARK_DIFFICULTIES
    runs_per_condition: int = 1000
    horizon_s: float = DEFAULT_HORIZON_S
    n_robots: int = DEFAULT_N_ROBOTS
    dt: float = DEFAULT_DT
    master_seed: int = 0
    out_dir: str = "out"
    jobs: int = 1

    def __post_init__(self):
        if self.runs_per_condition < 1:
            raise ConfigError("runs_per_condition must be >= 1")
        n_ticks = self.horizon_s / self.dt
        if abs(n_ticks - round(n_ticks)) > 1e-9:
            raise ConfigError("horizon_s must be a multiple of dt")
        if self.n_robots % 2 != 0:
            raise ConfigError("swarm size must be even (half White, half Black)")
        for d in self.difficulties:
            if not 0.0 < d <= 1.0:
                raise ConfigError(f"difficulty {d} outside (0, 1]")

    @classmethod
    def from_json(cls, path, **overrides):
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        data.update({k: v for k, v in overrides.items() if v is not None})
        if "difficulties" in data:
            data["difficulties"] = tuple(data["difficulties"])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


def initial_opinions(n: int, rng: np.random.Generator) -> list[int]:
    """Half White, half Black, assigned by a random permutation."""
    opinions = np.zeros(n, dtype=int)
    opinions[: n // 2] = world.WHITE
    return list(rng.permutation(opinions))


def run_setting_pair(config: ExperimentConfig, condition_index: int,
                     setting_index: int, mechanism=None):
    """Simulate one benchmark setting and its mirror.

    The White-dominant run and the Black-dominant run share the setting
    seed, hence the same robot start poses and the same dynamics stream;
    only tile colors and initial opinions are inverted.
    """
    if mechanism is None:
        mechanism = make_mechanism(config.mechanism)
    difficulty = config.difficulties[condition_index]
    seed = derive_seed(config.master_seed, condition_index, setting_index)
    setting_rng = np.random.default_rng(seed)
    grid_white = world.generate_pattern(difficulty, world.WHITE, setting_rng)
    opinions = initial_opinions(config.n_robots, setting_rng)
    dyn_seed = derive_seed(seed, _TAG_DYNAMICS, 0)

    records = []
    for dominant, grid, opin in (
        (world.WHITE, grid_white, opinions),
        (world.BLACK, world.mirror(grid_white), [1 - o for o in opinions]),
    ):
        records.append(run_once(
            grid, opin, mechanism, dyn_seed,
            horizon_s=config.horizon_s, dt=config.dt,
            stop_at_consensus=True, collect_log=False,
            mechanism_name=config.mechanism,
            difficulty=difficulty, dominant=dominant))
    return records


def _worker(args):
    config, cond, setting = args
    records = run_setting_pair(config, cond, setting)
    return [_run_row(config, cond, setting, rec) for rec in records]


def _run_row(config, cond, setting, rec):
    correct = int(rec.consensus_opinion == rec.dominant) if rec.consensus_opinion is not None else 0
    return (
        rec.mechanism,
        f"{rec.difficulty}",
        "W" if rec.dominant == world.WHITE else "B",
        str(setting),
        str(rec.seed),
        "" if rec.consensus_time is None else f"{rec.consensus_time:.1f}",
        "" if rec.consensus_opinion is None else str(rec.consensus_opinion),
        str(correct),
        str(sum(1 for o in rec.final_opinions if o == rec.dominant)),
        str(rec.msgs_delivered),
    )


def run_benchmark(config: ExperimentConfig):
    """Run the full protocol and return (run_rows, report_rows)."""
    tasks = [(config, cond, setting)
             for cond in range(len(config.difficulties))
             for setting in range(config.runs_per_condition)]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunk = max(1, len(tasks) // (config.jobs * 8))
            results = list(pool.map(_worker, tasks, chunksize=chunk))
    else:
        results = [_worker(t) for t in tasks]
    run_rows = [row for pair in results for row in pair]
    return run_rows, aggregate_rows(run_rows)


def aggregate_rows(run_rows):
    """Per (mechanism, difficulty, dominant): exit probability and mean
    consensus time over consensus-reaching runs, in first-seen order."""
    groups: dict[tuple, list] = {}
    for row in run_rows:
        groups.setdefault((row[0], row[1], row[2]), []).append(row)
    report = []
    for (mech, diff, dom), rows in groups.items():
        times = [float(r[5]) for r in rows if r[5] != ""]
        correct = sum(int(r[7]) for r in rows)
        report.append((
            mech, diff, dom, str(len(rows)), str(len(times)),
            f"{correct / len(rows):.4f}",
            f"{sum(times) / len(times):.3f}" if times else "",
        ))
    return report


def write_csv(path, columns, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [CSV_SCHEMA_LINE, ",".join(columns)]
    lines.extend(",".join(row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def read_csv(path):
    """Read a schema=v1 CSV back into (columns, rows of strings)."""
    lines = Path(path).read_text().splitlines()
    body = [ln for ln in lines if not ln.startswith("#")]
    columns = body[0].split(",")
    return columns, [ln.split(",") for ln in body[1:]]
