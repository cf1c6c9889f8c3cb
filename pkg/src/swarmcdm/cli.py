"""Command-line interface.

Subcommands: gen-env, simulate, benchmark, evolve, shap, stats. All CSV
outputs start with a `# schema=v1` comment line. Exit code 0 on success,
2 on configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from swarmcdm import analysis, evolution, harness, world
from swarmcdm.engine.simulation import DEFAULT_DT, DEFAULT_HORIZON_S, DEFAULT_N_ROBOTS, run_once
from swarmcdm.harness import ConfigError, ExperimentConfig, write_csv
from swarmcdm.mechanisms import GenomeError, load_genome, make_mechanism, save_genome
from swarmcdm.seeding import derive_seed

LOG_COLUMNS = ("t", "robot_id", "w", "l", "g", "o_prev", "o_new")


def _parse_dominant(text: str) -> int:
    if text.upper() in ("W", "WHITE", "1"):
        return world.WHITE
    if text.upper() in ("B", "BLACK", "0"):
        return world.BLACK
    raise ConfigError(f"dominant must be W or B, got {text!r}")


def cmd_gen_env(args) -> int:
    dominant = _parse_dominant(args.dominant)
    rng = np.random.default_rng(args.seed)
    grid = world.generate_pattern(args.difficulty, dominant, rng)
    text = world.grid_to_text(grid, args.difficulty, dominant, args.seed)
    Path(args.out).write_text(text)
    print(f"wrote {args.out}: {grid.white_count} White / {grid.black_count} Black "
          f"(achieved difficulty {grid.difficulty:.4f})")
    return 0


def cmd_simulate(args) -> int:
    mechanism = make_mechanism(args.mechanism)
    if args.env:
        grid, _meta = world.grid_from_text(Path(args.env).read_text())
    else:
        env_rng = np.random.default_rng(derive_seed(args.seed, 0xE5E, 0))
        grid = world.generate_pattern(args.difficulty, _parse_dominant(args.dominant), env_rng)
    rng = np.random.default_rng(args.seed)
    opinions = harness.initial_opinions(args.robots, rng)
    record = run_once(grid, opinions, mechanism, args.seed, rng=rng,
                      horizon_s=args.horizon_s, dt=DEFAULT_DT,
                      mechanism_name=args.mechanism,
                      difficulty=grid.difficulty, dominant=grid.dominant)
    if args.out:
        rows = [(f"{r[0]:.1f}", str(r[1]), f"{r[2]:.6g}", f"{r[3]:.2f}",
                 str(int(r[4])), str(r[5]), str(r[6])) for r in record.decision_log]
        write_csv(args.out, LOG_COLUMNS, rows)
    if record.consensus_time is None:
        print(f"no consensus within {args.horizon_s} s")
    else:
        name = "White" if record.consensus_opinion == world.WHITE else "Black"
        print(f"consensus on {name} at {record.consensus_time:.1f} s")
    print(f"decisions logged: {len(record.decision_log)}, "
          f"messages delivered: {record.msgs_delivered}")
    return 0


def cmd_benchmark(args) -> int:
    overrides = dict(
        mechanism=args.mechanism,
        difficulties=tuple(args.difficulty) if args.difficulty else None,
        runs_per_condition=args.runs,
        horizon_s=args.horizon_s,
        master_seed=args.seed,
        jobs=args.jobs,
        out_dir=args.out,
    )
    if args.config:
        config = ExperimentConfig.from_json(args.config, **overrides)
    else:
        defaults = ExperimentConfig()
        config = ExperimentConfig(**{k: (v if v is not None else getattr(defaults, k))
                                     for k, v in overrides.items()})
    make_mechanism(config.mechanism)  # validate before the long part
    run_rows, report_rows = harness.run_benchmark(config)
    out = Path(config.out_dir)
    tag = config.mechanism.split(":")[0]
    write_csv(out / f"runs_{tag}.csv", harness.RUN_COLUMNS, run_rows)
    write_csv(out / f"report_{tag}.csv", harness.REPORT_COLUMNS, report_rows)
    for row in report_rows:
        print(" ".join(f"{c}={v}" for c, v in zip(harness.REPORT_COLUMNS, row)))
    return 0


def cmd_evolve(args) -> int:
    config = evolution.EvolutionConfig(
        population=args.population,
        generations=args.generations,
        n_patterns=args.patterns,
        eval_horizon_s=args.eval_horizon_s,
        difficulty=args.difficulty,
        mutation_rate=args.mutation_rate,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    master = derive_seed(args.seed, 0xEA0, args.run_index)
    best, history = evolution.evolve(config, master)
    genome_path = out / f"genome_run{args.run_index}.txt"
    save_genome(genome_path, best)
    write_csv(out / f"history_run{args.run_index}.csv",
              ("generation", "best_fitness", "median_fitness"),
              [(str(g), f"{b:.6f}", f"{m:.6f}") for g, b, m in history])
    print(f"run {args.run_index}: best fitness {history[-1][1]:.4f}, "
          f"genome at {genome_path}")
    return 0


def cmd_shap(args) -> int:
    genome = load_genome(args.genome)
    columns, rows = harness.read_csv(args.log)
    idx = {name: columns.index(name) for name in LOG_COLUMNS}
    log = [(float(r[idx["t"]]), int(r[idx["robot_id"]]), float(r[idx["w"]]),
            float(r[idx["l"]]), float(r[idx["g"]]), int(r[idx["o_prev"]]),
            int(r[idx["o_new"]])) for r in rows]
    if not log:
        raise ConfigError(f"{args.log}: empty decision log")
    rng = np.random.default_rng(args.seed)
    report = analysis.attribution_report(genome, log, rng)
    write_csv(args.out, ("group", "mean_abs_shap"),
              [(name, f"{value:.6f}") for name, value in report.mean_abs.items()])
    for name, value in report.mean_abs.items():
        print(f"{name}: {value:.6f}")
    return 0


def _read_sample(path, column):
    columns, rows = harness.read_csv(path)
    if column not in columns:
        raise ConfigError(f"{path}: no column {column!r}")
    i = columns.index(column)
    values = [float(r[i]) for r in rows if r[i] != ""]
    if not values:
        raise ConfigError(f"{path}: column {column!r} has no values")
    return values


def cmd_stats(args) -> int:
    a = _read_sample(args.a, args.column)
    b = _read_sample(args.b, args.column)
    u, p = analysis.mann_whitney_u(a, b)
    pair = f"{Path(args.a).stem}-vs-{Path(args.b).stem}"
    if args.out:
        write_csv(args.out, ("pair", "U", "p"), [(pair, f"{u:.6g}", f"{p:.6g}")])
    print(f"{pair}: U={u:.6g} p={p:.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmcdm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-env", help="generate a floor pattern file")
    p.add_argument("--difficulty", type=float, required=True)
    p.add_argument("--dominant", default="W")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_env)

    p = sub.add_parser("simulate", help="run one simulation, log decisions")
    p.add_argument("--mechanism", required=True)
    p.add_argument("--difficulty", type=float, default=0.25)
    p.add_argument("--dominant", default="W")
    p.add_argument("--env", help="pattern file from gen-env (overrides --difficulty)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon-s", type=float, default=DEFAULT_HORIZON_S)
    p.add_argument("--robots", type=int, default=DEFAULT_N_ROBOTS)
    p.add_argument("--out", help="decision-log CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("benchmark", help="run the benchmark protocol")
    p.add_argument("--config", help="JSON config; flags override its fields")
    p.add_argument("--mechanism")
    p.add_argument("--difficulty", type=float, action="append")
    p.add_argument("--runs", type=int)
    p.add_argument("--horizon-s", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("evolve", help="evolve a decision network")
    p.add_argument("--population", type=int, default=50)
    p.add_argument("--generations", type=int, default=600)
    p.add_argument("--patterns", type=int, default=3)
    p.add_argument("--eval-horizon-s", type=float, default=200.0)
    p.add_argument("--difficulty", type=float, default=0.25)
    p.add_argument("--mutation-rate", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--run-index", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("shap", help="grouped attribution of a genome over a decision log")
    p.add_argument("--genome", required=True)
    p.add_argument("--log", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_shap)

    p = sub.add_parser("stats", help="Mann-Whitney U test between two CSV columns")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--column", default="consensus_time_s")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GenomeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc}".strip(), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
