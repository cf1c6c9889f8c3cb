"""Neuroevolution of decision networks: min-of-six fitness over mirrored
pattern pairs and a generational EA with elitism of one."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from swarmcdm import world
from swarmcdm.engine.simulation import run_once
from swarmcdm.mechanisms import AnnMechanism, GENE_BOUND, GENOME_LENGTH
from swarmcdm.seeding import derive_seed

SELECTION_EPSILON = 1e-6
MUTATION_SIGMA = 0.5
INIT_RANGE = 1.0

# Stream tags for independent rng derivation.
_TAG_INIT = 0
_TAG_PATTERNS = 1
_TAG_GENERATION = 2
_TAG_EVAL_BASE = 10


@dataclass
class EvolutionConfig:
    population: int = 50
    generations: int = 600
    mutation_rate: float = 0.2
    elitism: int = 1
    n_patterns: int = 3
    eval_horizon_s: float = 200.0
    difficulty: float = 0.25
    n_robots: int = 20
    dt: float = 0.1
    resample_patterns: bool = True

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if self.elitism not in (0, 1):
            raise ValueError("elitism must be 0 or 1")


def fitness_final_step(final_opinions, dominant: int) -> float:
    """Fraction of robots whose last-step opinion matches the dominant feature."""
    n = len(final_opinions)
    return sum(1 for o in final_opinions if o == dominant) / n


def genome_fitness(genome: np.ndarray, patterns: list[world.TileGrid],
                   config: EvolutionConfig, eval_seed: int) -> float:
    """Minimum final-step fitness over the patterns and their mirrors,
    simulated with a homogeneous swarm for the evaluation horizon."""
    mechanism = AnnMechanism(genome)
    grids = list(patterns) + [world.mirror(p) for p in patterns]
    best_min = 1.0
    for k, grid in enumerate(grids):
        run_seed = derive_seed(eval_seed, 0, k)
        rng = np.random.default_rng(run_seed)
        opinions = _initial_opinions(config.n_robots, rng)
        record = run_once(grid, opinions, mechanism, run_seed, rng=rng,
                          horizon_s=config.eval_horizon_s, dt=config.dt,
                          stop_at_consensus=False, collect_log=False)
        f = fitness_final_step(record.final_opinions, grid.dominant)
        if f < best_min:
            best_min = f
        if best_min == 0.0:
            break
    return best_min


def _initial_opinions(n: int, rng: np.random.Generator) -> list[int]:
    opinions = np.zeros(n, dtype=int)
    opinions[: n // 2] = world.WHITE
    return list(rng.permutation(opinions))


def mutate(genome: np.ndarray, rng: np.random.Generator,
           rate: float = 0.2, sigma: float = MUTATION_SIGMA) -> np.ndarray:
    """Per-gene Gaussian perturbation with probability `rate`, clamped."""
    out = genome.copy()
    mask = rng.random(GENOME_LENGTH) < rate
    out[mask] += rng.normal(0.0, sigma, size=int(mask.sum()))
    return np.clip(out, -GENE_BOUND, GENE_BOUND)


def _sample_patterns(config: EvolutionConfig, master_seed: int, generation: int):
    rng = np.random.default_rng(derive_seed(master_seed, _TAG_PATTERNS, generation))
    return [world.generate_pattern(config.difficulty, world.WHITE, rng)
            for _ in range(config.n_patterns)]


def evolve(config: EvolutionConfig, master_seed: int, progress=None):
    """Run the generational EA.

    Returns (best_genome, history) where history rows are
    (generation, best_fitness, median_fitness). The elite keeps its
    recorded fitness, so the best trace is nondecreasing.
    """
    init_rng = np.random.default_rng(derive_seed(master_seed, _TAG_INIT, 0))
    population = [init_rng.uniform(-INIT_RANGE, INIT_RANGE, GENOME_LENGTH)
                  for _ in range(config.population)]
    fitnesses = [None] * config.population
    history = []
    patterns = _sample_patterns(config, master_seed, 0)

    for gen in range(config.generations):
        if config.resample_patterns and gen > 0:
            patterns = _sample_patterns(config, master_seed, gen)
        for idx in range(config.population):
            if fitnesses[idx] is None:
                eval_seed = derive_seed(master_seed, _TAG_EVAL_BASE + gen, idx)
                fitnesses[idx] = genome_fitness(population[idx], patterns,
                                                config, eval_seed)
        best_idx = int(np.argmax(fitnesses))
        history.append((gen, float(fitnesses[best_idx]),
                        float(np.median(fitnesses))))
        if progress is not None:
            progress(gen, history[-1])
        if gen == config.generations - 1:
            break

        gen_rng = np.random.default_rng(derive_seed(master_seed, _TAG_GENERATION, gen))
        weights = np.asarray(fitnesses, dtype=float) + SELECTION_EPSILON
        probs = weights / weights.sum()
        n_offspring = config.population - config.elitism
        parents = gen_rng.choice(config.population, size=n_offspring, p=probs)
        offspring = [mutate(population[p], gen_rng, config.mutation_rate)
                     for p in parents]
        elites = [population[best_idx]] if config.elitism else []
        elite_fit = [fitnesses[best_idx]] if config.elitism else []
        population = elites + offspring
        fitnesses = elite_fit + [None] * n_offspring

    best_idx = int(np.argmax([f for f in fitnesses]))
    return population[best_idx], history
