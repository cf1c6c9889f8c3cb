"""Pluggable decision mechanisms, all with the contract
``decide(queue, ground, own_opinion, rng) -> opinion``."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from swarmcdm.comms import MessageQueue, sensor_l, sensor_w
from swarmcdm.world import BLACK, WHITE

GENOME_LENGTH = 19  # 4*3 input weights + 3 hidden biases + 3 output weights + 1 bias
N_HIDDEN = 3
GENE_BOUND = 5.0

MECHANISM_NAMES = ("vm", "mr", "hc1", "hc2")


class GenomeError(ValueError):
    """Genome has the wrong length or an unreadable file format."""


def voter_model(queue: MessageQueue, g: int, own: int, rng: np.random.Generator) -> int:
    """Adopt the opinion of a uniformly random queued neighbor."""
    n = len(queue)
    if n == 0:
        return own
    return queue.entries[int(rng.integers(n))][1]


def majority_rule(queue: MessageQueue, g: int, own: int, rng=None) -> int:
    """Majority over the queue plus the robot's own opinion; ties keep own."""
    whites = sum(e[1] for e in queue.entries)
    total = len(queue) + 1
    whites += own
    if 2 * whites > total:
        return WHITE
    if 2 * whites < total:
        return BLACK
    return own


def hc1(queue: MessageQueue, g: int, own: int, rng=None) -> int:
    """Weighted sum 0.75*w + 0.25*g thresholded at 0.5; empty queue keeps own."""
    if len(queue) == 0:
        return own
    return WHITE if 0.75 * sensor_w(queue) + 0.25 * g >= 0.5 else BLACK


def hc2(queue: MessageQueue, g: int, own: int, rng=None) -> int:
    """Conditional rule: clear 3/4 majority wins, otherwise follow the
    ground sensor; empty queue keeps own."""
    if len(queue) == 0:
        return own
    w = sensor_w(queue)
    if w >= 0.75:
        return WHITE
    if w <= 0.25:
        return BLACK
    return WHITE if g == 1 else BLACK


def _check_genome(genome: np.ndarray) -> np.ndarray:
    genome = np.asarray(genome, dtype=float)
    if genome.shape != (GENOME_LENGTH,):
        raise GenomeError(f"expected {GENOME_LENGTH} genes, got shape {genome.shape}")
    return genome


def ann_output_batch(genome: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Pre-threshold network outputs for an (n, 4) matrix of inputs
    (w, l, g, o_prev): tanh hidden layer (3 units), logistic output."""
    genome = _check_genome(genome)
    w1 = genome[0:12].reshape(N_HIDDEN, 4)
    b1 = genome[12:15]
    w2 = genome[15:18]
    b2 = genome[18]
    hidden = np.tanh(np.asarray(x, dtype=float) @ w1.T + b1)
    return 1.0 / (1.0 + np.exp(-(hidden @ w2 + b2)))


def ann_output(genome: np.ndarray, w: float, l: float, g: float, o_prev: float) -> float:
    return float(ann_output_batch(genome, np.array([[w, l, g, o_prev]]))[0])


def ann_decide(genome: np.ndarray, w: float, l: float, g: int, o_prev: int) -> int:
    return WHITE if ann_output(genome, w, l, g, o_prev) >= 0.5 else BLACK


class AnnMechanism:
    """Evolved-network mechanism; empty queue feeds (w, l) = (0, 0)."""

    def __init__(self, genome: np.ndarray):
        self.genome = _check_genome(genome)

    def __call__(self, queue: MessageQueue, g: int, own: int, rng=None) -> int:
        if len(queue) == 0:
            w = 0.0
        else:
            w = sensor_w(queue)
        return ann_decide(self.genome, w, sensor_l(queue), g, own)


def save_genome(path, genome: np.ndarray) -> None:
    genome = _check_genome(genome)
    text = f"ann-genome v1 n={GENOME_LENGTH}\n" + " ".join(repr(float(v)) for v in genome) + "\n"
    Path(path).write_text(text)


def load_genome(path) -> np.ndarray:
    lines = Path(path).read_text().strip().splitlines()
    if len(lines) != 2 or not lines[0].startswith("ann-genome v1"):
        raise GenomeError(f"{path}: not an ann-genome v1 file")
    values = [float(tok) for tok in lines[1].split()]
    if len(values) != GENOME_LENGTH:
        raise GenomeError(f"{path}: expected {GENOME_LENGTH} values, got {len(values)}")
    return np.array(values)


def make_mechanism(spec: str):
    """Resolve a CLI mechanism string: vm | mr | hc1 | hc2 | ann:<genome-file>."""
    if spec == "vm":
        return voter_model
    if spec == "mr":
        return majority_rule
    if spec == "hc1":
        return hc1
    if spec == "hc2":
        return hc2
    if spec.startswith("ann:"):
        return AnnMechanism(load_genome(spec[4:]))
    raise ValueError(f"unknown mechanism {spec!r} (expected vm|mr|hc1|hc2|ann:<file>)")
