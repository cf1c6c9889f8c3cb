"""Post-hoc analysis: consensus metrics, exact grouped Shapley attribution
of the decision network, input-value distributions and the Mann-Whitney
U test."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from swarmcdm.mechanisms import ann_output_batch

INPUT_NAMES = ("w", "l", "g", "o_prev")
DEFAULT_GROUPS = {"w+l": (0, 1), "g": (2,), "o_prev": (3,)}


def consensus_time(opinion_trace, dt: float = 0.1):
    """First tick at which all opinions agree, as (time_s, opinion);
    None if the trace never reaches unanimity."""
    for tick, opinions in enumerate(opinion_trace):
        first = opinions[0]
        if all(o == first for o in opinions):
            return tick * dt, first
    return None


def exit_probability(records, correct: int) -> float:
    """Fraction of runs whose consensus opinion is the dominant feature;
    wrong consensus and no consensus both count as failures."""
    if not records:
        raise ValueError("need at least one run record")
    hits = sum(1 for r in records
               if r.consensus_opinion is not None and r.consensus_opinion == correct)
    return hits / len(records)


def shapley_grouped(model, x, background, groups) -> list[float]:
    """Exact Shapley values for grouped players of a 4-input model.

    `model` maps an (n, 4) matrix to n outputs; `x` is the explained
    sample; coalition values are interventional expectations: inputs in
    the coalition come from x, the rest from each background row.
    """
    background = np.asarray(background, dtype=float)
    if background.ndim != 2 or background.shape[0] == 0:
        raise ValueError("background must be a nonempty (n, d) matrix")
    x = np.asarray(x, dtype=float)
    groups = [tuple(g) for g in groups]
    covered = sorted(i for g in groups for i in g)
    if covered != list(range(background.shape[1])):
        raise ValueError("groups must partition the model inputs")

    k = len(groups)
    values = {}
    for mask in range(1 << k):
        z = background.copy()
        for j in range(k):
            if mask >> j & 1:
                z[:, list(groups[j])] = x[list(groups[j])]
        values[mask] = float(np.mean(model(z)))

    fact = [math.factorial(i) for i in range(k + 1)]
    phi = []
    for j in range(k):
        total = 0.0
        for mask in range(1 << k):
            if mask >> j & 1:
                continue
            s = bin(mask).count("1")
            weight = fact[s] * fact[k - s - 1] / fact[k]
            total += weight * (values[mask | (1 << j)] - values[mask])
        phi.append(total)
    return phi


@dataclass
class AttributionReport:
    """Mean absolute Shapley value per input group."""

    mean_abs: dict[str, float]
    n_samples: int
    n_background: int


def attribution_report(genome, decision_log, rng: np.random.Generator,
                       max_background: int = 100, max_samples: int = 1000,
                       groups: dict = DEFAULT_GROUPS) -> AttributionReport:
    """Grouped attribution of the pre-threshold network output over logged
    decision inputs, with a uniformly sampled background set."""
    if not decision_log:
        raise ValueError("decision log is empty")
    inputs = np.array([[row[2], row[3], row[4], row[5]] for row in decision_log],
                      dtype=float)
    n = inputs.shape[0]
    bg_idx = rng.choice(n, size=min(max_background, n), replace=False)
    eval_idx = rng.choice(n, size=min(max_samples, n), replace=False)
    background = inputs[bg_idx]

    def model(z):
        return ann_output_batch(genome, z)

    names = list(groups.keys())
    index_groups = [groups[name] for name in names]
    sums = np.zeros(len(names))
    for i in eval_idx:
        phi = shapley_grouped(model, inputs[i], background, index_groups)
        sums += np.abs(phi)
    means = sums / len(eval_idx)
    return AttributionReport(dict(zip(names, means.tolist())),
                             n_samples=len(eval_idx), n_background=len(bg_idx))


_W_LEVELS = (0.0, 0.25, 0.5, 0.75, 1.0)
_L_LEVELS = (0.0, 0.25, 0.5, 0.75, 1.0)


def input_distribution(decision_log) -> dict[str, Counter]:
    """Histograms of the four decision inputs over the log. `w` uses the
    quarter levels plus an 'other' bin for |Q|=3 thirds; `l` is discrete;
    `g` and `o_prev` are binary."""
    if not decision_log:
        raise ValueError("decision log is empty")
    hist = {name: Counter() for name in INPUT_NAMES}
    for row in decision_log:
        w, l, g, o_prev = row[2], row[3], row[4], row[5]
        w_key = w if any(abs(w - lev) < 1e-9 for lev in _W_LEVELS) else "other"
        hist["w"][w_key] += 1
        hist["l"][min(_L_LEVELS, key=lambda lev: abs(lev - l))] += 1
        hist["g"][int(g)] += 1
        hist["o_prev"][int(o_prev)] += 1
    return hist


def _midranks(pooled) -> list[float]:
    order = sorted(range(len(pooled)), key=pooled.__getitem__)
    ranks = [0.0] * len(pooled)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        midrank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = midrank
        i = j + 1
    return ranks


def mann_whitney_u(sample_a, sample_b, method: str = "auto") -> tuple[float, float]:
    """Two-sided Mann-Whitney U test.

    Returns (U_a, p). `method` is 'exact' (full enumeration of rank
    assignments, ties handled by permuting observed values), 'normal'
    (tie- and continuity-corrected approximation) or 'auto' (exact when
    n_a * n_b <= 64).
    """
    a = list(sample_a)
    b = list(sample_b)
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        raise ValueError("both samples must be nonempty")
    pooled = a + b
    ranks = _midranks(pooled)
    rank_sum_a = sum(ranks[:n1])
    u_a = rank_sum_a - n1 * (n1 + 1) / 2.0

    if method not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown method {method!r}")
    if method == "exact" or (method == "auto" and n1 * n2 <= 64):
        return u_a, _exact_p(ranks, n1, n2, u_a)
    return u_a, _normal_p(ranks, n1, n2, u_a)


def _exact_p(ranks, n1, n2, u_obs) -> float:
    mu = n1 * n2 / 2.0
    dev = abs(u_obs - mu)
    offset = n1 * (n1 + 1) / 2.0
    count = 0
    total = 0
    for combo in itertools.combinations(range(n1 + n2), n1):
        u = sum(ranks[i] for i in combo) - offset
        total += 1
        if abs(u - mu) >= dev - 1e-12:
            count += 1
    return count / total


def _normal_p(ranks, n1, n2, u_obs) -> float:
    n = n1 + n2
    mu = n1 * n2 / 2.0
    tie_term = sum(t ** 3 - t for t in Counter(ranks).values())
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0.0:
        return 1.0
    diff = u_obs - mu
    if diff > 0.5:
        z = (diff - 0.5) / math.sqrt(var)
    elif diff < -0.5:
        z = (diff + 0.5) / math.sqrt(var)
    else:
        z = 0.0
    return math.erfc(abs(z) / math.sqrt(2.0))
