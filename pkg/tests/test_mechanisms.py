import math

import numpy as np
import pytest

from conftest import all_queue_inputs, make_queue
from swarmcdm.mechanisms import (
    GENOME_LENGTH,
    AnnMechanism,
    GenomeError,
    ann_decide,
    ann_output,
    hc1,
    hc2,
    load_genome,
    majority_rule,
    make_mechanism,
    save_genome,
    voter_model,
)
from swarmcdm.world import BLACK, WHITE


# Independent counting oracles, written from the rule definitions.

def oracle_mr(opinions, g, own):
    whites = sum(opinions) + own
    total = len(opinions) + 1
    if whites * 2 == total:
        return own
    return WHITE if whites * 2 > total else BLACK


def oracle_hc1(opinions, g, own):
    if not opinions:
        return own
    w = sum(opinions) / len(opinions)
    return WHITE if 0.75 * w + 0.25 * g >= 0.5 else BLACK


def oracle_hc2(opinions, g, own):
    if not opinions:
        return own
    w = sum(opinions) / len(opinions)
    if w >= 0.75:
        return WHITE
    if w <= 0.25:
        return BLACK
    return g


def test_majority_rule_matches_enumeration_oracle():
    rng = np.random.default_rng(0)
    for opinions, g, own in all_queue_inputs():
        assert majority_rule(make_queue(opinions), g, own, rng) == oracle_mr(opinions, g, own)


def test_hc1_matches_enumeration_oracle():
    for opinions, g, own in all_queue_inputs():
        assert hc1(make_queue(opinions), g, own) == oracle_hc1(opinions, g, own)


def test_hc2_matches_enumeration_oracle():
    for opinions, g, own in all_queue_inputs():
        assert hc2(make_queue(opinions), g, own) == oracle_hc2(opinions, g, own)


def test_hc1_equals_hc2_on_full_queues():
    for opinions, g, own in all_queue_inputs():
        if len(opinions) == 4:
            q1, q2 = make_queue(opinions), make_queue(opinions)
            assert hc1(q1, g, own) == hc2(q2, g, own)


def test_hc1_hc2_differ_at_two_thirds_black_ground():
    opinions = (1, 1, 0)  # w = 2/3
    assert hc1(make_queue(opinions), BLACK, BLACK) == WHITE  # 0.75*2/3 = 0.5
    assert hc2(make_queue(opinions), BLACK, BLACK) == BLACK  # follows ground


def test_hc2_color_symmetric_hc1_not():
    hc1_breaks = 0
    for opinions, g, own in all_queue_inputs():
        inv = tuple(1 - o for o in opinions)
        assert hc2(make_queue(opinions), g, own) == 1 - hc2(make_queue(inv), 1 - g, 1 - own)
        if hc1(make_queue(opinions), g, own) != 1 - hc1(make_queue(inv), 1 - g, 1 - own):
            hc1_breaks += 1
    assert hc1_breaks > 0


def test_voter_model_empty_queue_keeps_own(rng):
    assert voter_model(make_queue(()), WHITE, BLACK, rng) == BLACK


def test_voter_model_adoption_frequency():
    rng = np.random.default_rng(77)
    for opinions, expect in (((1, 0), 0.5), ((1, 0, 0), 1 / 3)):
        q = make_queue(opinions)
        hits = sum(voter_model(q, 0, 0, rng) for _ in range(10_000))
        assert abs(hits / 10_000 - expect) < 0.02


def test_ann_zero_genome_outputs_half():
    genome = np.zeros(GENOME_LENGTH)
    assert ann_output(genome, 0.3, 0.7, 1, 0) == 0.5
    assert ann_decide(genome, 0.3, 0.7, 1, 0) == WHITE  # >= 0.5 threshold


def test_ann_output_bias_direction():
    genome = np.zeros(GENOME_LENGTH)
    genome[18] = 5.0
    assert ann_output(genome, 0, 0, 0, 0) > 0.99
    genome[18] = -5.0
    assert ann_output(genome, 1, 1, 1, 1) < 0.01


def test_ann_single_path_manual_value():
    # one active hidden unit: y = logistic(tanh(2*w))
    genome = np.zeros(GENOME_LENGTH)
    genome[0] = 2.0   # hidden 0, input w
    genome[15] = 1.0  # output weight of hidden 0
    expected = 1.0 / (1.0 + math.exp(-math.tanh(2.0)))
    assert abs(ann_output(genome, 1.0, 0.0, 0.0, 0.0) - expected) < 1e-6


def test_ann_matches_pure_math_forward_pass():
    rng = np.random.default_rng(5)
    for _ in range(50):
        genome = rng.uniform(-5, 5, GENOME_LENGTH)
        x = rng.uniform(0, 1, 4)
        hidden = [math.tanh(sum(genome[4 * h + i] * x[i] for i in range(4)) + genome[12 + h])
                  for h in range(3)]
        pre = sum(genome[15 + h] * hidden[h] for h in range(3)) + genome[18]
        expected = 1.0 / (1.0 + math.exp(-pre))
        assert abs(ann_output(genome, *x) - expected) < 1e-12


def test_ann_mechanism_empty_queue_inputs():
    # empty queue must feed (w, l) = (0, 0), not raise
    genome = np.zeros(GENOME_LENGTH)
    genome[15:18] = 5.0
    genome[0] = -5.0  # would flip the decision if w were nonzero
    mech = AnnMechanism(genome)
    assert mech(make_queue(()), 0, 0) == WHITE


def test_genome_round_trip_exact(tmp_path):
    rng = np.random.default_rng(3)
    genome = rng.uniform(-5, 5, GENOME_LENGTH)
    path = tmp_path / "g.txt"
    save_genome(path, genome)
    loaded = load_genome(path)
    assert np.array_equal(loaded, genome)


def test_genome_file_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("not a genome\n1 2 3\n")
    with pytest.raises(GenomeError):
        load_genome(bad)
    short = tmp_path / "short.txt"
    short.write_text("ann-genome v1 n=19\n1 2 3\n")
    with pytest.raises(GenomeError):
        load_genome(short)
    with pytest.raises(GenomeError):
        AnnMechanism(np.zeros(5))


def test_make_mechanism(tmp_path):
    assert make_mechanism("vm") is voter_model
    assert make_mechanism("mr") is majority_rule
    assert make_mechanism("hc1") is hc1
    assert make_mechanism("hc2") is hc2
    path = tmp_path / "g.txt"
    save_genome(path, np.zeros(GENOME_LENGTH))
    assert isinstance(make_mechanism(f"ann:{path}"), AnnMechanism)
    with pytest.raises(ValueError):
        make_mechanism("besteffort")
