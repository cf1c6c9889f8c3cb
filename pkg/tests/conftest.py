"""Shared helpers for the test suite."""

import itertools

import numpy as np
import pytest

from swarmcdm.comms import MessageQueue


def make_queue(opinions, owner=999):
    """Queue holding the given neighbor opinions, senders 0..n-1."""
    q = MessageQueue(owner)
    for i, o in enumerate(opinions):
        q.update(i, o)
    return q


def all_queue_inputs(max_size=4):
    """Every reachable (opinions, g, own) combination with |Q| <= max_size."""
    for size in range(max_size + 1):
        for opinions in itertools.product((0, 1), repeat=size):
            for g in (0, 1):
                for own in (0, 1):
                    yield opinions, g, own


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
