import numpy as np
from hypothesis import given, strategies as st

from swarmcdm.comms import (
    COMM_RANGE,
    QUEUE_CAPACITY,
    EmptyQueueError,
    MessageQueue,
    in_range,
    sensor_l,
    sensor_w,
)
from swarmcdm.engine.simulation import deliver_emissions

import pytest


def test_same_sender_overwrites_in_place():
    q = MessageQueue(owner_id=9)
    q.update(1, 0)
    q.update(2, 1)
    q.update(1, 1)
    assert q.entries == [[1, 1], [2, 1]]


def test_fifo_eviction_at_capacity():
    q = MessageQueue(owner_id=9)
    for sender in range(5):
        q.update(sender, sender % 2)
    assert len(q) == QUEUE_CAPACITY
    assert [e[0] for e in q.entries] == [1, 2, 3, 4]


def test_own_messages_rejected_and_counted():
    q = MessageQueue(owner_id=3)
    q.update(3, 1)
    q.update(3, 0)
    assert len(q) == 0
    assert q.self_rejects == 2


def test_sensors():
    q = MessageQueue(owner_id=9)
    with pytest.raises(EmptyQueueError):
        sensor_w(q)
    assert sensor_l(q) == 0.0
    q.update(0, 1)
    q.update(1, 0)
    q.update(2, 0)
    assert sensor_l(q) == 0.75
    assert abs(sensor_w(q) - 1 / 3) < 1e-12


@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 1)), max_size=60))
def test_queue_invariants_under_arbitrary_traffic(messages):
    owner = 0
    q = MessageQueue(owner_id=owner)
    for sender, opinion in messages:
        q.update(sender, opinion)
    senders = [e[0] for e in q.entries]
    assert len(q) <= QUEUE_CAPACITY
    assert len(set(senders)) == len(senders)
    assert owner not in senders
    # each retained entry carries the sender's most recent opinion
    last = {s: o for s, o in messages}
    for sender, opinion in q.entries:
        assert opinion == last[sender]


def test_in_range_boundary():
    assert in_range(0.0, 0.0, 0.69, 0.0)
    assert not in_range(0.0, 0.0, 0.71, 0.0)
    assert in_range(0.0, 0.0, 0.0, COMM_RANGE / 2)


def test_delivery_respects_range_and_skips_sender():
    px = np.array([0.5, 0.5, 0.5, 1.9])
    py = np.array([0.5, 1.19, 1.22, 1.9])  # robot 1 within 0.70 m, 2 and 3 outside
    queues = [MessageQueue(owner_id=i) for i in range(4)]
    delivered = deliver_emissions([(0, 1)], px, py, queues)
    assert delivered == 1
    assert queues[0].entries == []
    assert queues[1].entries == [[0, 1]]
    assert queues[2].entries == []
    assert queues[3].entries == []
    assert all(q.self_rejects == 0 for q in queues)


def test_delivery_reaches_all_in_range_regardless_of_listener_state():
    px = np.array([1.0, 1.2, 0.8])
    py = np.array([1.0, 1.0, 1.0])
    queues = [MessageQueue(owner_id=i) for i in range(3)]
    delivered = deliver_emissions([(0, 0), (1, 1)], px, py, queues)
    assert delivered == 4
    assert queues[2].entries == [[0, 0], [1, 1]]
