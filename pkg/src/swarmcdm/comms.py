"""Opinion broadcasting and the bounded unique-sender message queue with
its two derived virtual sensors."""

from __future__ import annotations

QUEUE_CAPACITY = 4
COMM_RANGE = 0.70          # m, center-to-center
BROADCAST_INTERVAL_S = 1.0  # one message per whole second of sending
RECEIVE_WINDOW_S = 3.0


class EmptyQueueError(ValueError):
    """sensor_w is undefined on an empty queue; callers must branch."""


class MessageQueue:
    """Insertion-ordered queue of (sender_id, opinion) with unique senders
    and capacity 4. A message from a sender already present overwrites its
    opinion in place; a new sender evicts the oldest entry when full."""

    __slots__ = ("owner_id", "entries", "self_rejects")

    def __init__(self, owner_id: int):
        self.owner_id = owner_id
        self.entries: list[list[int]] = []
        self.self_rejects = 0

    def __len__(self) -> int:
        return len(self.entries)

    def opinions(self) -> list[int]:
        return [e[1] for e in self.entries]

    def update(self, sender_id: int, opinion: int) -> None:
        if sender_id == self.owner_id:
            self.self_rejects += 1
            return
        for entry in self.entries:
            if entry[0] == sender_id:
                entry[1] = opinion
                return
        if len(self.entries) >= QUEUE_CAPACITY:
            self.entries.pop(0)
        self.entries.append([sender_id, opinion])

    def clear(self) -> None:
        self.entries.clear()


def sensor_l(queue: MessageQueue) -> float:
    """Queue fill level |Q| / 4."""
    return len(queue) / QUEUE_CAPACITY


def sensor_w(queue: MessageQueue) -> float:
    """Fraction of queued neighbor opinions that are White."""
    n = len(queue)
    if n == 0:
        raise EmptyQueueError("sensor_w is undefined on an empty queue")
    return sum(e[1] for e in queue.entries) / n


def in_range(x1: float, y1: float, x2: float, y2: float) -> bool:
    dx = x1 - x2
    dy = y1 - y2
    return dx * dx + dy * dy <= COMM_RANGE * COMM_RANGE
