"""Decision PFSM: exploration with quality estimation, quality-modulated
dissemination (send then a fixed 3 s receive window), then the plugged
decision mechanism.

The neighbor-opinion queue persists across cycles and fills whenever a
broadcast lands in range; a repeat sender overwrites its entry, so at
decision time the queue holds the opinions of the last four distinct
neighbors heard from.
"""

from __future__ import annotations

import numpy as np

from swarmcdm.comms import (
    BROADCAST_INTERVAL_S,
    EmptyQueueError,
    MessageQueue,
    RECEIVE_WINDOW_S,
    sensor_l,
    sensor_w,
)

EXPLORE_MEAN_S = 10.0
T_SEND_S = 10.0

EXPLORATION = 0
DISSEMINATION_SEND = 1
DISSEMINATION_RECEIVE = 2

PHASE_NAMES = {EXPLORATION: "Exploration", DISSEMINATION_SEND: "DisseminationSend",
               DISSEMINATION_RECEIVE: "DisseminationReceive"}


def quality_estimate(match_time: float, explore_duration: float) -> float:
    """Fraction of exploration time the ground color matched the opinion."""
    if explore_duration <= 0.0:
        raise ValueError("explore_duration must be positive")
    if not 0.0 <= match_time <= explore_duration + 1e-12:
        raise ValueError("match_time must lie in [0, explore_duration]")
    return min(match_time / explore_duration, 1.0)


class DecisionState:
    """Mutable per-robot decision-strategy state."""

    __slots__ = ("phase", "phase_timer", "match_time", "explore_elapsed",
                 "send_duration", "send_elapsed", "next_emit", "quality")

    def __init__(self, rng: np.random.Generator):
        self.phase = EXPLORATION
        self.phase_timer = rng.exponential(EXPLORE_MEAN_S)
        self.match_time = 0.0
        self.explore_elapsed = 0.0
        self.send_duration = 0.0
        self.send_elapsed = 0.0
        self.next_emit = 0.0
        self.quality = 0.0


def pfsm_step(state: DecisionState, g: int, queue: MessageQueue, opinion: int,
              mechanism, dt: float, rng: np.random.Generator):
    """Advance the PFSM one tick.

    Returns (opinion, emit, log_row): `emit` is True when the robot
    broadcasts this tick, `log_row` is the (t-less) decision record
    (w, l, g, o_prev, o_new) when a decision was made this tick, else None.
    """
    phase = state.phase
    if phase == EXPLORATION:
        if g == opinion:
            state.match_time += dt
        state.explore_elapsed += dt
        state.phase_timer -= dt
        if state.phase_timer <= 0.0:
            state.quality = quality_estimate(state.match_time, state.explore_elapsed)
            state.send_duration = rng.exponential(T_SEND_S * state.quality) \
                if state.quality > 0.0 else 0.0
            state.phase = DISSEMINATION_SEND
            state.send_elapsed = 0.0
            state.next_emit = 0.0
        return opinion, False, None

    if phase == DISSEMINATION_SEND:
        emit = False
        if state.send_elapsed < state.send_duration and \
                state.send_elapsed >= state.next_emit - 1e-9:
            emit = True
            state.next_emit += BROADCAST_INTERVAL_S
        state.send_elapsed += dt
        if state.send_elapsed >= state.send_duration:
            state.phase = DISSEMINATION_RECEIVE
            state.phase_timer = RECEIVE_WINDOW_S
        return opinion, emit, None

    # DISSEMINATION_RECEIVE
    state.phase_timer -= dt
    if state.phase_timer > 0.0:
        return opinion, False, None
    try:
        w = sensor_w(queue)
    except EmptyQueueError:
        w = 0.0
    l = sensor_l(queue)
    new_opinion = mechanism(queue, g, opinion, rng)
    log_row = (w, l, g, opinion, new_opinion)
    state.phase = EXPLORATION
    state.phase_timer = rng.exponential(EXPLORE_MEAN_S)
    state.match_time = 0.0
    state.explore_elapsed = 0.0
    return new_opinion, False, log_row
