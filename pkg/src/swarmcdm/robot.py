"""Differential-drive kinematics, proximity sensing and the random-walk
motion routine (straight / rotation / obstacle avoidance / unstuck)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from swarmcdm.engine import get_kernels
from swarmcdm.world import ARENA_SIZE

MAX_SPEED = 0.10          # m/s per wheel
BODY_RADIUS = 0.035       # m, disc model
AXLE_LENGTH = 0.05        # m
SENSE_RANGE = 0.10        # m, proximity rays
STRAIGHT_MEAN_S = 40.0    # mean of exponential straight-motion duration
ROTATION_MAX_S = 4.5      # uniform rotation duration upper bound
AVOID_JITTER_RAD = math.radians(25.0)
STUCK_MAX_S = 7.5         # cap of the rotation-time buffer

TWO_PI = 2.0 * math.pi


@dataclass
class Pose:
    x: float
    y: float
    heading: float


def integrate_pose(pose: Pose, v_left: float, v_right: float, dt: float,
                   axle: float = AXLE_LENGTH) -> Pose:
    """Unicycle update with exact arc integration when turning."""
    if abs(v_left) > MAX_SPEED + 1e-12 or abs(v_right) > MAX_SPEED + 1e-12:
        raise ValueError(f"wheel speed above {MAX_SPEED} m/s: {v_left}, {v_right}")
    v = 0.5 * (v_left + v_right)
    w = (v_right - v_left) / axle
    h = pose.heading
    if w == 0.0:
        nx = pose.x + v * math.cos(h) * dt
        ny = pose.y + v * math.sin(h) * dt
        nh = h
    else:
        nh = h + w * dt
        radius = v / w
        nx = pose.x + radius * (math.sin(nh) - math.sin(h))
        ny = pose.y - radius * (math.cos(nh) - math.cos(h))
    return Pose(nx, ny, nh % TWO_PI)


def sense_proximity(pose: Pose, others: list[Pose], backend: str | None = None) -> list[float]:
    """Distances along the 5 front rays (-60..+60 degrees) to the nearest
    wall or robot disc; math.inf where nothing is within range."""
    kern = get_kernels(backend)
    n = 1 + len(others)
    px = np.empty(n)
    py = np.empty(n)
    heading = np.empty(n)
    for i, p in enumerate([pose, *others]):
        px[i], py[i], heading[i] = p.x, p.y, p.heading
    readings = np.empty((n, 5))
    kern.sense_all(px, py, heading, readings, BODY_RADIUS, SENSE_RANGE, ARENA_SIZE)
    return list(readings[0])


# Motion FSM modes.
STRAIGHT = 0
ROTATION = 1
AVOIDANCE = 2
UNSTUCK = 3

MODE_NAMES = {STRAIGHT: "Straight", ROTATION: "Rotation",
              AVOIDANCE: "ObstacleAvoidance", UNSTUCK: "Unstuck"}


class MotionState:
    """Mutable per-robot motion state."""

    __slots__ = ("mode", "mode_timer", "target_turn", "stuck_buffer",
                 "rotation_direction", "straight_duration")

    def __init__(self, rng: np.random.Generator):
        self.mode = STRAIGHT
        self.straight_duration = rng.exponential(STRAIGHT_MEAN_S)
        self.mode_timer = self.straight_duration
        self.target_turn = 0.0
        self.stuck_buffer = STUCK_MAX_S
        self.rotation_direction = 1

    def _enter_straight(self, rng):
        self.mode = STRAIGHT
        self.straight_duration = rng.exponential(STRAIGHT_MEAN_S)
        self.mode_timer = self.straight_duration


def motion_step(state: MotionState, readings, dt: float,
                rng: np.random.Generator) -> tuple[float, float]:
    """Advance the motion FSM one tick and return (v_left, v_right)."""
    detected = (readings[0] < math.inf or readings[1] < math.inf
                or readings[2] < math.inf or readings[3] < math.inf
                or readings[4] < math.inf)

    mode = state.mode
    if mode == STRAIGHT:
        if detected:
            # Turn away from the closer side; tie broken by coin flip.
            right_min = min(readings[0], readings[1])
            left_min = min(readings[3], readings[4])
            if right_min < left_min:
                direction = 1
            elif left_min < right_min:
                direction = -1
            else:
                direction = 1 if rng.random() < 0.5 else -1
            state.mode = AVOIDANCE
            state.target_turn = direction * (math.pi + rng.uniform(-AVOID_JITTER_RAD, AVOID_JITTER_RAD))
            state.rotation_direction = direction
        else:
            state.mode_timer -= dt
            if state.mode_timer <= 0.0:
                state.mode = ROTATION
                state.mode_timer = rng.uniform(0.0, ROTATION_MAX_S)
                state.rotation_direction = 1 if rng.random() < 0.5 else -1
    elif mode == ROTATION:
        state.mode_timer -= dt
        if state.mode_timer <= 0.0:
            state._enter_straight(rng)
    elif mode == AVOIDANCE:
        if state.stuck_buffer < 0.0:
            state.mode = UNSTUCK
            state.rotation_direction = 1 if rng.random() < 0.5 else -1
        else:
            omega = 2.0 * MAX_SPEED / AXLE_LENGTH
            step = omega * dt
            if abs(state.target_turn) <= step:
                state._enter_straight(rng)
            else:
                state.target_turn -= math.copysign(step, state.target_turn)
    else:  # UNSTUCK
        if not detected:
            state._enter_straight(rng)

    if state.mode == STRAIGHT:
        state.stuck_buffer = min(state.stuck_buffer + dt, STUCK_MAX_S)
        return MAX_SPEED, MAX_SPEED
    state.stuck_buffer -= dt
    if state.mode == AVOIDANCE:
        direction = 1 if state.target_turn > 0 else -1
    else:
        direction = state.rotation_direction
    return -direction * MAX_SPEED, direction * MAX_SPEED
