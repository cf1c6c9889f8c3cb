import math

import numpy as np
import pytest
import scipy.stats

from swarmcdm import robot
from swarmcdm.robot import (
    AVOIDANCE,
    AXLE_LENGTH,
    BODY_RADIUS,
    MAX_SPEED,
    ROTATION,
    STRAIGHT,
    STUCK_MAX_S,
    UNSTUCK,
    MotionState,
    Pose,
    integrate_pose,
    motion_step,
    sense_proximity,
)

INF = math.inf
NO_DETECT = [INF, INF, INF, INF, INF]


def _rk2_oracle(pose, vl, vr, dt, steps=1000):
    """Midpoint integration of the unicycle ODE as an independent oracle."""
    v = 0.5 * (vl + vr)
    w = (vr - vl) / AXLE_LENGTH
    x, y, h = pose.x, pose.y, pose.heading
    sub = dt / steps
    for _ in range(steps):
        hm = h + 0.5 * w * sub
        x += v * math.cos(hm) * sub
        y += v * math.sin(hm) * sub
        h += w * sub
    return x, y, h % (2 * math.pi)


def test_straight_motion():
    p = integrate_pose(Pose(1.0, 1.0, 0.0), MAX_SPEED, MAX_SPEED, 0.1)
    assert abs(p.x - 1.01) < 1e-12
    assert p.y == 1.0
    assert p.heading == 0.0


def test_rotation_in_place():
    p = integrate_pose(Pose(0.5, 0.5, 0.0), -MAX_SPEED, MAX_SPEED, 0.1)
    assert p.x == 0.5 and p.y == 0.5
    # omega = 2*v/axle = 4 rad/s
    assert abs(p.heading - 0.4) < 1e-12


def test_arc_matches_fine_step_oracle():
    rng = np.random.default_rng(9)
    for _ in range(50):
        pose = Pose(rng.uniform(0.2, 1.8), rng.uniform(0.2, 1.8),
                    rng.uniform(0, 2 * math.pi))
        vl = rng.uniform(-MAX_SPEED, MAX_SPEED)
        vr = rng.uniform(-MAX_SPEED, MAX_SPEED)
        got = integrate_pose(pose, vl, vr, 0.1)
        ex, ey, eh = _rk2_oracle(pose, vl, vr, 0.1)
        assert abs(got.x - ex) < 1e-6
        assert abs(got.y - ey) < 1e-6
        assert abs((got.heading - eh + math.pi) % (2 * math.pi) - math.pi) < 1e-6


def test_heading_wrapped():
    p = integrate_pose(Pose(1.0, 1.0, 6.2), -MAX_SPEED, MAX_SPEED, 4.0)
    assert 0.0 <= p.heading < 2 * math.pi


def test_overspeed_rejected():
    with pytest.raises(ValueError):
        integrate_pose(Pose(1, 1, 0), 0.11, 0.0, 0.1)


def test_sense_wall_ahead():
    readings = sense_proximity(Pose(0.05, 1.0, math.pi), [])
    assert abs(readings[2] - 0.05) < 1e-9
    assert abs(readings[1] - 0.05 / math.cos(math.pi / 6)) < 1e-9
    assert abs(readings[3] - 0.05 / math.cos(math.pi / 6)) < 1e-9


def test_sense_nothing_mid_arena():
    assert sense_proximity(Pose(1.0, 1.0, 0.3), []) == NO_DETECT


def test_sense_robot_ahead_surface_distance():
    other = Pose(1.08, 1.0, 0.0)
    readings = sense_proximity(Pose(1.0, 1.0, 0.0), [other])
    assert abs(readings[2] - (0.08 - BODY_RADIUS)) < 1e-9


def test_sense_ignores_robot_behind():
    other = Pose(0.9, 1.0, 0.0)
    assert sense_proximity(Pose(1.0, 1.0, 0.0), [other]) == NO_DETECT


def test_sense_range_limit():
    other = Pose(1.14, 1.0, 0.0)  # surface at 0.105 m > 0.10 m range
    assert sense_proximity(Pose(1.0, 1.0, 0.0), [other]) == NO_DETECT


def test_straight_speeds_and_transition_to_rotation(rng):
    state = MotionState(rng)
    state.mode_timer = 0.25
    vl, vr = motion_step(state, NO_DETECT, 0.1, rng)
    assert (vl, vr) == (MAX_SPEED, MAX_SPEED)
    motion_step(state, NO_DETECT, 0.1, rng)
    vl, vr = motion_step(state, NO_DETECT, 0.1, rng)  # timer expires here
    assert state.mode == ROTATION
    assert 0.0 <= state.mode_timer <= robot.ROTATION_MAX_S
    assert vl == -vr and abs(vl) == MAX_SPEED


def test_detection_triggers_avoidance_away_from_closer_side(rng):
    state = MotionState(rng)
    readings = [0.02, INF, INF, INF, INF]  # obstacle on the right
    vl, vr = motion_step(state, readings, 0.1, rng)
    assert state.mode == AVOIDANCE
    assert state.target_turn > 0  # turns left, away from the right side
    assert vl == -MAX_SPEED and vr == MAX_SPEED
    mag = abs(state.target_turn)
    assert math.pi - robot.AVOID_JITTER_RAD - 1e-9 <= mag <= math.pi + robot.AVOID_JITTER_RAD + 1e-9

    state2 = MotionState(np.random.default_rng(1))
    readings2 = [INF, INF, INF, 0.02, INF]  # obstacle on the left
    motion_step(state2, readings2, 0.1, np.random.default_rng(1))
    assert state2.target_turn < 0


def test_avoidance_turn_completes_then_straight(rng):
    state = MotionState(rng)
    motion_step(state, [0.02, INF, INF, INF, INF], 0.1, rng)
    # at 4 rad/s the ~pi turn takes at most ceil((pi+25deg)/0.4) ticks
    for _ in range(10):
        if state.mode != AVOIDANCE:
            break
        motion_step(state, NO_DETECT, 0.1, rng)
    assert state.mode == STRAIGHT


def test_stuck_buffer_dynamics(rng):
    state = MotionState(rng)
    state.stuck_buffer = STUCK_MAX_S
    motion_step(state, NO_DETECT, 0.1, rng)
    assert state.stuck_buffer == STUCK_MAX_S  # capped while driving straight
    state.mode = ROTATION
    state.mode_timer = 1.0
    motion_step(state, NO_DETECT, 0.1, rng)
    assert abs(state.stuck_buffer - (STUCK_MAX_S - 0.1)) < 1e-12


def test_unstuck_entered_when_buffer_exhausted(rng):
    state = MotionState(rng)
    state.mode = AVOIDANCE
    state.target_turn = math.pi
    state.stuck_buffer = -0.01
    motion_step(state, [0.02, INF, INF, INF, INF], 0.1, rng)
    assert state.mode == UNSTUCK
    # keeps rotating while something is detected
    vl, vr = motion_step(state, [0.02, INF, INF, INF, INF], 0.1, rng)
    assert vl == -vr
    assert state.mode == UNSTUCK
    motion_step(state, NO_DETECT, 0.1, rng)
    assert state.mode == STRAIGHT


def test_sampled_durations_match_declared_distributions():
    # drive the FSM without obstacles and recover its drawn durations
    rng = np.random.default_rng(2024)
    state = MotionState(rng)
    straights = [state.straight_duration]
    rotations = []
    dt = 0.5
    while len(straights) < 3000:
        prev = state.mode
        motion_step(state, NO_DETECT, dt, rng)
        if prev == STRAIGHT and state.mode == ROTATION:
            rotations.append(state.mode_timer)
        elif prev == ROTATION and state.mode == STRAIGHT:
            straights.append(state.straight_duration)
    p_straight = scipy.stats.kstest(straights, "expon",
                                    args=(0, robot.STRAIGHT_MEAN_S)).pvalue
    p_rot = scipy.stats.kstest(rotations, "uniform",
                               args=(0, robot.ROTATION_MAX_S)).pvalue
    assert p_straight > 0.01
    assert p_rot > 0.01
