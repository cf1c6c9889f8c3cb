"""Single-run simulation loop: motion FSM + decision PFSM + local
communication at a fixed tick, strictly sequential and deterministic."""

from __future__ import annotations

import math

import numpy as np

from swarmcdm import comms, robot, strategy, world
from swarmcdm.engine import get_kernels
from swarmcdm.records import RunRecord

DEFAULT_DT = 0.1
DEFAULT_HORIZON_S = 400.0
DEFAULT_N_ROBOTS = 20
MIN_PLACEMENT_DISTANCE = 0.07
PLACEMENT_ATTEMPTS = 10_000


class PlacementError(RuntimeError):
    """Rejection sampling failed to place all robots."""


def place_robots(n: int, rng: np.random.Generator):
    """Collision-free uniform poses: wall clearance of one body radius and
    a minimum center distance between robots."""
    lo = robot.BODY_RADIUS
    hi = world.ARENA_SIZE - robot.BODY_RADIUS
    xs, ys, hs = [], [], []
    min2 = MIN_PLACEMENT_DISTANCE * MIN_PLACEMENT_DISTANCE
    for _ in range(n):
        for _attempt in range(PLACEMENT_ATTEMPTS):
            x = rng.uniform(lo, hi)
            y = rng.uniform(lo, hi)
            if all((x - px) ** 2 + (y - py) ** 2 >= min2 for px, py in zip(xs, ys)):
                break
        else:
            raise PlacementError(f"could not place robot {len(xs)} after {PLACEMENT_ATTEMPTS} samples")
        xs.append(x)
        ys.append(y)
        hs.append(rng.uniform(0.0, 2.0 * math.pi))
    return xs, ys, hs


def deliver_emissions(emissions, px, py, queues) -> int:
    """Deliver broadcast opinions to every other robot's queue within
    communication range; senders never receive their own message.

    Queues persist across PFSM cycles (repeat senders overwrite in
    place), so at decision time a queue holds the opinions of the last
    four distinct neighbors heard from.  Returns the delivery count.
    """
    n = len(queues)
    range2 = comms.COMM_RANGE * comms.COMM_RANGE
    delivered = 0
    for sender, op in emissions:
        sx = px[sender]
        sy = py[sender]
        for j in range(n):
            if j == sender:
                continue
            dx = px[j] - sx
            dy = py[j] - sy
            if dx * dx + dy * dy <= range2:
                queues[j].update(sender, op)
                delivered += 1
    return delivered


def run_once(grid: world.TileGrid, initial_opinions, mechanism, seed: int, *,
             horizon_s: float = DEFAULT_HORIZON_S, dt: float = DEFAULT_DT,
             stop_at_consensus: bool = False, collect_log: bool = True,
             backend: str | None = None, mechanism_name: str = "",
             difficulty: float | None = None, dominant: int | None = None,
             rng: np.random.Generator | None = None,
             initial_poses=None) -> RunRecord:
    """Simulate one run and return its RunRecord.

    The same (grid, initial_opinions, seed) always yields the same record.
    With `stop_at_consensus` the loop ends at the first consensus (enough
    for the benchmark metrics); otherwise it runs to the horizon.
    """
    kern = get_kernels(backend)
    n = len(initial_opinions)
    if rng is None:
        rng = np.random.default_rng(seed)
    opinions = [int(o) for o in initial_opinions]

    if initial_poses is None:
        xs, ys, hs = place_robots(n, rng)
    else:
        xs = [p[0] for p in initial_poses]
        ys = [p[1] for p in initial_poses]
        hs = [p[2] for p in initial_poses]
    px = np.array(xs, dtype=float)
    py = np.array(ys, dtype=float)
    heading = np.array(hs, dtype=float)
    start_poses = [(float(px[i]), float(py[i]), float(heading[i])) for i in range(n)]

    motion = [robot.MotionState(rng) for _ in range(n)]
    decision = [strategy.DecisionState(rng) for _ in range(n)]
    queues = [comms.MessageQueue(i) for i in range(n)]

    vl = np.zeros(n)
    vr = np.zeros(n)
    readings = np.empty((n, 5))

    cells = grid.cells
    side = grid.side_tiles
    inv_tile = 1.0 / grid.tile_size

    n_ticks = int(round(horizon_s / dt))
    n_white = sum(opinions)
    consensus_time = None
    consensus_opinion = None
    msgs_delivered = 0
    decision_log: list[tuple] = []

    for tick in range(n_ticks + 1):
        if consensus_time is None and (n_white == 0 or n_white == n):
            consensus_time = tick * dt
            consensus_opinion = opinions[0]
            if stop_at_consensus:
                break
        if tick == n_ticks:
            break

        # Motion: sense, step the FSM, integrate with contact resolution.
        kern.sense_all(px, py, heading, readings,
                       robot.BODY_RADIUS, robot.SENSE_RANGE, world.ARENA_SIZE)
        rlist = readings.tolist()
        for i in range(n):
            vl[i], vr[i] = robot.motion_step(motion[i], rlist[i], dt, rng)
        kern.integrate_all(px, py, heading, vl, vr, dt,
                           robot.AXLE_LENGTH, robot.BODY_RADIUS, world.ARENA_SIZE)

        # Ground sensor for every robot (vectorized cell lookup).
        cols = (px * inv_tile).astype(np.intp)
        rows = (py * inv_tile).astype(np.intp)
        g_all = cells[rows * side + cols].tolist()

        # Decision PFSM; emissions are collected and delivered after every
        # robot has stepped, so the outcome is index-order independent.
        emissions = []
        for i in range(n):
            o_prev = opinions[i]
            o_new, emit, row = strategy.pfsm_step(
                decision[i], g_all[i], queues[i], o_prev, mechanism, dt, rng)
            if emit:
                emissions.append((i, o_prev))
            if o_new != o_prev:
                opinions[i] = o_new
                n_white += o_new - o_prev
            if row is not None and collect_log:
                decision_log.append(((tick + 1) * dt, i) + row)

        if emissions:
            msgs_delivered += deliver_emissions(emissions, px, py, queues)

    return RunRecord(
        seed=seed,
        mechanism=mechanism_name,
        difficulty=difficulty,
        dominant=dominant,
        n_robots=n,
        horizon_s=horizon_s,
        dt=dt,
        consensus_time=consensus_time,
        consensus_opinion=consensus_opinion,
        final_opinions=opinions,
        decision_log=decision_log,
        msgs_delivered=msgs_delivered,
        self_rejects=sum(q.self_rejects for q in queues),
        initial_poses=start_poses,
    )
