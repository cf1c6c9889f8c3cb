"""Run-level result records shared by the engine, harness and analysis."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class RunRecord:
    """Summary of one simulated run."""

    seed: int
    mechanism: str
    difficulty: float | None
    dominant: int | None
    n_robots: int
    horizon_s: float
    dt: float
    consensus_time: float | None
    consensus_opinion: int | None
    final_opinions: list[int]
    decision_log: list[tuple]  # rows (t, robot_id, w, l, g, o_prev, o_new)
    msgs_delivered: int
    self_rejects: int
    initial_poses: list[tuple[float, float, float]]

    def __post_init__(self):
        if (self.consensus_time is None) != (self.consensus_opinion is None):
            raise ValueError("consensus_time and consensus_opinion must be set together")
