"""Multi-robot collective perception simulator and benchmark harness.

Twenty robots explore a 2 m x 2 m arena tiled with black and white cells
and must agree on the dominant floor color. Five interchangeable decision
mechanisms (voter model, majority rule, two hand-coded rules, evolved
neural networks) plug into the same modulated dissemination strategy.
"""

from swarmcdm.world import BLACK, WHITE, TileGrid, task_difficulty, generate_pattern, mirror

__version__ = "0.1.0"

__all__ = [
    "BLACK",
    "WHITE",
    "TileGrid",
    "task_difficulty",
    "generate_pattern",
    "mirror",
    "__version__",
]
