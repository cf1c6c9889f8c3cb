"""Deterministic seed derivation for parallel-safe run dispatch."""

MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    """One splitmix64 step; avalanche-quality 64-bit mixing."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(master: int, condition_index: int, run_index: int) -> int:
    """Mix (master, condition, run) into an independent 64-bit seed."""
    x = _splitmix64(master & MASK64)
    x = _splitmix64(x ^ (condition_index & MASK64))
    return _splitmix64(x ^ (run_index & MASK64))
