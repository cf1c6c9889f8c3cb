"""Arena floor patterns: generation at a requested difficulty, mirroring,
ground-color lookup and the text serialization used by ``gen-env``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

ARENA_SIZE = 2.0
TILE_SIZE = 0.10
SIDE_TILES = 20
N_CELLS = SIDE_TILES * SIDE_TILES

BLACK = 0
WHITE = 1

BENCHMARK_DIFFICULTIES = (0.25, 0.52, 0.67, 0.82)


class DegenerateEnvironmentError(ValueError):
    """A tile fraction is zero or negative; the task is undefined."""


class OutOfArenaError(ValueError):
    """Position lookup outside the half-open arena domain."""


def task_difficulty(rho_white: float, rho_black: float) -> float:
    """Minority-to-majority tile ratio; 1.0 is the hardest (even split)."""
    if rho_white <= 0.0 or rho_black <= 0.0:
        raise DegenerateEnvironmentError(
            f"tile fractions must be positive, got {rho_white}, {rho_black}"
        )
    if abs(rho_white + rho_black - 1.0) > 1e-9:
        raise ValueError(f"tile fractions must sum to 1, got {rho_white + rho_black}")
    return min(rho_white / rho_black, rho_black / rho_white)


@dataclass(frozen=True)
class TileGrid:
    """Row-major grid of black/white floor cells (cell value 0 or 1)."""

    cells: np.ndarray
    side_tiles: int = SIDE_TILES
    tile_size: float = TILE_SIZE

    def __post_init__(self):
        cells = np.ascontiguousarray(self.cells, dtype=np.uint8)
        if cells.shape != (self.side_tiles * self.side_tiles,):
            raise ValueError(f"expected {self.side_tiles ** 2} cells, got {cells.shape}")
        if not np.all((cells == BLACK) | (cells == WHITE)):
            raise ValueError("cells must be 0 (Black) or 1 (White)")
        object.__setattr__(self, "cells", cells)
        cells.setflags(write=False)

    @property
    def white_count(self) -> int:
        return int(self.cells.sum())

    @property
    def black_count(self) -> int:
        return self.cells.size - self.white_count

    @property
    def difficulty(self) -> float:
        n = self.cells.size
        return task_difficulty(self.white_count / n, self.black_count / n)

    @property
    def dominant(self) -> int:
        return WHITE if self.white_count >= self.black_count else BLACK


def minority_tile_count(difficulty: float, n_cells: int = N_CELLS) -> int:
    """Nearest-integer minority cell count realizing the requested ratio."""
    if not 0.0 < difficulty <= 1.0:
        raise ValueError(f"difficulty must be in (0, 1], got {difficulty}")
    return round(n_cells * difficulty / (1.0 + difficulty))


def generate_pattern(difficulty: float, dominant: int, rng: np.random.Generator) -> TileGrid:
    """Scatter minority tiles uniformly at random without replacement."""
    m = minority_tile_count(difficulty)
    minority = BLACK if dominant == WHITE else WHITE
    cells = np.full(N_CELLS, dominant, dtype=np.uint8)
    cells[rng.permutation(N_CELLS)[:m]] = minority
    return TileGrid(cells)


def mirror(grid: TileGrid) -> TileGrid:
    """Invert every cell color; positions are preserved."""
    return TileGrid(1 - grid.cells, grid.side_tiles, grid.tile_size)


def ground_color(grid: TileGrid, x: float, y: float) -> int:
    """Color of the half-open cell [k*0.10, (k+1)*0.10) under (x, y)."""
    size = grid.side_tiles * grid.tile_size
    if not (0.0 <= x < size and 0.0 <= y < size):
        raise OutOfArenaError(f"position ({x}, {y}) outside [0, {size}) x [0, {size})")
    col = int(math.floor(x / grid.tile_size))
    row = int(math.floor(y / grid.tile_size))
    return int(grid.cells[row * grid.side_tiles + col])


def grid_to_text(grid: TileGrid, difficulty: float, dominant: int, seed: int) -> str:
    """Two-line format: a header, then 400 row-major '0'/'1' characters."""
    header = (
        f"tiles={grid.side_tiles}x{grid.side_tiles}"
        f" difficulty={difficulty}"
        f" dominant={'W' if dominant == WHITE else 'B'}"
        f" seed={seed}"
    )
    body = "".join("1" if c else "0" for c in grid.cells)
    return header + "\n" + body + "\n"


def grid_from_text(text: str) -> tuple[TileGrid, dict]:
    lines = text.strip().splitlines()
    if len(lines) != 2:
        raise ValueError("expected a header line and a cell line")
    meta = {}
    for token in lines[0].split():
        key, _, value = token.partition("=")
        meta[key] = value
    side = int(meta.get("tiles", "20x20").split("x")[0])
    cells = np.frombuffer(lines[1].encode(), dtype=np.uint8) - ord("0")
    return TileGrid(cells, side_tiles=side), meta
