"""Seeded atom-array instances on a rows x cols trap grid.

Loading uses numpy's PCG64 generator so a (spec, seed) pair reproduces the
same instance everywhere numpy is available.  Vertex ids are row-major.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import InputError
from .graph import VARIANTS, Graph, Instance


class GenerationError(InputError):
    pass


@dataclass(frozen=True)
class GridSpec:
    rows: int
    cols: int
    fill_probability: float = 0.5
    seed: int = 0
    target_shape: Union[str, tuple] = "centered"  # "centered", "full", or a vertex tuple
    budget: Optional[int] = None
    variant: str = "UUTM"

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise InputError("grid needs positive rows and cols")
        if not 0.0 <= self.fill_probability <= 1.0:
            raise InputError("fill probability must lie in [0, 1]")
        if self.variant not in VARIANTS or VARIANTS[self.variant][0]:
            raise InputError("grid instances are undirected (UUTM or LUTM)")
        if not isinstance(self.target_shape, str):
            object.__setattr__(self, "target_shape", tuple(self.target_shape))
        elif self.target_shape not in ("centered", "full"):
            raise InputError(f"unknown target shape {self.target_shape!r}")


def grid_graph(rows: int, cols: int) -> Graph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def _shape(spec: GridSpec, m: int) -> list[int]:
    rows, cols = spec.rows, spec.cols
    if spec.target_shape == "full":
        return list(range(m))
    # centered: the first m cells, row-major, of a near-square block in the middle
    if m == 0:
        return []
    w = min(cols, max(math.ceil(math.sqrt(m)), math.ceil(m / rows)))
    h = math.ceil(m / w)
    if h > rows:
        raise GenerationError(f"a centered block of {m} sites does not fit the grid")
    top, left = (rows - h) // 2, (cols - w) // 2
    cells = [(top + i) * cols + left + j for i in range(h) for j in range(w)]
    return cells[:m]


def gen_grid(spec: GridSpec) -> Instance:
    """Randomly loaded grid with a target of the requested shape and size."""
    n = spec.rows * spec.cols
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    if isinstance(spec.target_shape, tuple):
        target = list(spec.target_shape)
        for v in target:
            if not 0 <= v < n:
                raise GenerationError(f"target vertex {v} is outside the grid")
        if len(set(target)) != len(target):
            raise GenerationError("target vertices repeat")
        for _ in range(100):
            source = np.flatnonzero(rng.random(n) < spec.fill_probability).tolist()
            if len(source) >= len(target):
                break
        else:
            raise GenerationError(
                f"no loading with at least {len(target)} atoms in 100 draws"
            )
        source = source[: len(target)]  # trim the surplus in row-major order
    else:
        source = np.flatnonzero(rng.random(n) < spec.fill_probability).tolist()
        target = _shape(spec, len(source))
    s, t = set(source), set(target)
    budget = spec.budget
    if budget is None:
        budget = len(s ^ t) + len(s & t)
    labelled = VARIANTS[spec.variant][1]
    return Instance(grid_graph(spec.rows, spec.cols), labelled, source, target, budget,
                    (f"grid:{spec.rows}x{spec.cols}:seed{spec.seed}",))
