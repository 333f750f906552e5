"""Node grids over a rectangle, discrete cell sets, and the discrete set-map step.

A Grid with resolution M places (M+1) x (M+1) nodes on the bounding box; every
point of the box is within ``epsilon`` (half a cell diagonal) of a node.  A
DiscreteSet is a deduplicated set of nodes in row-major (j, then i) order, the
canonical order used for files and images.  ``hb_apply_discrete`` is the hot
loop: map every node of a set under every map of an IFS, snap the images back
onto the grid, and take the union.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .exceptions import EmptyInputError, GridMismatchError
from .ifs import BBox, Ifs, Point2

# Above this resolution the union step switches from a dense node mask to
# sort-based deduplication of index lists.
DENSE_MASK_MAX_M = 4096


class CellIndex(NamedTuple):
    i: int
    j: int


def bbox_diameter(bbox: BBox) -> float:
    x0, y0, x1, y1 = bbox
    return math.hypot(x1 - x0, y1 - y0)


@dataclass(frozen=True)
class Grid:
    """(M+1) x (M+1) node lattice over an axis-aligned rectangle.

    Nodes sit at (x0 + i dx/M, y0 + j dy/M) for 0 <= i, j <= M.
    """

    bbox: BBox
    resolution_m: int

    def __post_init__(self):
        x0, y0, x1, y1 = (float(v) for v in self.bbox)
        if not (x1 > x0 and y1 > y0):
            raise ValueError("bounding box must have positive width and height")
        if self.resolution_m < 1:
            raise ValueError("resolution must be >= 1")
        object.__setattr__(self, "bbox", (x0, y0, x1, y1))

    @property
    def side(self) -> int:
        return self.resolution_m + 1

    @property
    def step_x(self) -> float:
        return (self.bbox[2] - self.bbox[0]) / self.resolution_m

    @property
    def step_y(self) -> float:
        return (self.bbox[3] - self.bbox[1]) / self.resolution_m

    @property
    def epsilon(self) -> float:
        """Covering radius of the node set: half of one cell diagonal."""
        x0, y0, x1, y1 = self.bbox
        return math.hypot(x1 - x0, y1 - y0) / (2.0 * self.resolution_m)

    @property
    def diameter(self) -> float:
        return bbox_diameter(self.bbox)


@dataclass(frozen=True, eq=False)
class DiscreteSet:
    """Deduplicated grid cells in canonical row-major (j, then i) order.

    ``lin`` holds sorted unique linear indices j*(M+1)+i as a read-only int64
    array; sorted linear order coincides with (j, i) lexicographic order.
    """

    grid: Grid
    lin: np.ndarray

    def __len__(self) -> int:
        return int(self.lin.size)

    def __iter__(self) -> Iterator[CellIndex]:
        side = self.grid.side
        for v in self.lin:
            yield CellIndex(int(v % side), int(v // side))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscreteSet):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.lin, other.lin)

    @property
    def cells(self) -> np.ndarray:
        """(n, 2) array of (i, j) pairs in canonical order."""
        side = self.grid.side
        return np.column_stack((self.lin % side, self.lin // side))


def _make_set(grid: Grid, lin: np.ndarray) -> DiscreteSet:
    lin = np.ascontiguousarray(lin, dtype=np.int64)
    lin.setflags(write=False)
    return DiscreteSet(grid=grid, lin=lin)


def full_set(g: Grid) -> DiscreteSet:
    """Every node of the grid (the default seed set for blends)."""
    return _make_set(g, np.arange(g.side * g.side, dtype=np.int64))


def _project_arrays(g: Grid, xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, int]:
    """Linear node indices of the nearest nodes, counting clamped points.

    floor(t + 0.5) rounds to the nearest integer with ties toward +inf;
    clipping the index implements coordinate clamping onto the box.
    """
    x0, y0, x1, y1 = g.bbox
    m = g.resolution_m
    ti = np.floor((xs - x0) * (m / (x1 - x0)) + 0.5)
    tj = np.floor((ys - y0) * (m / (y1 - y0)) + 0.5)
    clamped = int(np.count_nonzero((xs < x0) | (xs > x1) | (ys < y0) | (ys > y1)))
    i = np.clip(ti, 0, m).astype(np.int64)
    j = np.clip(tj, 0, m).astype(np.int64)
    return j * g.side + i, clamped


def project(g: Grid, p: Point2) -> CellIndex:
    """Nearest grid node to ``p``; points outside the box are clamped first."""
    lin, _ = _project_arrays(g, np.asarray([p[0]], dtype=float), np.asarray([p[1]], dtype=float))
    v = int(lin[0])
    return CellIndex(v % g.side, v // g.side)


def _dedupe(g: Grid, parts: Sequence[np.ndarray]) -> np.ndarray:
    if g.resolution_m <= DENSE_MASK_MAX_M:
        mask = np.zeros(g.side * g.side, dtype=bool)
        for lin in parts:
            mask[lin] = True
        return np.flatnonzero(mask).astype(np.int64)
    return np.unique(np.concatenate(parts))


def discretize(g: Grid, pts: Iterable[Point2] | np.ndarray) -> DiscreteSet:
    """Project every point onto the grid, dedupe, and order canonically."""
    arr = np.asarray(pts, dtype=float)
    if arr.size == 0:
        raise EmptyInputError("cannot discretize an empty point collection")
    arr = arr.reshape(-1, 2)
    if not np.isfinite(arr).all():
        raise ValueError("points must be finite")
    lin, _ = _project_arrays(g, arr[:, 0], arr[:, 1])
    return _make_set(g, _dedupe(g, [lin]))


def realize(g: Grid, s: DiscreteSet) -> np.ndarray:
    """(n, 2) node coordinates of the cells, in canonical order."""
    xs, ys = _realize_arrays(g, s)
    return np.column_stack((xs, ys))


def _realize_arrays(g: Grid, s: DiscreteSet) -> tuple[np.ndarray, np.ndarray]:
    if s.grid != g:
        raise GridMismatchError("set belongs to a different grid")
    x0, y0 = g.bbox[0], g.bbox[1]
    i = s.lin % g.side
    j = s.lin // g.side
    return x0 + i * g.step_x, y0 + j * g.step_y


def _map_chunk(g: Grid, maps: Sequence, xs: np.ndarray, ys: np.ndarray) -> tuple[list[np.ndarray], int]:
    parts: list[np.ndarray] = []
    clamped = 0
    for m in maps:
        mx = m.a * xs + m.b * ys + m.e
        my = m.c * xs + m.d * ys + m.f
        lin, c = _project_arrays(g, mx, my)
        parts.append(lin)
        clamped += c
    return parts, clamped


def hb_apply_discrete_counted(g: Grid, ifs: Ifs, s: DiscreteSet, *, workers: int = 1) -> tuple[DiscreteSet, int]:
    """One discrete set-map step, also reporting how many images were clamped.

    Computes the union over all maps of the projected images of the realized
    nodes.  ``workers > 1`` splits the source nodes across threads; the union
    is order-independent, so the result is bit-identical for any worker count.
    """
    if len(s) == 0:
        raise EmptyInputError("cannot apply the set map to an empty set")
    xs, ys = _realize_arrays(g, s)
    if workers > 1 and len(s) > 1:
        xchunks = np.array_split(xs, workers)
        ychunks = np.array_split(ys, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda xy: _map_chunk(g, ifs.maps, xy[0], xy[1]), zip(xchunks, ychunks)))
        parts = [lin for sub, _ in results for lin in sub]
        clamped = sum(c for _, c in results)
    else:
        parts, clamped = _map_chunk(g, ifs.maps, xs, ys)
    return _make_set(g, _dedupe(g, parts)), clamped


def hb_apply_discrete(g: Grid, ifs: Ifs, s: DiscreteSet, *, workers: int = 1) -> DiscreteSet:
    """Union of the projected images of ``s`` under every map of ``ifs``."""
    out, _ = hb_apply_discrete_counted(g, ifs, s, workers=workers)
    return out


def iterate_until_fixed(
    g: Grid, ifs: Ifs, start: DiscreteSet | None = None, *, max_iter: int = 10_000, workers: int = 1
) -> tuple[DiscreteSet, int]:
    """Iterate the discrete set map until the cell set stops changing.

    From the full grid the iterates can only shrink (the map is monotone and
    the full node set maps into itself), so termination is guaranteed.
    Returns the fixed set and the number of applications that changed it.
    """
    cur = start if start is not None else full_set(g)
    for it in range(1, max_iter + 1):
        nxt = hb_apply_discrete(g, ifs, cur, workers=workers)
        if nxt == cur:
            return cur, it - 1
        cur = nxt
    raise RuntimeError(f"no fixed set after {max_iter} iterations")


def save_cells(path, s: DiscreteSet) -> None:
    """Write the canonical cell list: header ``M=<resolution>``, then ``i,j`` lines."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"M={s.grid.resolution_m}\n")
        for i, j in s:
            fh.write(f"{i},{j}\n")


def load_cells(path, g: Grid) -> DiscreteSet:
    """Read a cell list written by :func:`save_cells` onto grid ``g``."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if not header.startswith("M="):
            raise ValueError(f"{path}: expected header 'M=<resolution>'")
        m = int(header[2:])
        if m != g.resolution_m:
            raise GridMismatchError(f"{path}: file resolution {m} != grid resolution {g.resolution_m}")
        pairs = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            si, sj = line.split(",")
            i, j = int(si), int(sj)
            if not (0 <= i <= m and 0 <= j <= m):
                raise ValueError(f"{path}: cell ({i},{j}) outside grid")
            pairs.append(j * g.side + i)
    if not pairs:
        raise EmptyInputError(f"{path}: no cells")
    return _make_set(g, np.unique(np.asarray(pairs, dtype=np.int64)))
