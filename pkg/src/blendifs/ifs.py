"""Planar affine IFSs: maps, contraction constants, code words, finite code-map evaluation.

Points are plain ``(x, y)`` tuples and code words are tuples of 1-based map
indices; everything here is immutable and safe to share across threads.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exceptions import (
    EmptyIfsError,
    LambdaOutOfRangeError,
    NotContractiveError,
    SymbolOutOfRangeError,
)

Point2 = tuple[float, float]
CodeWord = tuple[int, ...]
BBox = tuple[float, float, float, float]


class BBoxEscapeWarning(UserWarning):
    """A map sends the bounding box outside itself; images will be clamped."""


@dataclass(frozen=True)
class AffineMap2:
    """Planar affine map (x, y) -> (a x + b y + e, c x + d y + f)."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float

    def __call__(self, p: Point2) -> Point2:
        return affine_apply(self, p)


def affine_apply(m: AffineMap2, p: Point2) -> Point2:
    x, y = p
    return (m.a * x + m.b * y + m.e, m.c * x + m.d * y + m.f)


def lipschitz(m: AffineMap2) -> float:
    """Largest singular value of the linear part [[a, b], [c, d]].

    Uses the closed form for 2x2 matrices: with q = hypot(a+d, c-b)/2 and
    r = hypot(a-d, c+b)/2 the singular values are q+r and |q-r|.  This is the
    tight Lipschitz constant for the Euclidean metric, and it is exact for
    pure scalings (no square roots of non-squares involved).
    """
    q = math.hypot(m.a + m.d, m.c - m.b) / 2.0
    r = math.hypot(m.a - m.d, m.c + m.b) / 2.0
    return q + r


@dataclass(frozen=True)
class Ifs:
    """A named, validated list of affine contractions.

    ``lambdas[k]`` is the Lipschitz constant of ``maps[k]`` and ``lambda_r``
    their maximum; validation guarantees ``lambda_r < 1``.
    """

    name: str
    maps: tuple[AffineMap2, ...]
    lambdas: tuple[float, ...]
    lambda_r: float

    @property
    def n(self) -> int:
        return len(self.maps)


def ifs_validate(maps: Iterable[AffineMap2], name: str = "ifs") -> Ifs:
    """Build an Ifs, computing per-map Lipschitz constants.

    Raises NotContractiveError (with the offending 1-based map index) as soon
    as any constant reaches 1, and EmptyIfsError for an empty map list.
    """
    maps = tuple(maps)
    if not maps:
        raise EmptyIfsError(f"IFS {name!r} has no maps")
    lams = tuple(lipschitz(m) for m in maps)
    for idx, lam in enumerate(lams, start=1):
        if lam >= 1.0:
            raise NotContractiveError(idx, lam)
    return Ifs(name=name, maps=maps, lambdas=lams, lambda_r=max(lams))


@dataclass(frozen=True)
class BlendSystem:
    """Several validated IFSs acting on one shared bounding box.

    ``lambda_script_r`` is the largest contraction constant over all member
    systems; it governs the worst-case error bounds downstream.
    """

    bbox: BBox
    systems: tuple[Ifs, ...]
    lambda_script_r: float

    @property
    def n(self) -> int:
        return len(self.systems)

    def by_name(self, name: str) -> Ifs:
        for s in self.systems:
            if s.name == name:
                return s
        raise KeyError(name)


def make_blend_system(bbox: BBox, systems: Iterable[Ifs]) -> BlendSystem:
    """Assemble a BlendSystem, warning when a map can escape the box.

    An affine map sends the box into the convex hull of the four corner
    images, so checking corners is exact.  Escapes are a warning, not an
    error: projection clamps stray images and counts them.
    """
    x0, y0, x1, y1 = (float(v) for v in bbox)
    if not (math.isfinite(x0) and math.isfinite(y0) and math.isfinite(x1) and math.isfinite(y1)):
        raise ValueError("bounding box coordinates must be finite")
    if not (x1 > x0 and y1 > y0):
        raise ValueError("bounding box must have positive width and height")
    systems = tuple(systems)
    if not systems:
        raise EmptyIfsError("a blend system needs at least one IFS")
    corners = ((x0, y0), (x1, y0), (x0, y1), (x1, y1))
    tol = 1e-12
    for s in systems:
        for idx, m in enumerate(s.maps, start=1):
            for p in corners:
                qx, qy = affine_apply(m, p)
                if qx < x0 - tol or qx > x1 + tol or qy < y0 - tol or qy > y1 + tol:
                    warnings.warn(
                        f"{s.name!r} map {idx} sends corner {p} to ({qx:.6g}, {qy:.6g}) "
                        "outside the bounding box; images will be clamped",
                        BBoxEscapeWarning,
                        stacklevel=2,
                    )
                    break
    return BlendSystem(bbox=(x0, y0, x1, y1), systems=systems, lambda_script_r=max(s.lambda_r for s in systems))


def validate_word(w: Sequence[int], n: int) -> None:
    """Check that every symbol of ``w`` lies in 1..n."""
    for s in w:
        if not 1 <= s <= n:
            raise SymbolOutOfRangeError(f"symbol {s} outside 1..{n}")


def code_map_point(ifs: Ifs, w: Sequence[int], x0: Point2) -> Point2:
    """Finite composition f_{w[0]}(f_{w[1]}(... f_{w[-1]}(x0) ...)).

    The last symbol of ``w`` acts first; an empty word returns ``x0``.
    """
    validate_word(w, ifs.n)
    x = (float(x0[0]), float(x0[1]))
    for s in reversed(w):
        x = affine_apply(ifs.maps[s - 1], x)
    return x


def d_lambda(aw: Sequence[int], bw: Sequence[int], lam: float) -> float:
    """Ultrametric on equal-length words: lam**k at the first differing
    1-based position k, and 0 for equal words."""
    if not 0.0 < lam < 1.0:
        raise LambdaOutOfRangeError(f"lambda must be in (0, 1), got {lam}")
    if len(aw) != len(bw):
        raise ValueError("words must have equal length")
    for k, (x, y) in enumerate(zip(aw, bw), start=1):
        if x != y:
            return lam**k
    return 0.0
