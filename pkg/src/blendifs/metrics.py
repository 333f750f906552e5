"""Hausdorff distances, blending coefficients, self-dissimilarity, covering radii.

Two blending-coefficient variants are provided on purpose:

* ``beta_definition``: at each position k >= 2 whose symbol differs from i,
  add the product of the contraction factors of positions 1..k-1, starting
  from 1.  A finite recipe only pins this down up to the unseen tail, so the
  function returns a rigorous (lower, upper) enclosure.
* ``beta_examples``: at each position k (including the first) whose symbol
  differs from i, add the product of the factors of positions 1..k, starting
  from 1.  This is the variant that matches the published reference values
  digit for digit.

Both variants are exactly 1 when every symbol equals i, and both stay within
[1, 1/(1 - max factor)].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np
from scipy import ndimage
from scipy.spatial.distance import cdist

from .blend import attractors_approx, blend_approx
from .exceptions import (
    EmptyInputError,
    GridMismatchError,
    LambdaOutOfRangeError,
    NeedTwoSystemsError,
    SymbolOutOfRangeError,
)
from .grid import DiscreteSet, Grid, hb_apply_discrete, realize
from .ifs import BlendSystem

RadiiVariant = Literal["theorem31", "selfmax"]


@dataclass(frozen=True)
class HausdorffResult:
    directed_ab: float
    directed_ba: float
    symmetric: float


@dataclass(frozen=True)
class BetaEntry:
    beta_def_lower: float
    beta_def_upper: float
    beta_examples: float


@dataclass(frozen=True)
class BetaReport:
    """Blending coefficients of one recipe against every member system.

    ``tail_bound`` is the shared width of the definition-variant enclosure
    (the unseen tail of the recipe contributes the same worst case for every
    system index).
    """

    theta: tuple[int, ...]
    entries: Mapping[int, BetaEntry]
    tail_bound: float

    def to_dict(self, names: Sequence[str] | None = None) -> dict:
        systems = {}
        for i, e in self.entries.items():
            row = {
                "beta_def_lower": e.beta_def_lower,
                "beta_def_upper": e.beta_def_upper,
                "beta_examples": e.beta_examples,
                "tail_bound": self.tail_bound,
            }
            if names is not None:
                row["name"] = names[i - 1]
            systems[str(i)] = row
        return {"theta": list(self.theta), "tail_bound": self.tail_bound, "systems": systems}

    def to_text(self, names: Sequence[str] | None = None) -> str:
        lines = [f"theta={','.join(map(str, self.theta))}", f"tail_bound={self.tail_bound!r}"]
        for i, e in self.entries.items():
            tag = names[i - 1] if names is not None else str(i)
            lines.append(f"beta.{tag}.beta_def_lower={e.beta_def_lower!r}")
            lines.append(f"beta.{tag}.beta_def_upper={e.beta_def_upper!r}")
            lines.append(f"beta.{tag}.beta_examples={e.beta_examples!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CoveringRadii:
    """Per-system ball radii covering every blend, plus the pairwise-max
    attractor distance ``m_value`` they scale with."""

    m_value: float
    radii: tuple[float, ...]
    variant: RadiiVariant

    def to_dict(self, names: Sequence[str] | None = None) -> dict:
        d: dict = {"radius_variant": self.variant, "m_value": self.m_value, "radii": list(self.radii)}
        if names is not None:
            d["names"] = list(names)
        return d

    def to_text(self, names: Sequence[str] | None = None) -> str:
        lines = [f"radius_variant={self.variant}", f"m_value={self.m_value!r}"]
        for idx, r in enumerate(self.radii, start=1):
            tag = names[idx - 1] if names is not None else str(idx)
            lines.append(f"{self.variant}.radius.{tag}={r!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BoundCheckResult:
    measured: float
    bound: float
    slack_ok: bool


def _as_points(x) -> np.ndarray:
    if isinstance(x, DiscreteSet):
        return realize(x.grid, x)
    arr = np.asarray(x, dtype=float).reshape(-1, 2)
    return arr


def _directed_brute(pa: np.ndarray, pb: np.ndarray) -> float:
    # max over pa of the distance to the nearest point of pb, chunked so the
    # pairwise distance block stays within a few tens of MB
    chunk = max(1, int(4_000_000 // max(len(pb), 1)))
    best = 0.0
    for s in range(0, len(pa), chunk):
        dmin = cdist(pa[s : s + chunk], pb).min(axis=1)
        best = max(best, float(dmin.max()))
    return best


def _mask_of(s: DiscreteSet) -> np.ndarray:
    side = s.grid.side
    mask = np.zeros((side, side), dtype=bool)
    mask[s.lin // side, s.lin % side] = True
    return mask


def _edt(s: DiscreteSet) -> np.ndarray:
    # exact Euclidean distance, in space units, from every node to the set
    return ndimage.distance_transform_edt(~_mask_of(s), sampling=(s.grid.step_y, s.grid.step_x))


def hausdorff(a, b, *, method: str = "auto") -> HausdorffResult:
    """Directed and symmetric Hausdorff distances between two point sets.

    ``method='brute'`` is the O(|A| |B|) sup-inf oracle over realized points;
    ``method='grid'`` evaluates an exact Euclidean distance transform of each
    set at the nodes of the other (both operands must share one grid).
    ``'auto'`` picks the grid version whenever it applies.  The two paths
    agree to floating-point accuracy on grid sets.
    """
    on_grid = isinstance(a, DiscreteSet) and isinstance(b, DiscreteSet)
    if on_grid and a.grid != b.grid:
        raise GridMismatchError("sets live on different grids")
    if method == "auto":
        method = "grid" if on_grid else "brute"
    if method == "grid":
        if not on_grid:
            raise ValueError("grid method needs two DiscreteSets on one grid")
        if len(a) == 0 or len(b) == 0:
            raise EmptyInputError("Hausdorff distance needs nonempty sets")
        side = a.grid.side
        ab = float(_edt(b)[a.lin // side, a.lin % side].max())
        ba = float(_edt(a)[b.lin // side, b.lin % side].max())
    elif method == "brute":
        pa, pb = _as_points(a), _as_points(b)
        if len(pa) == 0 or len(pb) == 0:
            raise EmptyInputError("Hausdorff distance needs nonempty sets")
        ab = _directed_brute(pa, pb)
        ba = _directed_brute(pb, pa)
    else:
        raise ValueError(f"unknown method {method!r}")
    return HausdorffResult(directed_ab=ab, directed_ba=ba, symmetric=max(ab, ba))


def _lambdas_of(sys_or_lambdas) -> tuple[float, ...]:
    if isinstance(sys_or_lambdas, BlendSystem):
        return tuple(s.lambda_r for s in sys_or_lambdas.systems)
    lams = tuple(float(v) for v in sys_or_lambdas)
    for v in lams:
        if not 0.0 < v < 1.0:
            raise LambdaOutOfRangeError(f"contraction factor {v} outside (0, 1)")
    return lams


def beta_examples(theta: Sequence[int], sys_or_lambdas, i: int) -> float:
    """Reference-matching blending coefficient (truncated to the finite recipe)."""
    lams = _lambdas_of(sys_or_lambdas)
    if not 1 <= i <= len(lams):
        raise SymbolOutOfRangeError(f"system index {i} outside 1..{len(lams)}")
    total = 1.0
    p = 1.0
    for sym in theta:
        if not 1 <= sym <= len(lams):
            raise SymbolOutOfRangeError(f"symbol {sym} outside 1..{len(lams)}")
        p *= lams[sym - 1]
        if sym != i:
            total += p
    return total


def beta_definition(theta: Sequence[int], sys_or_lambdas, i: int) -> tuple[float, float]:
    """Enclosure (lower, upper) of the definition-variant blending coefficient.

    ``lower`` truncates the series to the given recipe; ``upper`` adds the
    worst-case unseen tail, in which every later symbol differs from i and
    every later factor equals the family maximum.
    """
    lams = _lambdas_of(sys_or_lambdas)
    if not 1 <= i <= len(lams):
        raise SymbolOutOfRangeError(f"system index {i} outside 1..{len(lams)}")
    lam_max = max(lams)
    lower = 1.0
    p = 1.0  # product of the factors of positions 1..k-1 while visiting position k
    for k, sym in enumerate(theta, start=1):
        if not 1 <= sym <= len(lams):
            raise SymbolOutOfRangeError(f"symbol {sym} outside 1..{len(lams)}")
        if k >= 2 and sym != i:
            lower += p
        p *= lams[sym - 1]
    tail = p / (1.0 - lam_max)
    return lower, lower + tail


def beta_report(theta: Sequence[int], sys_or_lambdas) -> BetaReport:
    """Both coefficient variants for every system index."""
    lams = _lambdas_of(sys_or_lambdas)
    theta = tuple(int(t) for t in theta)
    entries = {}
    tail = 0.0
    for i in range(1, len(lams) + 1):
        lo, up = beta_definition(theta, lams, i)
        entries[i] = BetaEntry(beta_def_lower=lo, beta_def_upper=up, beta_examples=beta_examples(theta, lams, i))
        tail = up - lo
    return BetaReport(theta=theta, entries=entries, tail_bound=tail)


def delta_self_dissimilarity(sys: BlendSystem, g: Grid, i0: int, attractors: Sequence[DiscreteSet]) -> float:
    """How far the other systems' set maps move attractor i0.

    Maximum over every member system of the symmetric Hausdorff distance
    between the image of attractor i0 under that system's set map and
    attractor i0 itself.  The i = i0 term is zero up to discretization.
    """
    if not 1 <= i0 <= sys.n:
        raise SymbolOutOfRangeError(f"system index {i0} outside 1..{sys.n}")
    a0 = attractors[i0 - 1]
    if len(a0) == 0:
        raise EmptyInputError("attractor approximation is empty")
    best = 0.0
    for i in range(1, sys.n + 1):
        moved = hb_apply_discrete(g, sys.systems[i - 1], a0)
        best = max(best, hausdorff(moved, a0).symmetric)
    return best


def bound_check(
    sys: BlendSystem,
    g: Grid,
    theta: Sequence[int],
    i0: int,
    *,
    attractors: Sequence[DiscreteSet] | None = None,
    delta_i0: float | None = None,
    workers: int = 1,
) -> BoundCheckResult:
    """Compare a blend's measured distance from attractor i0 with the
    coefficient bound: beta_def_upper * delta_i0 plus discretization slack
    (twice the worst error bound, once per approximated set).

    ``attractors`` and ``delta_i0`` can be supplied to amortize their cost
    over many recipes; they depend only on the grid and the recipe length.
    """
    theta = tuple(int(t) for t in theta)
    res = blend_approx(sys, g, theta, workers=workers)
    if attractors is None:
        attractors = attractors_approx(sys, g, len(theta), workers=workers)
    measured = hausdorff(res.output, attractors[i0 - 1]).symmetric
    _, beta_up = beta_definition(theta, sys, i0)
    d0 = delta_self_dissimilarity(sys, g, i0, attractors) if delta_i0 is None else float(delta_i0)
    bound = beta_up * d0 + 2.0 * res.error_bound_worst
    return BoundCheckResult(measured=measured, bound=bound, slack_ok=measured <= bound)


def covering_radii_selfmax(lambdas: Sequence[float], m_value: float) -> CoveringRadii:
    """Radii from the self-consistent worked form: the largest radius solves
    r = L (M + r) with L the largest factor, and every system gets
    r_i = lam_i (M + r)."""
    lams = _lambdas_of(lambdas)
    if m_value < 0:
        raise ValueError("m_value must be nonnegative")
    lam_max = max(lams)
    r_tilde = lam_max * m_value / (1.0 - lam_max)
    return CoveringRadii(
        m_value=float(m_value),
        radii=tuple(l * (m_value + r_tilde) for l in lams),
        variant="selfmax",
    )


def covering_radii_thm31(lambdas: Sequence[float], m_value: float) -> CoveringRadii:
    """Closed-form radii using the two largest factors.

    With factors sorted ascending as l[0] <= ... <= l[N-1] and
    D = 1 - l[N-2] * l[N-1]:

        r_j   = M * l[j]   * (1 + l[N-1]) / D   for j < N-1
        r_max = M * l[N-1] * (1 + l[N-2]) / D

    Radii are returned in the original system order and are nondecreasing
    when re-sorted by factor.
    """
    lams = _lambdas_of(lambdas)
    if len(lams) < 2:
        raise NeedTwoSystemsError("ordered covering radii need at least two systems")
    if m_value < 0:
        raise ValueError("m_value must be nonnegative")
    order = sorted(range(len(lams)), key=lambda idx: lams[idx])
    lam_n = lams[order[-1]]
    lam_n1 = lams[order[-2]]
    denom = 1.0 - lam_n1 * lam_n
    radii = [0.0] * len(lams)
    for rank, idx in enumerate(order):
        if rank == len(lams) - 1:
            radii[idx] = m_value * lam_n * (1.0 + lam_n1) / denom
        else:
            radii[idx] = m_value * lams[idx] * (1.0 + lam_n) / denom
    return CoveringRadii(m_value=float(m_value), radii=tuple(radii), variant="theorem31")
