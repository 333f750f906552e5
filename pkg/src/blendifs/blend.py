"""Discrete blend approximation with certified error bounds, and parameter selection.

A blend interleaves the set maps of several IFSs according to a recipe
``theta``: the last symbol's operator is applied first and the first symbol's
operator last, so the computed set approximates

    F[theta_1] ( F[theta_2] ( ... F[theta_k] (Z) ... ) )

snapped onto the grid after every application.  Two Hausdorff error bounds
against the exact (infinite-recipe) blend are reported:

    worst  = L**k * diam + eps / (1 - L)                 with L = max contraction
    tight  = (prod of the k factors) * diam
             + eps * (1 + sum of the proper prefix products)

The tight bound follows the actual contraction factors in recipe order; it
never exceeds the worst bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import BadLengthError, DeltaNonPositiveError, EmptyInputError, GridMismatchError
from .grid import DiscreteSet, Grid, bbox_diameter, full_set, hb_apply_discrete_counted
from .ifs import BBox, BlendSystem, validate_word

BlendingSequence = tuple[int, ...]


@dataclass(frozen=True)
class BlendResult:
    output: DiscreteSet
    theta: BlendingSequence
    error_bound_worst: float
    error_bound_tight: float
    clamp_count: int


class ParameterChoice(NamedTuple):
    k: int
    epsilon_max: float
    m_min: int


def error_bound_worst(lambda_script_r: float, k: int, diam: float, epsilon: float) -> float:
    return lambda_script_r**k * diam + epsilon / (1.0 - lambda_script_r)


def error_bound_tight(lams_in_theta_order: Sequence[float], diam: float, epsilon: float) -> float:
    prefix = np.cumprod(np.asarray(lams_in_theta_order, dtype=float))
    return float(prefix[-1] * diam + epsilon * (1.0 + prefix[:-1].sum()))


def blend_approx(
    sys: BlendSystem,
    g: Grid,
    theta: Sequence[int],
    z: DiscreteSet | None = None,
    *,
    workers: int = 1,
) -> BlendResult:
    """Run the blend recipe on the grid and certify the result.

    ``z`` seeds the iteration (full grid when omitted; the bounds do not
    depend on the seed).  Exactly ``len(theta)`` set-map applications are
    performed, last symbol first.
    """
    if g.bbox != sys.bbox:
        raise GridMismatchError("grid and blend system use different bounding boxes")
    theta = tuple(int(t) for t in theta)
    if not theta:
        raise EmptyInputError("blending sequence is empty")
    validate_word(theta, sys.n)
    w = z if z is not None else full_set(g)
    if len(w) == 0:
        raise EmptyInputError("seed set is empty")
    clamps = 0
    for sym in reversed(theta):
        w, c = hb_apply_discrete_counted(g, sys.systems[sym - 1], w, workers=workers)
        clamps += c
    lams = [sys.systems[sym - 1].lambda_r for sym in theta]
    return BlendResult(
        output=w,
        theta=theta,
        error_bound_worst=error_bound_worst(sys.lambda_script_r, len(theta), g.diameter, g.epsilon),
        error_bound_tight=error_bound_tight(lams, g.diameter, g.epsilon),
        clamp_count=clamps,
    )


def attractor_approx(sys: BlendSystem, g: Grid, i: int, k: int, *, workers: int = 1) -> BlendResult:
    """Constant-recipe blend (i, i, ..., i): the discrete attractor of system i."""
    return blend_approx(sys, g, (i,) * k, workers=workers)


def attractors_approx(sys: BlendSystem, g: Grid, k: int, *, workers: int = 1) -> list[DiscreteSet]:
    """Discrete attractor approximations for every member system, in order."""
    return [attractor_approx(sys, g, i, k, workers=workers).output for i in range(1, sys.n + 1)]


def choose_parameters(delta: float, sys: BlendSystem, bbox: BBox | None = None) -> ParameterChoice:
    """Smallest recipe length and finest-needed grid for a target accuracy.

    Splits the budget in half: k is the smallest integer with
    L**k * diam < delta/2, and epsilon_max = delta * (1 - L) / 2 makes the
    projection term eps/(1-L) at most delta/2.  ``m_min`` is the smallest
    resolution whose epsilon does not exceed epsilon_max.
    """
    if delta <= 0:
        raise DeltaNonPositiveError(f"delta must be positive, got {delta}")
    box = bbox if bbox is not None else sys.bbox
    diam = bbox_diameter(box)
    lam = sys.lambda_script_r
    k = max(1, math.floor(math.log(delta / (2.0 * diam)) / math.log(lam)) + 1)
    epsilon_max = delta * (1.0 - lam) / 2.0
    m_min = max(1, math.ceil(diam / (2.0 * epsilon_max)))
    return ParameterChoice(k=k, epsilon_max=epsilon_max, m_min=m_min)


# splitmix64: additive constant and the two finalizer multipliers.
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D49BBB133111EB
_MASK64 = (1 << 64) - 1


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + _GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return state, z ^ (z >> 31)


def generate_theta(seed: int, length: int, n_systems: int) -> BlendingSequence:
    """Reproducible pseudo-random blending sequence over {1..n_systems}.

    Pure 64-bit integer mixing (splitmix64, constants above and in the
    README), so a given seed yields the same sequence on every platform.
    """
    if length < 1:
        raise BadLengthError(f"length must be >= 1, got {length}")
    if n_systems < 1:
        raise ValueError(f"n_systems must be >= 1, got {n_systems}")
    state = int(seed) & _MASK64
    out = []
    for _ in range(length):
        state, z = _splitmix64(state)
        out.append(1 + z % n_systems)
    return tuple(out)
