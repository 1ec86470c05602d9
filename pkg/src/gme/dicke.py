"""Maximal overlap for symmetric states with non-negative Dicke amplitudes.

For such states the optimal symmetric product spinor can be taken real, so
the whole problem collapses to maximizing a trigonometric polynomial of one
mixing angle alpha in [0, pi/2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._optim import bisect_roots_vector
from .states import (
    BlochVector,
    GmResult,
    SymmetricDickeState,
    UnsupportedAmplitudesError,
    ValidationError,
    sqrt_binomial,
)

GRID_POINTS_PER_QUBIT = 512
BISECT_TOL = 1e-12
TIE_TOL = 1e-12


@dataclass(frozen=True)
class DickeObjectiveSample:
    """One evaluation of the single-angle overlap objective."""

    alpha: float
    value: float


def _require_non_negative(state: SymmetricDickeState) -> np.ndarray:
    if not state.non_negative:
        raise UnsupportedAmplitudesError(
            "amplitudes must be real and non-negative for the single-angle "
            "solver; use the symmetric oracle for general amplitudes"
        )
    return np.maximum(state.amplitudes.real, 0.0)


def dicke_objective(state: SymmetricDickeState, alpha: float) -> float:
    """Overlap of |a>^(x)N with the state for a = cos(alpha)|0> + sin(alpha)|1>.

    Equals sum_m sqrt(C(N, m)) a_m cos^(N-m)(alpha) sin^m(alpha); valid only
    for non-negative amplitude vectors, where the relative phase of the spinor
    is optimally zero.
    """
    amps = _require_non_negative(state)
    if not -1e-12 <= alpha <= math.pi / 2 + 1e-12:
        raise ValidationError("alpha must lie in [0, pi/2]")
    n = state.N
    total = 0.0
    for m in range(n + 1):
        total += (
            sqrt_binomial(n, m)
            * amps[m]
            * math.cos(alpha) ** (n - m)
            * math.sin(alpha) ** m
        )
    return total


def _objective_vector(coeff: np.ndarray, n: int, alphas: np.ndarray) -> np.ndarray:
    cos_a = np.cos(alphas)
    sin_a = np.sin(alphas)
    total = np.zeros_like(alphas)
    for m in range(n + 1):
        if coeff[m] == 0.0:
            continue
        total += coeff[m] * cos_a ** (n - m) * sin_a**m
    return total


def _derivative_vector(coeff: np.ndarray, n: int, alphas: np.ndarray) -> np.ndarray:
    cos_a = np.cos(alphas)
    sin_a = np.sin(alphas)
    total = np.zeros_like(alphas)
    for m in range(n + 1):
        if coeff[m] == 0.0:
            continue
        if m >= 1:  # guard: sin^(m-1) is singular to write down for m = 0
            total += coeff[m] * m * cos_a ** (n - m + 1) * sin_a ** (m - 1)
        if m <= n - 1:
            total -= coeff[m] * (n - m) * cos_a ** (n - m - 1) * sin_a ** (m + 1)
    return total


def dicke_critical_points(state: SymmetricDickeState) -> list[DickeObjectiveSample]:
    """Objective samples at every stationary angle plus both endpoints.

    Stationary angles are located by bracketing sign changes of the derivative
    on a uniform grid of 512 * N points and bisecting each bracket to 1e-12.
    """
    amps = _require_non_negative(state)
    n = state.N
    coeff = np.array([sqrt_binomial(n, m) * amps[m] for m in range(n + 1)])

    grid = np.linspace(0.0, math.pi / 2, GRID_POINTS_PER_QUBIT * n)
    deriv = _derivative_vector(coeff, n, grid)

    alphas: list[float] = [0.0, math.pi / 2]
    alphas.extend(float(a) for a in grid[deriv == 0.0])

    signs = np.sign(deriv)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0.0)[0]
    if flips.size:
        roots = bisect_roots_vector(
            lambda a: _derivative_vector(coeff, n, a),
            grid[flips],
            grid[flips + 1],
            deriv[flips],
            tol=BISECT_TOL,
        )
        alphas.extend(float(a) for a in roots)

    alphas = sorted(set(alphas))
    values = _objective_vector(coeff, n, np.array(alphas))
    return [DickeObjectiveSample(a, float(v)) for a, v in zip(alphas, values)]


def gm_dicke_nonneg(state: SymmetricDickeState) -> GmResult:
    """Maximal overlap for non-negative Dicke amplitudes.

    Picks the best stationary angle (ties within 1e-12 resolve to the smaller
    alpha) and reports the symmetric closest product state it defines.
    """
    samples = dicke_critical_points(state)
    best_value = max(s.value for s in samples)
    # samples are sorted by alpha, so the first near-tie wins
    chosen = next(s for s in samples if s.value >= best_value - TIE_TOL)

    bloch = BlochVector(
        np.array([math.sin(2 * chosen.alpha), 0.0, math.cos(2 * chosen.alpha)])
    )
    return GmResult.from_overlap(
        chosen.value, closest_product=(bloch,) * state.N, method="dicke"
    )
