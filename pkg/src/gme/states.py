"""State representations, their validation, and dense conversions.

Conventions used across the package:

* qubit 0 is the most significant bit of a computational-basis index;
* all angles are radians;
* serialized complex numbers are ``[re, im]`` pairs.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from ._linalg import ID2, SIGMA_X, SIGMA_Y, SIGMA_Z, kron2

NORM_REJECT_TOL = 1e-6  # larger deviations from unit norm are user errors
DENSE_QUBIT_CAP = 20  # dense vectors above this size are refused


class ValidationError(ValueError):
    """A state failed its construction invariants."""


class CapacityError(ValidationError):
    """A dense representation would exceed the qubit cap."""


class UnsupportedAmplitudesError(ValidationError):
    """The analytic solver does not cover these amplitudes; use the oracle."""


def _unit_vector(values: Sequence[complex], length: int, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=complex).reshape(-1)
    if arr.size != length:
        raise ValidationError(f"{what} must have length {length}, got {arr.size}")
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValidationError(f"{what} must be finite")
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > NORM_REJECT_TOL:
        raise ValidationError(
            f"{what} must be normalized (norm deviates by {abs(norm - 1.0):.3g})"
        )
    arr = arr / norm
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PureState:
    """Dense state vector of ``n_qubits`` qubits.

    Amplitudes are indexed by computational-basis bitstrings with qubit 0 as
    the most significant bit.  Vectors within 1e-6 of unit norm are silently
    renormalized; anything farther off is rejected.
    """

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        n = self.n_qubits
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValidationError("n_qubits must be a positive integer")
        if n > DENSE_QUBIT_CAP:
            raise CapacityError(f"dense states are capped at {DENSE_QUBIT_CAP} qubits")
        amps = _unit_vector(self.amplitudes, 1 << n, "amplitudes")
        object.__setattr__(self, "n_qubits", int(n))
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class SymmetricDickeState:
    """Symmetric N-qubit state given by amplitudes over excitation number m."""

    N: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        n = self.N
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValidationError("N must be a positive integer")
        amps = _unit_vector(self.amplitudes, n + 1, "amplitudes")
        object.__setattr__(self, "N", int(n))
        object.__setattr__(self, "amplitudes", amps)

    @property
    def non_negative(self) -> bool:
        """True iff every amplitude is real (imag within 1e-12) and >= 0."""
        return bool(
            np.all(np.abs(self.amplitudes.imag) <= 1e-12)
            and np.all(self.amplitudes.real >= -1e-12)
        )


@dataclass(frozen=True)
class SymThreeQubitCanonical:
    """Canonical symmetric three-qubit state.

    Parametrized by non-negative reals (g, t, h) with g^2 + 3 t^2 + h^2 = 1
    and a relative phase gamma in [-pi/2, pi/2] carried by the all-ones
    component.
    """

    g: float
    t: float
    h: float
    gamma: float

    def __post_init__(self) -> None:
        g, t, h = float(self.g), float(self.t), float(self.h)
        gamma = float(self.gamma)
        if min(g, t, h) < 0.0:
            raise ValidationError("g, t, h must be non-negative")
        if not -math.pi / 2 - 1e-12 <= gamma <= math.pi / 2 + 1e-12:
            raise ValidationError("gamma must lie in [-pi/2, pi/2]")
        norm_sq = g * g + 3.0 * t * t + h * h
        norm = math.sqrt(norm_sq)
        if abs(norm - 1.0) > NORM_REJECT_TOL:
            raise ValidationError(
                f"g^2 + 3 t^2 + h^2 must equal 1 (deviates by {abs(norm_sq - 1.0):.3g})"
            )
        object.__setattr__(self, "g", g / norm)
        object.__setattr__(self, "t", t / norm)
        object.__setattr__(self, "h", h / norm)
        object.__setattr__(self, "gamma", gamma)


@dataclass(frozen=True)
class RankTwoCanonical:
    """Two-qubit rank-two state in canonical subspace coordinates.

    ``gamma1``/``gamma2`` fix the rank-two subspace (0 <= gamma2 <= gamma1 <=
    pi/2 with gamma1 + gamma2 <= pi/2); ``x`` is the Bloch vector of the state
    inside that subspace (norm at most 1).
    """

    gamma1: float
    gamma2: float
    x: np.ndarray

    def __post_init__(self) -> None:
        g1, g2 = float(self.gamma1), float(self.gamma2)
        tol = 1e-12
        if not (-tol <= g2 <= g1 + tol and g1 <= math.pi / 2 + tol):
            raise ValidationError("angles must satisfy 0 <= gamma2 <= gamma1 <= pi/2")
        if g1 + g2 > math.pi / 2 + tol:
            raise ValidationError("angles must satisfy gamma1 + gamma2 <= pi/2")
        x = np.asarray(self.x, dtype=float).reshape(-1)
        if x.size != 3:
            raise ValidationError("x must be a 3-vector")
        if float(x @ x) > 1.0 + 1e-12:
            raise ValidationError("Bloch vector must satisfy |x| <= 1")
        if abs(x[1]) < 1e-14:  # exact zero activates the 1-D reduction downstream
            x = x.copy()
            x[1] = 0.0
        x = x.copy()
        x.flags.writeable = False
        object.__setattr__(self, "gamma1", g1)
        object.__setattr__(self, "gamma2", g2)
        object.__setattr__(self, "x", x)


@dataclass(frozen=True)
class BlochVector:
    """Unit Bloch vector of a pure qubit state."""

    s: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.s, dtype=float).reshape(-1)
        if s.size != 3:
            raise ValidationError("Bloch vector must have 3 components")
        norm = float(np.linalg.norm(s))
        if abs(norm - 1.0) > NORM_REJECT_TOL:
            raise ValidationError("Bloch vector must have unit norm")
        s = s / norm
        s.flags.writeable = False
        object.__setattr__(self, "s", s)

    def __iter__(self):
        return iter(self.s)


class CaseTag(str, Enum):
    """Which stationarity case produced a symmetric three-qubit candidate."""

    CASE1 = "Case1"
    CASE21 = "Case21"
    CASE22 = "Case22"
    CASE23 = "Case23"


@dataclass(frozen=True)
class CandidateRecord:
    """One stationary-point candidate of the overlap maximization."""

    phi: float
    theta: float
    lam: float  # Lagrange multiplier of the unit-norm constraint
    G_j_squared: float
    case_tag: CaseTag
    residual: float  # max abs stationarity residual after multiplier elimination


Method = str  # one of: dicke, sym3q, rank2_closed, rank2_numeric, oracle

_METHODS = ("dicke", "sym3q", "rank2_closed", "rank2_numeric", "oracle")


@dataclass(frozen=True)
class GmResult:
    """Outcome of a maximal-overlap computation.

    ``G`` is the maximal overlap, ``E_G = 1 - G^2`` the geometric measure.
    ``closest_product`` lists one Bloch vector per party when the maximizing
    product state was computed, and ``candidates`` is the stationary-point
    audit trail for the enumerating solver.
    """

    G: float
    G_squared: float
    E_G: float
    closest_product: tuple[BlochVector, ...] = ()
    candidates: tuple[CandidateRecord, ...] = ()
    method: Method = "oracle"
    warning: str | None = None

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise ValidationError(f"unknown method tag {self.method!r}")
        if not 0.0 <= self.G <= 1.0:
            raise ValidationError("G must lie in [0, 1]")

    @classmethod
    def from_overlap(cls, overlap: float, **kwargs: Any) -> "GmResult":
        g = min(1.0, max(0.0, float(overlap)))
        g_sq = g * g
        return cls(G=g, G_squared=g_sq, E_G=1.0 - g_sq, **kwargs)

    @classmethod
    def from_overlap_squared(cls, overlap_sq: float, **kwargs: Any) -> "GmResult":
        g_sq = min(1.0, max(0.0, float(overlap_sq)))
        return cls(G=math.sqrt(g_sq), G_squared=g_sq, E_G=1.0 - g_sq, **kwargs)


def sqrt_binomial(n: int, m: int) -> float:
    """sqrt(C(n, m)) through log-gamma, stable for any desk-scale n."""
    return math.exp(
        0.5 * (math.lgamma(n + 1) - math.lgamma(m + 1) - math.lgamma(n - m + 1))
    )


def dicke_to_dense(state: SymmetricDickeState) -> PureState:
    """Expand a Dicke-basis state into the full 2^N amplitude vector.

    Every bitstring of Hamming weight m receives amplitude
    ``a_m / sqrt(C(N, m))``.
    """
    n = state.N
    if n > DENSE_QUBIT_CAP:
        raise CapacityError(f"dense expansion is capped at {DENSE_QUBIT_CAP} qubits")
    weights = np.array([int(i).bit_count() for i in range(1 << n)])
    scale = np.array([1.0 / sqrt_binomial(n, m) for m in range(n + 1)])
    amps = state.amplitudes[weights] * scale[weights]
    return PureState(n_qubits=n, amplitudes=amps)


def sym3q_to_dense(state: SymThreeQubitCanonical) -> PureState:
    """Dense 8-amplitude vector of the canonical symmetric three-qubit state."""
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = state.g
    amps[0b011] = state.t
    amps[0b101] = state.t
    amps[0b110] = state.t
    amps[0b111] = state.h * cmath.exp(1j * state.gamma)
    return PureState(n_qubits=3, amplitudes=amps)


def sym3q_to_dicke(state: SymThreeQubitCanonical) -> SymmetricDickeState:
    """Dicke-basis amplitudes (m = 0..3) of the canonical three-qubit state."""
    amps = np.array(
        [
            state.g,
            0.0,
            math.sqrt(3.0) * state.t,
            state.h * cmath.exp(1j * state.gamma),
        ],
        dtype=complex,
    )
    return SymmetricDickeState(N=3, amplitudes=amps)


def _rank2_operators(gamma1: float, gamma2: float) -> tuple[np.ndarray, ...]:
    u = math.cos(gamma1) * math.cos(gamma2)
    v = math.sin(gamma1) * math.sin(gamma2)
    z1 = math.sin(gamma1) * math.cos(gamma2)
    z2 = math.cos(gamma1) * math.sin(gamma2)
    eye4 = kron2(ID2, ID2)
    proj = 0.5 * (
        eye4
        + u * kron2(SIGMA_Z, ID2)
        + v * kron2(ID2, SIGMA_Z)
        + z1 * kron2(SIGMA_X, SIGMA_X)
        + z2 * kron2(SIGMA_Y, SIGMA_Y)
    )
    op1 = 0.5 * (
        math.sin(gamma1) * kron2(SIGMA_X, ID2)
        + math.cos(gamma2) * kron2(ID2, SIGMA_X)
        + math.sin(gamma2) * kron2(SIGMA_X, SIGMA_Z)
        + math.cos(gamma1) * kron2(SIGMA_Z, SIGMA_X)
    )
    op2 = 0.5 * (
        math.sin(gamma2) * kron2(SIGMA_Y, ID2)
        + math.cos(gamma1) * kron2(ID2, SIGMA_Y)
        + math.sin(gamma1) * kron2(SIGMA_Y, SIGMA_Z)
        + math.cos(gamma2) * kron2(SIGMA_Z, SIGMA_Y)
    )
    op3 = 0.5 * (
        v * kron2(SIGMA_Z, ID2)
        + u * kron2(ID2, SIGMA_Z)
        - z2 * kron2(SIGMA_X, SIGMA_X)
        - z1 * kron2(SIGMA_Y, SIGMA_Y)
        + kron2(SIGMA_Z, SIGMA_Z)
    )
    return proj, op1, op2, op3


def rank2_to_matrix(state: RankTwoCanonical) -> np.ndarray:
    """Density matrix of the canonical rank-two state.

    Assembled as half the subspace projector plus the Bloch components times
    the subspace Pauli operators.  The result is Hermitian, trace one, and
    positive semidefinite with at most two nonzero eigenvalues.
    """
    proj, op1, op2, op3 = _rank2_operators(state.gamma1, state.gamma2)
    x1, x2, x3 = state.x
    return 0.5 * (proj + x1 * op1 + x2 * op2 + x3 * op3)


# ---------------------------------------------------------------------------
# JSON serialization: {"kind": "pure"|"dicke"|"sym3q"|"rank2", ...fields}
# ---------------------------------------------------------------------------

StateLike = PureState | SymmetricDickeState | SymThreeQubitCanonical | RankTwoCanonical


def _complex_pairs(arr: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in arr]


def _from_complex_pairs(pairs: Sequence[Sequence[float]]) -> np.ndarray:
    return np.array([complex(p[0], p[1]) for p in pairs], dtype=complex)


def state_to_dict(state: StateLike) -> dict[str, Any]:
    """JSON-compatible dictionary for a state (lossless float round-trip)."""
    if isinstance(state, PureState):
        return {
            "kind": "pure",
            "n_qubits": state.n_qubits,
            "amplitudes": _complex_pairs(state.amplitudes),
        }
    if isinstance(state, SymmetricDickeState):
        return {
            "kind": "dicke",
            "n_qubits": state.N,
            "amplitudes": _complex_pairs(state.amplitudes),
        }
    if isinstance(state, SymThreeQubitCanonical):
        return {
            "kind": "sym3q",
            "g": state.g,
            "t": state.t,
            "h": state.h,
            "gamma": state.gamma,
        }
    if isinstance(state, RankTwoCanonical):
        return {
            "kind": "rank2",
            "gamma1": state.gamma1,
            "gamma2": state.gamma2,
            "x": [float(v) for v in state.x],
        }
    raise ValidationError(f"cannot serialize object of type {type(state).__name__}")


def state_from_dict(data: dict[str, Any]) -> StateLike:
    """Inverse of :func:`state_to_dict`; raises ValidationError on bad input."""
    try:
        kind = data["kind"]
    except (TypeError, KeyError):
        raise ValidationError("state JSON must be an object with a 'kind' field")
    try:
        if kind == "pure":
            return PureState(
                n_qubits=int(data["n_qubits"]),
                amplitudes=_from_complex_pairs(data["amplitudes"]),
            )
        if kind == "dicke":
            return SymmetricDickeState(
                N=int(data["n_qubits"]),
                amplitudes=_from_complex_pairs(data["amplitudes"]),
            )
        if kind == "sym3q":
            return SymThreeQubitCanonical(
                g=float(data["g"]),
                t=float(data["t"]),
                h=float(data["h"]),
                gamma=float(data["gamma"]),
            )
        if kind == "rank2":
            return RankTwoCanonical(
                gamma1=float(data["gamma1"]),
                gamma2=float(data["gamma2"]),
                x=[float(v) for v in data["x"]],
            )
    except KeyError as exc:
        raise ValidationError(f"state JSON is missing field {exc}") from exc
    raise ValidationError(f"unknown state kind {kind!r}")


def load_state(path: str) -> StateLike:
    with open(path, "r", encoding="utf-8") as handle:
        return state_from_dict(json.load(handle))


def save_state(state: StateLike, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(state_to_dict(state), handle, indent=2)
        handle.write("\n")
