"""Deterministic pseudo-random streams for the oracle restarts.

The generator is xorshift64* seeded through splitmix64.  Both algorithms are
small enough to re-implement in any language from the constants below, so
oracle fixtures are reproducible outside Python.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(value: int) -> int:
    """One splitmix64 mixing step applied to a 64-bit integer."""
    z = (value + _SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class XorShift64Star:
    """xorshift64* stream; ``uniform`` yields doubles in [0, 1)."""

    def __init__(self, seed: int) -> None:
        state = splitmix64(seed & _MASK64)
        # the all-zero state is a fixed point of the xorshift recurrence
        self._state = state if state != 0 else _SPLITMIX_GAMMA

    def next_u64(self) -> int:
        s = self._state
        s ^= s >> 12
        s = (s ^ (s << 25)) & _MASK64
        s ^= s >> 27
        self._state = s
        return (s * 0x2545F4914F6CDD1D) & _MASK64

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def bloch_point(self) -> tuple[float, float, float]:
        """Uniform point on the unit sphere (area measure)."""
        z = 1.0 - 2.0 * self.uniform()
        azimuth = 2.0 * math.pi * self.uniform()
        r = math.sqrt(max(0.0, 1.0 - z * z))
        return (r * math.cos(azimuth), r * math.sin(azimuth), z)


def restart_stream(seed: int, restart: int) -> XorShift64Star:
    """Stream for one oracle restart.

    Restart ``k`` always sees the same stream regardless of how many restarts
    run in total, so enlarging the restart budget never perturbs earlier ones.
    """
    return XorShift64Star(splitmix64((seed + restart) & _MASK64))
