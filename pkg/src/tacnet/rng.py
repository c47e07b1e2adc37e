"""Portable 64-bit generator used for benchmark instance creation.

SplitMix64: the state advances by the 64-bit golden-ratio increment and each
output is a finalized avalanche mix of the state.  The algorithm is small
enough to reimplement bit-for-bit in any language, which keeps generated
instances reproducible outside this package.  Reference pipeline:

    state' = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state'
    z = (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z = (z XOR (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    output = z XOR (z >> 31)

``uniform()`` maps the top 53 bits of the output onto [0, 1).
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 2.0 ** -53


class SplitMix64:
    """Deterministic stream of 64-bit words / unit doubles from an integer seed."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Next double in [0, 1) with 53-bit resolution."""
        return (self.next_u64() >> 11) * _INV_2_53
