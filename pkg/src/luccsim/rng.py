"""Portable seeded random number generator.

Simulations must replay bit-identically from a seed, on any platform and in
any implementation language, so the generator is pinned to SplitMix64 rather
than to a host library whose stream is an implementation detail.

SplitMix64, defined entirely by its constants:

    state     = (state + 0x9E3779B97F4A7C15) mod 2^64
    z         = state
    z         = ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z         = ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output    = z XOR (z >> 31)

Known-answer check: seed 0 produces 0xE220A8397B1DCDAF first.

Derived draws are also fixed here: `random()` maps the top 53 bits to a
double in [0, 1); `randrange(n)` uses unbiased rejection sampling; `shuffle`
is a Fisher-Yates pass from the last element down.
"""

from __future__ import annotations

from typing import MutableSequence

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_1 = 0xBF58476D1CE4E5B9
_MIX_2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit generator; one instance per simulation run."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        """Next raw 64-bit output."""
        self._state = (self._state + _GOLDEN_GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX_1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX_2) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1), from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randrange(self, n: int) -> int:
        """Unbiased uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("randrange() bound must be positive")
        limit = (_MASK64 + 1) - ((_MASK64 + 1) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def shuffle(self, seq: MutableSequence) -> None:
        """In-place Fisher-Yates shuffle, iterating from the end."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.randrange(i + 1)
            seq[i], seq[j] = seq[j], seq[i]
