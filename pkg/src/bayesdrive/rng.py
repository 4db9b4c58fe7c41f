"""Deterministic PCG32 generator.

Both solver backends (pure Python and the compiled kernel) draw from this
exact generator with the same consumption order, so a fixed seed yields
bit-identical results regardless of backend.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_MULT = 6364136223846793005


class Pcg32:
    __slots__ = ("state", "inc")

    def __init__(self, seed: int, seq: int = 0):
        self.state = 0
        self.inc = ((seq << 1) | 1) & _MASK64
        self.next_u32()
        self.state = (self.state + (seed & _MASK64)) & _MASK64
        self.next_u32()

    def next_u32(self) -> int:
        old = self.state
        self.state = (old * _MULT + self.inc) & _MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & 0xFFFFFFFF

    def next_double(self) -> float:
        # uniform in [0, 1) with 32 bits of resolution
        return self.next_u32() * 2.0**-32

    def choice(self, probs) -> int:
        """Sample an index from (possibly unnormalized) nonnegative weights."""
        total = 0.0
        for p in probs:
            total += p
        r = self.next_double() * total
        acc = 0.0
        last = 0
        for i, p in enumerate(probs):
            acc += p
            last = i
            if r < acc:
                return i
        return last
