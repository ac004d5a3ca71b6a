"""Counter-based random numbers: SplitMix64 of ``seed`` and a 64-bit counter.

``draw(seed, stream, i)`` is a pure function, so any language can reproduce
a corpus from ``(seed, stream, i)`` alone:

    x = (seed + GOLDEN * (stream * 2**32 + i + 1)) mod 2**64
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB mod 2**64
    x =  x ^ (x >> 31)
"""

from __future__ import annotations

from fractions import Fraction

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix(x: int) -> int:
    x &= MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK
    return x ^ (x >> 31)


def draw(seed: int, stream: int, i: int) -> int:
    return mix(seed + GOLDEN * ((stream << 32) + i + 1))


class CounterRNG:
    """Sequential view of :func:`draw` for one ``(seed, stream)`` pair."""

    def __init__(self, seed: int, stream: int = 0):
        self.seed = seed & MASK
        self.stream = stream
        self.i = 0

    def next_u64(self) -> int:
        x = draw(self.seed, self.stream, self.i)
        self.i += 1
        return x

    def randint(self, lo: int, hi: int) -> int:
        """Uniform on ``[lo, hi]`` (modulo bias below 2**-40 for small spans)."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next_u64() % (hi - lo + 1)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def fraction(self, lo: int, hi: int, den: int) -> Fraction:
        """Uniform on the grid ``{lo + k/den}`` inside ``[lo, hi]``."""
        return Fraction(self.randint(lo * den, hi * den), den)
