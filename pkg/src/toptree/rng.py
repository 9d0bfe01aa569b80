"""A small deterministic generator (xorshift64*) so workloads replay identically everywhere."""

from __future__ import annotations

from dataclasses import dataclass

MASK = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK
    return x ^ (x >> 31)


@dataclass
class XorShift64Star:
    state: int

    @classmethod
    def from_seed(cls, seed: int) -> "XorShift64Star":
        s = splitmix64(seed & MASK)
        return cls(s or 1)  # the all-zero state is a fixed point

    def next(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK
        x ^= x >> 27
        self.state = x
        return (x * _MULT) & MASK

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` (rejection sampling, no modulo bias)."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        limit = MASK + 1 - (MASK + 1) % n
        while True:
            r = self.next()
            if r < limit:
                return r % n

    def random(self) -> float:
        return (self.next() >> 11) * (1.0 / (1 << 53))

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
