"""Splittable deterministic random streams.

Every stochastic step in the pipeline (pixel subsampling, k-means seeding,
Gibbs initialization and sweeps) draws from a splitmix64 stream keyed off a
single user seed.  Streams for independent units of work (one per document,
one per restart, ...) are derived by hashing the seed together with a string
key path, so results do not depend on processing order and are reproducible
bit for bit for a given seed.
"""

import hashlib

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns (new_state, output word)."""
    state = (state + _GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return state, z ^ (z >> 31)


def derive(seed: int, *keys) -> int:
    """Derive a 64-bit child seed from a parent seed and a key path.

    Keys may be ints or strings; the same path always yields the same child,
    and distinct paths are independent for practical purposes.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update((seed & MASK64).to_bytes(8, "little"))
    for k in keys:
        part = str(k).encode("utf-8")
        h.update(len(part).to_bytes(4, "little"))
        h.update(part)
    return int.from_bytes(h.digest(), "little")


class Stream:
    """Sequential splitmix64 generator over a derived seed."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state, z = mix64(self.state)
        return z

    def uniform(self) -> float:
        """Uniform float64 in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("randint bound must be positive")
        return (self.next_u64() * n) >> 64

    def shuffle_prefix(self, n: int, k: int) -> list[int]:
        """First k entries of a Fisher-Yates shuffle of range(n).

        Used for uniform subsampling without materializing a full shuffle
        beyond the index array.
        """
        idx = list(range(n))
        k = min(k, n)
        for i in range(k):
            j = i + self.randint(n - i)
            idx[i], idx[j] = idx[j], idx[i]
        return idx[:k]
