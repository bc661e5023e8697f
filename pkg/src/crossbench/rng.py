"""Deterministic random primitives used for placement and seed derivation.

Role assignment must be reproducible from a single integer seed, independent
of Python's hash randomization or library version.  Everything here is built
on SplitMix64 (Steele, Lea & Flood's published 64-bit mixer), which is small
enough to restate in full:

    state  <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z      <- state
    z      <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z      <- (z XOR (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    output <- z XOR (z >> 31)

Bounded integers are drawn by rejection sampling (no modulo bias), and
shuffles are the classic descending Fisher-Yates swap.  Any implementation
that follows this file reproduces the same placements for the same seed.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")


def _mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential SplitMix64 stream seeded with a 64-bit integer."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix64(self._state)

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound) via rejection sampling."""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        # Largest multiple of `bound` that fits in 64 bits; values at or
        # above it would bias the low residues, so they are redrawn.
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle (descending index order)."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def shuffled(self, items: Sequence[T]) -> list[T]:
        out = list(items)
        self.shuffle(out)
        return out

    def choice(self, items: Sequence[T]) -> T:
        if not items:
            raise ValueError("cannot choose from an empty sequence")
        return items[self.randbelow(len(items))]


def derive_seed(master: int, *parts: int) -> int:
    """Mix a master seed with integer labels into a new 64-bit seed.

    Used to give every (spectator, driver) pair and every sampler stream its
    own independent seed.  Labels are folded in one at a time, so appending
    new gates (new labels) never perturbs seeds derived for existing ones.
    """
    acc = _mix64(master & _MASK64)
    for part in parts:
        acc = _mix64((acc ^ _mix64(part & _MASK64)) + _GAMMA & _MASK64)
    return acc


def fnv1a64(text: str) -> int:
    """FNV-1a hash of a string; stable across runs unlike builtin hash()."""
    acc = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        acc = (acc ^ byte) * 0x100000001B3 & _MASK64
    return acc
