"""Deterministic counter-based pseudorandom streams.

Every draw is a pure function of (seed, counter slot): the generator is
splitmix64, whose k-th output from state s is mix(s + (k+1)*GOLDEN). Child
streams are derived from a master seed, a replication index, and a short
string tag, so replications can be computed in any order, split across
workers, and still reproduce bit-identically. Each simulated path assigns
its variables fixed counter slots; branches simply skip the slots they do
not consume, which keeps single-path and vectorized ensemble generation
identical.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

_U64_GOLDEN = np.uint64(GOLDEN)
_U64_MIX_A = np.uint64(_MIX_A)
_U64_MIX_B = np.uint64(_MIX_B)

# (raw >> 11) has 53 significant bits; +0.5 keeps the result in (0, 1).
_INV_2_53 = 2.0 ** -53


def splitmix64_mix(z: int) -> int:
    """The splitmix64 output mixer on a 64-bit state."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & MASK64
    return z ^ (z >> 31)


def splitmix64_at(state: int, k: int) -> int:
    """k-th output (0-based) of the splitmix64 stream seeded at `state`."""
    return splitmix64_mix((state + (k + 1) * GOLDEN) & MASK64)


def hash64(tag: str) -> int:
    """FNV-1a 64-bit hash of a short string tag."""
    h = 0xCBF29CE484222325
    for byte in tag.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & MASK64
    return h


def derive_seed(master: int, index: int, tag: str) -> int:
    """Child seed for (master, index, tag).

    The stream seeded at master XOR hash64(tag) is advanced index+1 times
    and the last output is the child seed. Distinct tags give unrelated
    streams; distinct indices give distinct seeds within a tag.
    """
    if index < 0:
        raise ValueError("index must be >= 0")
    return splitmix64_at((int(master) ^ hash64(tag)) & MASK64, int(index))


def _mix_u64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _U64_MIX_A
    z = (z ^ (z >> np.uint64(27))) * _U64_MIX_B
    return z ^ (z >> np.uint64(31))


def derive_seed_array(master: int, indices: np.ndarray, tag: str) -> np.ndarray:
    """Vectorized derive_seed over an array of replication indices."""
    base = np.uint64((int(master) ^ hash64(tag)) & MASK64)
    steps = (indices.astype(np.uint64) + np.uint64(1)) * _U64_GOLDEN
    return _mix_u64(base + steps)


def _raw_block(seeds: np.ndarray, slots: np.ndarray) -> np.ndarray:
    """Raw 64-bit outputs at the given counter slots, shape (len(seeds), len(slots))."""
    counters = seeds[:, None] + (slots.astype(np.uint64) + np.uint64(1)) * _U64_GOLDEN
    return _mix_u64(counters)


def _to_unit(raw: np.ndarray) -> np.ndarray:
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _INV_2_53


def uniform_block(seeds: np.ndarray, n_slots: int) -> np.ndarray:
    """Uniforms in (0,1) at slots 0..n_slots-1 for each seed; shape (R, n_slots)."""
    return _to_unit(_raw_block(seeds, np.arange(n_slots, dtype=np.uint64)))


def uniform_slot(seeds: np.ndarray, slot: int) -> np.ndarray:
    """Uniforms in (0,1) at one fixed slot for each seed; shape (R,)."""
    return _to_unit(_raw_block(seeds, np.array([slot], dtype=np.uint64)))[:, 0]


def sign_slot(seeds: np.ndarray, slot: int) -> np.ndarray:
    """Fair +-1.0 draws from the top bit of the slot's raw output."""
    raw = _raw_block(seeds, np.array([slot], dtype=np.uint64))[:, 0]
    return np.where((raw >> np.uint64(63)).astype(bool), 1.0, -1.0)
