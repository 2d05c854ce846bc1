"""Counter-based random numbers.

Draw ``j`` of stream ``seed`` is ``mix64(seed + (j + 1) * GOLDEN)`` where
``mix64`` is the SplitMix64 finalizer, a bijection on 64-bit words. Any draw
can be computed without touching the ones before it, so batches can be split
across workers in any order and still agree bit for bit.
"""
from __future__ import annotations

import numpy as np
from scipy.special import ndtri

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
# separate odd increment for child-seed derivation
CHILD_STEP = np.uint64(0xD1B54A32D192ED03)
_MASTER_SALT = np.uint64(0x243F6A8885A308D3)

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31 = np.uint64(30), np.uint64(27), np.uint64(31)

U64_MAX = 2**64 - 1


def mix64(x):
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = (x ^ (x >> _S30)) * _M1
        x = (x ^ (x >> _S27)) * _M2
    return x ^ (x >> _S31)


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= U64_MAX:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def child_seeds(master_seed: int, indices) -> np.ndarray:
    """Seeds for items ``indices`` of a batch; distinct for distinct indices."""
    base = mix64(np.uint64(check_seed(master_seed)) ^ _MASTER_SALT)
    idx = np.asarray(indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(base + (idx + np.uint64(1)) * CHILD_STEP)


def child_seed(master_seed: int, index: int) -> int:
    return int(child_seeds(master_seed, [index])[0])


def raw_bits(seeds, slot: int) -> np.ndarray:
    seeds = np.asarray(seeds, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(seeds + np.uint64(slot + 1) * GOLDEN)


def uniforms(seeds, slot: int) -> np.ndarray:
    """Uniforms on the open interval (0, 1), 53 bits each."""
    bits = raw_bits(seeds, slot) >> np.uint64(11)
    return (bits.astype(np.float64) + 0.5) * 2.0**-53


def normals(seeds, slot: int) -> np.ndarray:
    return ndtri(uniforms(seeds, slot))
