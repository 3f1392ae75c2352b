"""Counter-based random streams.

Every random quantity in the package is a pure function of
``(seed, tag, index...)``: a key is derived by chained mixing and a uniform
is read off ``mix(key, counter)``.  No generator state is ever shared, so
results do not depend on iteration order or on how work is split across
threads.

The mixer is the splitmix64 finalizer.  All functions are numba-compiled so
the sampling and spreading kernels can call them inline.
"""
import numpy as np
from numba import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0

# purpose tags
COUNT = 1
POSITION = 2
WEIGHT = 3
EDGE = 4
GRID = 5
PUSHPULL = 6
START = 7
RPRIME = 8
COUPLE = 9
GRAPH = 10
TRIAL = 11
HARNESS = 12

MASK64 = (1 << 64) - 1


@njit(cache=True, nogil=True)
def mix64(z):
    z = np.uint64(z)
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def combine(key, x):
    """Derive a child key from ``key`` and a nonnegative integer ``x``."""
    return mix64(np.uint64(key) ^ mix64(np.uint64(x) + GOLDEN))


@njit(cache=True, nogil=True)
def u01(key, counter):
    """Uniform double in [0, 1) at position ``counter`` of stream ``key``."""
    z = mix64(combine(key, counter) + GOLDEN)
    return np.float64(z >> _S11) * _INV53


@njit(cache=True, nogil=True)
def uniform_block(key, start, count):
    out = np.empty(count, dtype=np.float64)
    for t in range(count):
        out[t] = u01(key, start + t)
    return out


@njit(cache=True, nogil=True)
def uniform_at(key, counters):
    out = np.empty(counters.shape[0], dtype=np.float64)
    for t in range(counters.shape[0]):
        out[t] = u01(key, counters[t])
    return out


@njit(cache=True, nogil=True)
def uniform_at2(key, first, second):
    """Uniforms of streams ``combine(key, first[t])`` at counters ``second[t]``."""
    out = np.empty(first.shape[0], dtype=np.float64)
    for t in range(first.shape[0]):
        out[t] = u01(combine(key, first[t]), second[t])
    return out


def stream_key(seed, *path):
    """Key for the stream addressed by ``seed`` followed by integer ``path``."""
    key = np.uint64(mix64(np.uint64(int(seed) & MASK64)))
    for p in path:
        key = np.uint64(combine(key, np.uint64(int(p) & MASK64)))
    return key


def derive_seed(seed, *path):
    """A fresh 63-bit seed derived from ``seed`` and ``path`` (for provenance columns)."""
    return int(stream_key(seed, *path)) >> 1
