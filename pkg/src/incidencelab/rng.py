"""Seedable, portable randomness: SplitMix64 with documented substreams.

SplitMix64 output ``i`` (0-based) of a stream seeded with ``seed`` is a
pure function of the counter::

    out(seed, i) = mix64((seed + (i + 1) * GAMMA) mod 2**64)

so scalar and vectorized evaluation agree bit-exactly on every platform.

Stream splitting rule: substream ``s`` of a master seed is itself seeded
with ``out(master, s)``.  Consumers use fixed substream indices:

* axis ``i`` of a grid selection uses substream ``i`` (1-based);
* Monte Carlo trial ``t`` uses substream ``TRIAL_OFFSET + t``;
* projection retry ``r`` uses substream ``RETRY_OFFSET + r``;
* two-slit sampling uses substream ``SLIT_OFFSET + which``.

Selection against an exact rational probability ``p`` keeps draw ``u``
iff ``u / 2**64 < p``, i.e. ``u < ceil(p * 2**64)`` — no floating point.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

TRIAL_OFFSET = 1 << 32
RETRY_OFFSET = 1 << 33
SLIT_OFFSET = 1 << 34


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def splitmix64(seed: int, index: int) -> int:
    """Output ``index`` (0-based) of the SplitMix64 stream seeded with ``seed``."""
    if index < 0:
        raise ValueError("stream index must be nonnegative")
    return mix64((seed + (index + 1) * GAMMA) & MASK64)


def substream(seed: int, s: int) -> int:
    """Seed of substream ``s`` of the given master seed."""
    return splitmix64(seed, s)


def splitmix64_block(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs ``start .. start+count-1`` as a uint64 array (vectorized mix)."""
    with np.errstate(over="ignore"):
        idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        z = (np.uint64(seed & MASK64) + idx * np.uint64(GAMMA)).astype(np.uint64)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        return z ^ (z >> np.uint64(31))


def selection_threshold(p: Fraction) -> int:
    """Smallest t with u < t  <=>  u/2**64 < p, for 64-bit draws u."""
    if not 0 <= p <= 1:
        raise ValueError("probability must lie in [0, 1]")
    num, den = p.numerator << 64, p.denominator
    return -((-num) // den)  # ceil(num / den)


def integer_root(x: int, m: int) -> int:
    """floor(x ** (1/m)) for nonnegative integer x, by Newton iteration."""
    if x < 0 or m < 1:
        raise ValueError("integer_root needs x >= 0 and m >= 1")
    if x == 0:
        return 0
    r = 1 << (x.bit_length() // m + 1)
    while True:
        nxt = ((m - 1) * r + x // r ** (m - 1)) // m
        if nxt >= r:
            break
        r = nxt
    while r ** m > x:
        r -= 1
    return r


def default_selection_probability(k: int, n: int) -> Fraction:
    """Largest multiple of 2**-64 not exceeding min(1, 2 * n**(-2/(2k-1)))."""
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    m = 2 * k - 1
    t = integer_root((1 << (65 * m)) // (n * n), m)
    return Fraction(min(t, 1 << 64), 1 << 64)
