"""Pure-Python sampling kernels; reference implementation of ``_kernels.pyx``."""

from bisect import bisect_right

GAMMA = 0x9E3779B97F4A7C15
MASK = (1 << 64) - 1
TWO_M53 = 2.0**-53


def mix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def splitmix64(seed, k):
    """``k``-th output (0-based) of the SplitMix64 stream seeded with ``seed``."""
    return mix64((seed + (k + 1) * GAMMA) & MASK)


def uniform_at(seed, k):
    return (splitmix64(seed, k) >> 11) * TWO_M53


def fill_counts(seed, start, trials, cdf, counts):
    """Add ``trials`` inverse-CDF draws (counters ``start..start+trials-1``) to ``counts``."""
    cdf = list(cdf)
    last = len(cdf) - 1
    state = (seed + (start + 1) * GAMMA) & MASK
    for _ in range(trials):
        u = (mix64(state) >> 11) * TWO_M53
        i = bisect_right(cdf, u)
        counts[i if i < last else last] += 1
        state = (state + GAMMA) & MASK


def draw_indices(seed, start, trials, cdf, out):
    """Like :func:`fill_counts` but records each drawn outcome index in ``out``."""
    cdf = list(cdf)
    last = len(cdf) - 1
    state = (seed + (start + 1) * GAMMA) & MASK
    for t in range(trials):
        u = (mix64(state) >> 11) * TWO_M53
        i = bisect_right(cdf, u)
        out[t] = i if i < last else last
        state = (state + GAMMA) & MASK
