# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels; same contract as ``_kernels_py``."""

from libc.stdint cimport uint64_t, int64_t

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline Py_ssize_t _search(const double[::1] cdf, double u) nogil:
    # first i with cdf[i] > u, clamped to the last index
    cdef Py_ssize_t lo = 0, hi = cdf.shape[0] - 1, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    return lo


def mix64(uint64_t z):
    return _mix64(z)


def splitmix64(uint64_t seed, uint64_t k):
    return _mix64(seed + (k + 1) * GAMMA)


def uniform_at(uint64_t seed, uint64_t k):
    return (_mix64(seed + (k + 1) * GAMMA) >> 11) * TWO_M53


def fill_counts(uint64_t seed, uint64_t start, Py_ssize_t trials,
                const double[::1] cdf, int64_t[::1] counts):
    cdef uint64_t state = seed + (start + 1) * GAMMA
    cdef Py_ssize_t t
    cdef double u
    with nogil:
        for t in range(trials):
            u = (_mix64(state) >> 11) * TWO_M53
            counts[_search(cdf, u)] += 1
            state = state + GAMMA


def draw_indices(uint64_t seed, uint64_t start, Py_ssize_t trials,
                 const double[::1] cdf, int64_t[::1] out):
    cdef uint64_t state = seed + (start + 1) * GAMMA
    cdef Py_ssize_t t
    cdef double u
    with nogil:
        for t in range(trials):
            u = (_mix64(state) >> 11) * TWO_M53
            out[t] = _search(cdf, u)
            state = state + GAMMA
