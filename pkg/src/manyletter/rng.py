"""Portable counter-based random numbers and inverse-CDF sampling.

Draw number ``k`` (0-based) under a 64-bit ``seed`` is::

    z = (seed + (k + 1) * 0x9E3779B97F4A7C15) mod 2**64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    z = z ^ (z >> 31)
    u = (z >> 11) * 2**-53                       # uniform in [0, 1)

which is exactly the ``k``-th output of SplitMix64 started from ``seed``.
Because every draw depends only on ``(seed, k)``, any split of the trial
range ``0..T-1`` into chunks yields the same outcomes, whatever the number
of workers.  An outcome is chosen by inverse CDF: with ``cdf`` the running
sum of the outcome probabilities in enumeration order, the outcome is the
first ``i`` with ``cdf[i] > u`` (the last outcome if there is none).

The compiled kernel (``_kernels``) is used when it was built; otherwise the
pure-Python ``_kernels_py`` is used.  Setting ``MANYLETTER_PURE_PYTHON=1``
forces the fallback.  Both produce bit-identical results.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py
from .errors import ValidationError

if os.environ.get("MANYLETTER_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

MAX_SEED = 2**64 - 1

__all__ = ["BACKEND", "check_seed", "uniform", "cdf_of", "sample_counts", "sample_indices"]


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def uniform(seed: int, k: int, backend=None) -> float:
    """Uniform variate number ``k`` of the stream ``seed``."""
    return (backend or _impl).uniform_at(check_seed(seed), int(k))


def cdf_of(probabilities) -> np.ndarray:
    """Running sum of ``probabilities``, cut after the last positive entry."""
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValidationError("need a nonempty 1-d probability vector")
    if np.any(p < 0):
        raise ValidationError("negative outcome probability")
    pos = np.flatnonzero(p > 0)
    if pos.size == 0:
        raise ValidationError("all outcome probabilities are zero")
    return np.ascontiguousarray(np.cumsum(p[: pos[-1] + 1]))


def sample_counts(probabilities, trials: int, seed: int, start: int = 0, backend=None) -> np.ndarray:
    """Histogram of ``trials`` draws over the outcomes of ``probabilities``.

    Uses draw counters ``start .. start + trials - 1``.
    """
    if trials < 0:
        raise ValidationError("trials must be nonnegative")
    p = np.asarray(probabilities, dtype=float)
    cdf = cdf_of(p)
    counts = np.zeros(cdf.size, dtype=np.int64)
    (backend or _impl).fill_counts(check_seed(seed), int(start), int(trials), cdf, counts)
    out = np.zeros(p.size, dtype=np.int64)
    out[: counts.size] = counts
    return out


def sample_indices(probabilities, trials: int, seed: int, start: int = 0, backend=None) -> np.ndarray:
    """Outcome index of each of ``trials`` draws."""
    if trials < 0:
        raise ValidationError("trials must be nonnegative")
    cdf = cdf_of(probabilities)
    out = np.zeros(int(trials), dtype=np.int64)
    (backend or _impl).draw_indices(check_seed(seed), int(start), int(trials), cdf, out)
    return out
