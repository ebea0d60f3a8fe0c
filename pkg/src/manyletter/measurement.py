"""Length and basis-alphabet measurements, length dephasing, Monte Carlo statistics.

All sampling goes through :mod:`manyletter.rng`, so results depend only on
the input, the seed and the draw counters.  A single-shot measurement with
``seed`` uses draw counter 0, i.e. it reproduces the first trial of
:func:`sample_statistics` with the same seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import rng
from . import tolerances as tol
from .ensembles import MessageMatrix
from .errors import ValidationError
from .mstate import BasisString, ManyLetterState, basis_state, from_index

__all__ = [
    "MeasurementOutcome",
    "Histogram",
    "HistogramBin",
    "length_outcome_distribution",
    "basis_outcome_distribution",
    "measure_length",
    "measure_basis",
    "dephase_length",
    "sample_statistics",
    "format_label",
]

Input = Union[ManyLetterState, MessageMatrix]


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    """Outcome value (a length or a basis string), its probability and the post-measurement state."""

    value: int | BasisString
    probability: float
    post_state: Input


def _check_input(x: Input) -> None:
    if isinstance(x, ManyLetterState):
        if abs(x.norm_squared() - 1.0) > tol.NORM:
            raise ValidationError("measured state must be normalized")
    elif not isinstance(x, MessageMatrix):
        raise ValidationError(f"cannot measure a {type(x).__name__}")


def _length_probabilities(x: Input) -> np.ndarray:
    """Probability of every length ``0..N`` (zeros included)."""
    if isinstance(x, ManyLetterState):
        return x.sector_weights()
    d = x.diagonal()
    shape = x.shape
    return np.array([d[shape.sector(n)].sum() for n in range(shape.N + 1)])


def length_outcome_distribution(x: Input) -> list[tuple[int, float]]:
    """``(n, p_n)`` for every length with positive probability, ascending in ``n``."""
    _check_input(x)
    p = _length_probabilities(x)
    return [(n, float(pn)) for n, pn in enumerate(p) if pn > 0]


def basis_outcome_distribution(x: Input) -> list[tuple[int, float]]:
    """``(global index, probability)`` of every basis string with positive probability."""
    _check_input(x)
    if isinstance(x, ManyLetterState):
        return [(i, abs(a) ** 2) for i, a in x.amplitudes.items()]
    d = x.diagonal()
    return [(int(i), float(d[i])) for i in np.flatnonzero(d > 0)]


def _project_length(x: Input, n: int, pn: float) -> Input:
    sl = x.shape.sector(n)
    if isinstance(x, ManyLetterState):
        amps = {i: a for i, a in x.amplitudes.items() if sl.start <= i < sl.stop}
        return ManyLetterState(x.shape, amps, normalized=False).normalize()
    out = np.zeros_like(x.matrix)
    out[sl, sl] = x.matrix[sl, sl] / pn
    return MessageMatrix(x.shape, out)


def measure_length(x: Input, seed: int) -> MeasurementOutcome:
    """Measure the length operator; the post-state is the renormalized sector projection."""
    _check_input(x)
    p = _length_probabilities(x)
    n = int(rng.sample_indices(p, 1, seed)[0])
    assert p[n] > 0, "sampled a zero-probability sector"
    return MeasurementOutcome(n, float(p[n]), _project_length(x, n, p[n]))


def measure_basis(x: Input, seed: int) -> MeasurementOutcome:
    """Measure in the basis-string basis; the post-state is ``|a^n>``."""
    dist = basis_outcome_distribution(x)
    k = int(rng.sample_indices([p for _, p in dist], 1, seed)[0])
    index, p = dist[k]
    s = from_index(x.shape, index)
    return MeasurementOutcome(s, float(p), basis_state(x.shape, s))


def dephase_length(sigma: MessageMatrix) -> MessageMatrix:
    """``sum_n Pi_n sigma Pi_n``: drop every coherence between distinct lengths."""
    shape = sigma.shape
    out = np.zeros_like(sigma.matrix)
    for n in range(shape.N + 1):
        sl = shape.sector(n)
        out[sl, sl] = sigma.matrix[sl, sl]
    return MessageMatrix(shape, out)


def format_label(value: int | BasisString) -> str:
    if isinstance(value, tuple):
        return "(" + ",".join(str(d) for d in value) + ")"
    return str(value)


@dataclass(frozen=True)
class HistogramBin:
    value: int | BasisString
    probability: float
    count: int

    @property
    def label(self) -> str:
        return format_label(self.value)

    @property
    def length(self) -> int:
        return len(self.value) if isinstance(self.value, tuple) else self.value


@dataclass(frozen=True)
class Histogram:
    kind: str
    seed: int
    trials: int
    bins: tuple[HistogramBin, ...] = field(repr=False)

    def freq(self, value) -> float:
        for b in self.bins:
            if b.value == value:
                return b.count / self.trials
        return 0.0

    def counts(self) -> dict:
        return {b.value: b.count for b in self.bins}

    @property
    def mean_length(self) -> float:
        return math.fsum(b.count * b.length for b in self.bins) / self.trials

    @property
    def var_length(self) -> float:
        m = self.mean_length
        return math.fsum(b.count * (b.length - m) ** 2 for b in self.bins) / self.trials

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "outcomes": [
                {
                    "label": b.label,
                    "count": b.count,
                    "freq": b.count / self.trials,
                    "probability": b.probability,
                }
                for b in self.bins
            ],
            "mean_length": self.mean_length,
            "var_length": self.var_length,
            "seed": self.seed,
            "trials": self.trials,
        }


def sample_statistics(x: Input, trials: int, seed: int, kind: str = "length") -> Histogram:
    """Repeat a length or basis measurement ``trials`` times on fresh copies of ``x``.

    Trial ``t`` uses draw counter ``t``.  Every outcome with positive
    probability gets a bin, in enumeration order, even if it was never drawn.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    seed = rng.check_seed(seed)
    if kind == "length":
        _check_input(x)
        p = _length_probabilities(x)
        counts = rng.sample_counts(p, trials, seed)
        bins = tuple(
            HistogramBin(n, float(p[n]), int(counts[n])) for n in range(p.size) if p[n] > 0
        )
    elif kind == "basis":
        dist = basis_outcome_distribution(x)
        counts = rng.sample_counts([p for _, p in dist], trials, seed)
        bins = tuple(
            HistogramBin(from_index(x.shape, i), p, int(c)) for (i, p), c in zip(dist, counts)
        )
    else:
        raise ValidationError(f"unknown measurement kind {kind!r}; use 'length' or 'basis'")
    return Histogram(kind, seed, trials, bins)
