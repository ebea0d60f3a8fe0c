"""States of the truncated many-letter space.

The truncated space is the direct sum of the block spaces of lengths
``0..N`` over a basis alphabet of size ``K``.  Basis strings are plain tuples
of digits in ``[0, K)``; the empty tuple is the empty message.  Every basis
string of length ``<= N`` has a global index::

    global_index(s) = offset(len(s)) + value(s)
    offset(n)       = K**0 + ... + K**(n-1)

where ``value`` reads the digits as a big-endian base-``K`` number.  The
global index orders strings by length first and by value second, and it is
the key used for sparse amplitude storage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Iterator, Sequence

import numpy as np

from . import tolerances as tol
from .errors import CapacityError, ShapeMismatchError, ValidationError, ZeroNormError

if TYPE_CHECKING:
    from .letterspace import QuantumAlphabet

BasisString = tuple[int, ...]

__all__ = [
    "BasisString",
    "SpaceShape",
    "ManyLetterState",
    "global_index",
    "from_index",
    "basis_strings",
    "basis_state",
    "product_message",
    "superpose",
    "inner_product",
    "wave_component",
    "truncate",
    "require_dense",
]


@dataclass(frozen=True)
class SpaceShape:
    """Shape of ``M_Q^N``: basis alphabet size ``K`` and maximum length ``N``."""

    K: int
    N: int

    def __post_init__(self):
        if not isinstance(self.K, (int, np.integer)) or self.K < 1:
            raise ValidationError(f"basis size K must be a positive integer, got {self.K!r}")
        if not isinstance(self.N, (int, np.integer)) or self.N < 0:
            raise ValidationError(f"max length N must be a nonnegative integer, got {self.N!r}")

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        # offsets[n] is the global index of the first length-n string; offsets[N+1] == D
        out = [0]
        for n in range(self.N + 1):
            out.append(out[-1] + self.K**n)
        return tuple(out)

    @property
    def D(self) -> int:
        return self.offsets[-1]

    def offset(self, n: int) -> int:
        return self.offsets[n]

    def sector_dim(self, n: int) -> int:
        return self.K**n

    def sector(self, n: int) -> slice:
        """Slice of global indices holding the length-``n`` sector."""
        if not 0 <= n <= self.N:
            raise ValidationError(f"length {n} outside 0..{self.N}")
        return slice(self.offsets[n], self.offsets[n + 1])

    @cached_property
    def lengths(self) -> np.ndarray:
        """Length of the basis string at every global index (int array of size D)."""
        out = np.empty(self.D, dtype=np.int64)
        for n in range(self.N + 1):
            out[self.offsets[n]:self.offsets[n + 1]] = n
        return out

    def length_of(self, index: int) -> int:
        if not 0 <= index < self.D:
            raise ValidationError(f"index {index} outside [0, {self.D})")
        # offsets is sorted; bisect would do too but N is tiny
        n = 0
        while self.offsets[n + 1] <= index:
            n += 1
        return n

    def embed(self, N: int) -> SpaceShape:
        return SpaceShape(self.K, N)


def _check_digits(shape: SpaceShape, s: Sequence[int]) -> None:
    if len(s) > shape.N:
        raise ValidationError(f"string of length {len(s)} exceeds max length {shape.N}")
    for d in s:
        if not 0 <= d < shape.K:
            raise ValidationError(f"digit {d} outside [0, {shape.K})")


def global_index(shape: SpaceShape, s: Sequence[int]) -> int:
    """Global index of basis string ``s``."""
    _check_digits(shape, s)
    value = 0
    for d in s:
        value = value * shape.K + int(d)
    return shape.offsets[len(s)] + value


def from_index(shape: SpaceShape, index: int) -> BasisString:
    """Inverse of :func:`global_index`."""
    if not 0 <= index < shape.D:
        raise ValidationError(f"index {index} outside [0, {shape.D})")
    n = shape.length_of(index)
    value = index - shape.offsets[n]
    digits = [0] * n
    for pos in range(n - 1, -1, -1):
        value, digits[pos] = divmod(value, shape.K)
    return tuple(digits)


def basis_strings(shape: SpaceShape) -> Iterator[BasisString]:
    """All basis strings in enumeration order."""
    for i in range(shape.D):
        yield from_index(shape, i)


def _clean(amplitudes: dict[int, complex]) -> dict[int, complex]:
    return {i: complex(a) for i, a in sorted(amplitudes.items()) if abs(a) > tol.AMP}


@dataclass(frozen=True, eq=False)
class ManyLetterState:
    """Sparse state vector on ``M_Q^N``.

    ``amplitudes`` maps global indices to complex amplitudes; entries with
    modulus ``<= tol.AMP`` are never stored.  States are normalized unless
    ``normalized`` is False, which marks an intermediate result such as a
    projected but not rescaled vector.
    """

    shape: SpaceShape
    amplitudes: dict[int, complex] = field(repr=False)
    normalized: bool = True

    def __post_init__(self):
        amps = _clean(self.amplitudes)
        for i in amps:
            if not 0 <= i < self.shape.D:
                raise ValidationError(f"index {i} outside [0, {self.shape.D})")
        object.__setattr__(self, "amplitudes", amps)
        if self.normalized and abs(self.norm_squared() - 1.0) > tol.NORM:
            raise ValidationError(
                f"state is flagged normalized but has squared norm {self.norm_squared():.17g}"
            )

    @classmethod
    def from_terms(
        cls,
        shape: SpaceShape,
        terms: Iterable[tuple[Sequence[int], complex]],
        normalize: bool = False,
    ) -> ManyLetterState:
        """Build a state from ``(digits, amplitude)`` pairs; repeated strings add up."""
        amps: dict[int, complex] = {}
        for digits, amp in terms:
            i = global_index(shape, tuple(digits))
            amps[i] = amps.get(i, 0j) + complex(amp)
        state = cls(shape, amps, normalized=False)
        return state.normalize() if normalize else state.assert_normalized()

    @classmethod
    def from_vector(cls, shape: SpaceShape, vector, normalized: bool = True) -> ManyLetterState:
        vector = np.asarray(vector, dtype=complex)
        if vector.shape != (shape.D,):
            raise ShapeMismatchError(f"vector of shape {vector.shape} does not match D={shape.D}")
        nz = np.flatnonzero(np.abs(vector) > tol.AMP)
        return cls(shape, {int(i): complex(vector[i]) for i in nz}, normalized=normalized)

    def to_vector(self) -> np.ndarray:
        out = np.zeros(self.shape.D, dtype=complex)
        for i, a in self.amplitudes.items():
            out[i] = a
        return out

    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self.amplitudes.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def normalize(self) -> ManyLetterState:
        nrm = self.norm()
        if nrm <= tol.AMP:
            raise ZeroNormError("cannot normalize a zero-norm state")
        return ManyLetterState(
            self.shape, {i: a / nrm for i, a in self.amplitudes.items()}, normalized=True
        )

    def assert_normalized(self) -> ManyLetterState:
        if abs(self.norm_squared() - 1.0) > tol.NORM:
            raise ValidationError(f"state has squared norm {self.norm_squared():.17g}, expected 1")
        return ManyLetterState(self.shape, self.amplitudes, normalized=True)

    def items(self) -> Iterator[tuple[BasisString, complex]]:
        """``(digits, amplitude)`` pairs in enumeration order."""
        for i, a in self.amplitudes.items():
            yield from_index(self.shape, i), a

    def lengths(self) -> set[int]:
        return {self.shape.length_of(i) for i in self.amplitudes}

    def definite_length(self) -> int | None:
        """The length if the state lives in a single sector, else None."""
        ls = self.lengths()
        return ls.pop() if len(ls) == 1 else None

    def sector_weights(self) -> np.ndarray:
        """Squared norm of the component in each sector ``0..N``."""
        w = np.zeros(self.shape.N + 1)
        for i, a in self.amplitudes.items():
            w[self.shape.length_of(i)] += abs(a) ** 2
        return w

    def embed(self, N: int) -> ManyLetterState:
        """Same vector viewed in ``M_Q^N`` for a different maximum length."""
        new = self.shape.embed(N)
        amps = {}
        for i, a in self.amplitudes.items():
            s = from_index(self.shape, i)
            amps[global_index(new, s)] = a
        return ManyLetterState(new, amps, normalized=self.normalized)

    def __repr__(self):
        terms = ", ".join(f"{s}: {a:.6g}" for s, a in self.items())
        return f"ManyLetterState(K={self.shape.K}, N={self.shape.N}, {{{terms}}})"


def basis_state(shape: SpaceShape, s: Sequence[int]) -> ManyLetterState:
    """The basis string ``|s>`` as a normalized state."""
    return ManyLetterState(shape, {global_index(shape, tuple(s)): 1.0})


def product_message(
    alphabet: QuantumAlphabet,
    letter_indices: Sequence[int],
    max_length: int | None = None,
) -> ManyLetterState:
    """Quantum string ``|x_1 ... x_n>`` in basis-alphabet coordinates.

    ``max_length`` defaults to ``tol.DEFAULT_MAX_LENGTH`` (raised to ``n``
    if the string is longer).
    """
    n = len(letter_indices)
    if max_length is None:
        max_length = max(tol.DEFAULT_MAX_LENGTH, n)
    shape = SpaceShape(alphabet.rank, max_length)
    if n > shape.N:
        raise ValidationError(f"message of length {n} exceeds max length {shape.N}")
    vec = np.ones(1, dtype=complex)
    for x in letter_indices:
        vec = np.kron(vec, alphabet.expand_letter(x))
    base = shape.offset(n)
    nz = np.flatnonzero(np.abs(vec) > tol.AMP)
    state = ManyLetterState(shape, {base + int(i): vec[i] for i in nz}, normalized=False)
    return state.assert_normalized()


def _check_same_shape(*states: ManyLetterState) -> SpaceShape:
    shape = states[0].shape
    for st in states[1:]:
        if st.shape != shape:
            raise ShapeMismatchError(f"shape {st.shape} does not match {shape}")
    return shape


def superpose(
    terms: Sequence[tuple[complex, ManyLetterState]], normalize: bool = True
) -> ManyLetterState:
    """Complex linear combination of states sharing one shape.

    With ``normalize=False`` the result is returned as a flagged
    unnormalized intermediate.
    """
    if not terms:
        raise ValidationError("superpose needs at least one term")
    shape = _check_same_shape(*(st for _, st in terms))
    amps: dict[int, complex] = {}
    for c, st in terms:
        for i, a in st.amplitudes.items():
            amps[i] = amps.get(i, 0j) + complex(c) * a
    out = ManyLetterState(shape, amps, normalized=False)
    return out.normalize() if normalize else out


def inner_product(psi: ManyLetterState, phi: ManyLetterState) -> complex:
    """``<psi|phi>``, antilinear in the first argument."""
    _check_same_shape(psi, phi)
    small, large = (psi, phi) if len(psi.amplitudes) <= len(phi.amplitudes) else (phi, psi)
    total = 0j
    for i in small.amplitudes:
        if i in large.amplitudes:
            total += psi.amplitudes[i].conjugate() * phi.amplitudes[i]
    return total


def wave_component(phi: ManyLetterState, s: Sequence[int]) -> complex:
    """Amplitude ``<s|phi>`` of basis string ``s``."""
    return phi.amplitudes.get(global_index(phi.shape, tuple(s)), 0j)


def truncate(phi: ManyLetterState, max_length: int) -> tuple[ManyLetterState, float]:
    """Project onto strings of length ``<= max_length`` and renormalize.

    Returns the truncated state (living in ``M_Q^max_length``) and the
    discarded squared weight.  Raises :class:`ZeroNormError` when nothing
    survives.
    """
    if max_length < 0:
        raise ValidationError("max_length must be nonnegative")
    new = phi.shape.embed(max_length)
    kept = {}
    for i, a in phi.amplitudes.items():
        s = from_index(phi.shape, i)
        if len(s) <= max_length:
            kept[global_index(new, s)] = a
    kept_weight = math.fsum(abs(a) ** 2 for a in kept.values())
    discarded = max(0.0, phi.norm_squared() - kept_weight)
    if kept_weight <= tol.AMP**2:
        err = ZeroNormError(f"truncation to length {max_length} discards all weight")
        err.discarded = discarded
        raise err
    return ManyLetterState(new, kept, normalized=False).normalize(), discarded


def require_dense(shape: SpaceShape) -> None:
    """Refuse dense D x D work above ``tol.DENSE_CAP``."""
    if shape.D > tol.DENSE_CAP:
        raise CapacityError(
            f"dense operator of dimension {shape.D} (K={shape.K}, N={shape.N}) "
            f"exceeds cap {tol.DENSE_CAP}"
        )
