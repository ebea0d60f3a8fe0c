"""Observables on ``M_Q^N``: the length operator, its projectors, expectations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol
from .ensembles import MessageMatrix
from .errors import ShapeMismatchError, ValidationError
from .mstate import ManyLetterState, SpaceShape, require_dense

__all__ = [
    "Observable",
    "LengthProjector",
    "length_operator",
    "length_projector",
    "expectation",
    "ensemble_average",
    "expected_length",
    "commutator_norm",
]


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian operator on ``M_Q^N``, stored either as a real diagonal or densely.

    Exactly one of ``diagonal`` (length D, real) and ``matrix`` (D x D,
    Hermitian) is set.  Diagonal observables have no dimension cap.
    """

    shape: SpaceShape
    diagonal: np.ndarray | None = field(default=None, repr=False)
    matrix: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if (self.diagonal is None) == (self.matrix is None):
            raise ValidationError("give exactly one of diagonal or matrix")
        D = self.shape.D
        if self.diagonal is not None:
            d = np.array(self.diagonal, dtype=float)
            if d.shape != (D,):
                raise ShapeMismatchError(f"diagonal of shape {d.shape} does not match D={D}")
            d.setflags(write=False)
            object.__setattr__(self, "diagonal", d)
        else:
            require_dense(self.shape)
            m = np.array(self.matrix, dtype=complex)
            if m.shape != (D, D):
                raise ShapeMismatchError(f"matrix of shape {m.shape} does not match D={D}")
            if np.max(np.abs(m - m.conj().T), initial=0.0) > tol.HERM:
                raise ValidationError("observable is not Hermitian")
            m.setflags(write=False)
            object.__setattr__(self, "matrix", m)

    @classmethod
    def from_dense(cls, shape: SpaceShape, matrix, hermitize: bool = False) -> Observable:
        """Dense observable; with ``hermitize`` small asymmetries (<= tol.HERM_INPUT) are averaged away."""
        m = np.asarray(matrix, dtype=complex)
        if hermitize:
            if m.ndim == 2 and m.shape[0] == m.shape[1]:
                asym = np.max(np.abs(m - m.conj().T), initial=0.0)
                if asym > tol.HERM_INPUT:
                    raise ValidationError(f"observable is not Hermitian (asymmetry {asym:.3g})")
                m = 0.5 * (m + m.conj().T)
        return cls(shape, matrix=m)

    @classmethod
    def identity(cls, shape: SpaceShape) -> Observable:
        return cls(shape, diagonal=np.ones(shape.D))

    @property
    def is_diagonal(self) -> bool:
        return self.diagonal is not None

    def to_dense(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        require_dense(self.shape)
        return np.diag(self.diagonal).astype(complex)

    def apply(self, state: ManyLetterState) -> ManyLetterState:
        """``A|phi>`` as an unnormalized state."""
        _same(self.shape, state.shape)
        if self.diagonal is not None:
            amps = {i: a * self.diagonal[i] for i, a in state.amplitudes.items()}
            return ManyLetterState(self.shape, amps, normalized=False)
        return ManyLetterState.from_vector(self.shape, self.matrix @ state.to_vector(), normalized=False)


def _same(a: SpaceShape, b: SpaceShape) -> None:
    if a != b:
        raise ShapeMismatchError(f"shapes {a} and {b} differ")


@dataclass(frozen=True)
class LengthProjector:
    """Projector onto the length-``n`` sector of ``M_Q^N``."""

    shape: SpaceShape
    n: int

    def __post_init__(self):
        if not 0 <= self.n <= self.shape.N:
            raise ValidationError(f"length {self.n} outside 0..{self.shape.N}")

    @property
    def sector(self) -> slice:
        return self.shape.sector(self.n)

    def trace(self) -> int:
        return self.shape.sector_dim(self.n)

    def to_observable(self) -> Observable:
        d = np.zeros(self.shape.D)
        d[self.sector] = 1.0
        return Observable(self.shape, diagonal=d)

    def apply(self, x):
        """Project a state (result unnormalized), a message matrix or a raw D x D array.

        Matrices come back as the raw array ``Pi_n X Pi_n``.
        """
        sl = self.sector
        if isinstance(x, ManyLetterState):
            _same(self.shape, x.shape)
            amps = {i: a for i, a in x.amplitudes.items() if sl.start <= i < sl.stop}
            return ManyLetterState(self.shape, amps, normalized=False)
        if isinstance(x, MessageMatrix):
            _same(self.shape, x.shape)
            x = x.matrix
        x = np.asarray(x)
        out = np.zeros_like(x, dtype=complex)
        out[sl, sl] = x[sl, sl]
        return out

    __call__ = apply


def length_operator(shape: SpaceShape) -> Observable:
    """Diagonal observable with value ``n`` on every length-``n`` basis string."""
    return Observable(shape, diagonal=shape.lengths.astype(float))


def length_projector(shape: SpaceShape, n: int) -> LengthProjector:
    return LengthProjector(shape, n)


def _real(z: complex, what: str) -> float:
    if abs(z.imag) > tol.IMAG:
        raise ValidationError(f"{what} has imaginary part {z.imag:.3g}; operator not Hermitian")
    return float(z.real)


def expectation(A: Observable, phi: ManyLetterState) -> float:
    """``<phi|A|phi>`` for a normalized state."""
    _same(A.shape, phi.shape)
    if A.diagonal is not None:
        return math.fsum(abs(a) ** 2 * A.diagonal[i] for i, a in phi.amplitudes.items())
    v = phi.to_vector()
    return _real(complex(np.vdot(v, A.matrix @ v)), "expectation")


def ensemble_average(A: Observable, sigma: MessageMatrix) -> float:
    """``Tr(sigma A)``."""
    _same(A.shape, sigma.shape)
    if A.diagonal is not None:
        return _real(complex(np.dot(sigma.matrix.diagonal(), A.diagonal)), "ensemble average")
    # Tr(sigma A) = sum_ij sigma_ij A_ji
    return _real(complex(np.sum(sigma.matrix * A.matrix.T)), "ensemble average")


def expected_length(x: ManyLetterState | MessageMatrix) -> float:
    """Mean of the length operator in a pure state or a message matrix."""
    L = length_operator(x.shape)
    if isinstance(x, ManyLetterState):
        return expectation(L, x)
    return ensemble_average(L, x)


def _dense(x) -> np.ndarray:
    if isinstance(x, Observable):
        return x.to_dense()
    if isinstance(x, MessageMatrix):
        return x.matrix
    if isinstance(x, LengthProjector):
        return x.to_observable().to_dense()
    return np.asarray(x, dtype=complex)


def commutator_norm(A, B) -> float:
    """Max-entry norm of ``AB - BA``.

    Accepts observables, projectors, message matrices or raw arrays.  When
    one side is diagonal the commutator is formed entrywise as
    ``(a_i - a_j) B_ij`` so no dense product is needed.
    """
    if isinstance(A, LengthProjector):
        A = A.to_observable()
    if isinstance(B, LengthProjector):
        B = B.to_observable()
    for x, y in ((A, B), (B, A)):
        if isinstance(x, Observable) and x.is_diagonal:
            if isinstance(y, (Observable, MessageMatrix)):
                _same(x.shape, y.shape)
            if isinstance(y, Observable) and y.is_diagonal:
                return 0.0
            d = x.diagonal
            return float(np.max(np.abs((d[:, None] - d[None, :]) * _dense(y)), initial=0.0))
    a, b = _dense(A), _dense(B)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"operator shapes {a.shape} and {b.shape} differ")
    return float(np.max(np.abs(a @ b - b @ a), initial=0.0))
