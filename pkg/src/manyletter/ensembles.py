"""Message ensembles, message matrices and their length-sector structure."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import tolerances as tol
from .errors import ShapeMismatchError, ValidationError
from .letterspace import LetterMatrix, QuantumAlphabet, letter_matrix, orthonormalize
from .mstate import ManyLetterState, SpaceShape, product_message, require_dense

__all__ = [
    "Ensemble",
    "MessageMatrix",
    "BlockDecomposition",
    "Equivalence",
    "kron_power",
    "embed_block",
    "message_matrix",
    "spectral_decomposition",
    "eigen_ensemble",
    "product_ensemble_matrix",
    "canonical_matrix",
    "grand_canonical_matrix",
    "grand_canonical_ensemble",
    "block_diagonalize",
    "ensembles_equivalent",
    "source_rank",
]


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Finite list of ``(state, probability)`` pairs on one shape."""

    entries: tuple[tuple[ManyLetterState, float], ...]

    def __post_init__(self):
        entries = tuple((st, float(p)) for st, p in self.entries)
        if not entries:
            raise ValidationError("an ensemble needs at least one entry")
        shape = entries[0][0].shape
        for st, p in entries:
            if st.shape != shape:
                raise ShapeMismatchError(f"entry shape {st.shape} does not match {shape}")
            if not p > 0:
                raise ValidationError(f"ensemble probabilities must be positive, got {p}")
            if abs(st.norm_squared() - 1.0) > tol.NORM:
                raise ValidationError("ensemble states must be normalized")
        total = math.fsum(p for _, p in entries)
        if abs(total - 1.0) > tol.PROB:
            raise ValidationError(f"ensemble probabilities sum to {total:.17g}")
        object.__setattr__(self, "entries", entries)

    @property
    def shape(self) -> SpaceShape:
        return self.entries[0][0].shape

    @property
    def states(self) -> list[ManyLetterState]:
        return [st for st, _ in self.entries]

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for _, p in self.entries])

    def __len__(self):
        return len(self.entries)


def _cross_block_max(shape: SpaceShape, m: np.ndarray) -> float:
    lengths = shape.lengths
    off = lengths[:, None] != lengths[None, :]
    return float(np.max(np.abs(m[off]), initial=0.0))


@dataclass(frozen=True, eq=False)
class MessageMatrix:
    """Dense density operator on ``M_Q^N``.

    ``block_diagonal`` is derived: True when every coherence between
    distinct lengths is ``<= tol.BLOCK``.
    """

    shape: SpaceShape
    matrix: np.ndarray = field(repr=False)
    block_diagonal: bool = field(init=False)

    def __post_init__(self):
        require_dense(self.shape)
        m = np.array(self.matrix, dtype=complex)
        D = self.shape.D
        if m.shape != (D, D):
            raise ShapeMismatchError(f"matrix of shape {m.shape} does not match D={D}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > tol.HERM:
            raise ValidationError("message matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > tol.TRACE:
            raise ValidationError(f"message matrix has trace {tr.real:.17g}")
        if np.linalg.eigvalsh(m)[0] < -tol.PSD:
            raise ValidationError("message matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "block_diagonal", _cross_block_max(self.shape, m) <= tol.BLOCK)

    @classmethod
    def pure(cls, state: ManyLetterState) -> MessageMatrix:
        v = state.to_vector()
        return cls(state.shape, np.outer(v, v.conj()))

    def diagonal(self) -> np.ndarray:
        """Real diagonal ``<s|sigma|s>`` in enumeration order."""
        return self.matrix.diagonal().real.copy()


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def kron_power(m: np.ndarray, n: int) -> np.ndarray:
    """``m`` tensored with itself ``n`` times; ``n = 0`` gives ``[[1]]``."""
    out = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        out = np.kron(out, m)
    return out


def embed_block(shape: SpaceShape, n: int, block: np.ndarray) -> np.ndarray:
    """Place a ``K^n x K^n`` block on the length-``n`` sector of a zero D x D matrix."""
    require_dense(shape)
    sl = shape.sector(n)
    k = shape.sector_dim(n)
    if block.shape != (k, k):
        raise ShapeMismatchError(f"block of shape {block.shape} does not fit sector {n} ({k}x{k})")
    out = np.zeros((shape.D, shape.D), dtype=complex)
    out[sl, sl] = block
    return out


def message_matrix(ensemble: Ensemble) -> MessageMatrix:
    """``sigma = sum_phi p(phi) |phi><phi|``."""
    shape = ensemble.shape
    require_dense(shape)
    V = np.array([st.to_vector() for st in ensemble.states])
    p = ensemble.probabilities
    sigma = (V.T * p) @ V.conj()
    return MessageMatrix(shape, _hermitize(sigma))


def spectral_decomposition(sigma: MessageMatrix) -> list[tuple[float, ManyLetterState]]:
    """Eigenpairs ``(q_i, |e_i>)`` with ``q_i > tol.EIG``, eigenvalues descending."""
    w, v = np.linalg.eigh(sigma.matrix)
    order = np.argsort(-w, kind="stable")
    out = []
    for k in order:
        if w[k] <= tol.EIG:
            break
        state = ManyLetterState.from_vector(sigma.shape, v[:, k], normalized=False)
        out.append((float(w[k]), state.normalize()))
    return out


def eigen_ensemble(sigma: MessageMatrix) -> Ensemble:
    """The ensemble of eigenstates of ``sigma`` weighted by eigenvalue."""
    pairs = spectral_decomposition(sigma)
    return Ensemble(tuple((st, q) for q, st in pairs))


def product_ensemble_matrix(
    alphabet: QuantumAlphabet, joint, max_length: int | None = None
) -> tuple[MessageMatrix, list[LetterMatrix]]:
    """Message matrix of product messages drawn from a joint letter distribution.

    ``joint`` is an ``N``-dimensional table with ``joint[x_1, ..., x_N] =
    p(x_1 ... x_N)``.  Returns ``sigma`` (placed on the length-``N`` sector)
    and the single-letter matrices of the marginal distributions.
    """
    joint = np.asarray(joint, dtype=float)
    N = joint.ndim
    Q = alphabet.size
    if joint.shape != (Q,) * N:
        raise ValidationError(f"joint table shape {joint.shape} does not match ({Q},)*{N}")
    if np.any(joint < 0):
        raise ValidationError("joint table has negative entries")
    if abs(joint.sum() - 1.0) > tol.PROB:
        raise ValidationError(f"joint table sums to {joint.sum():.17g}")
    shape = SpaceShape(alphabet.rank, N if max_length is None else max_length)
    if N > shape.N:
        raise ValidationError(f"block length {N} exceeds max length {shape.N}")
    require_dense(shape)

    k = alphabet.rank**N
    block = np.zeros((k, k), dtype=complex)
    for xs in itertools.product(range(Q), repeat=N):
        p = joint[xs]
        if p == 0:
            continue
        v = np.ones(1, dtype=complex)
        for x in xs:
            v = np.kron(v, alphabet.coords[x])
        block += p * np.outer(v, v.conj())
    sigma = MessageMatrix(shape, embed_block(shape, N, _hermitize(block)))

    marginals = []
    for pos in range(N):
        others = tuple(a for a in range(N) if a != pos)
        marginals.append(letter_matrix(alphabet, joint.sum(axis=others)))
    return sigma, marginals


def canonical_matrix(rho: LetterMatrix, n: int, max_length: int | None = None) -> MessageMatrix:
    """``rho`` tensored ``n`` times, on the length-``n`` sector of ``M_Q^max_length``."""
    if n < 0:
        raise ValidationError("block length must be nonnegative")
    shape = SpaceShape(rho.dim, n if max_length is None else max_length)
    if n > shape.N:
        raise ValidationError(f"block length {n} exceeds max length {shape.N}")
    require_dense(shape)
    return MessageMatrix(shape, embed_block(shape, n, kron_power(rho.matrix, n)))


def grand_canonical_matrix(rho: LetterMatrix, lambdas) -> MessageMatrix:
    """``sigma = sum_n lambda_n rho^(tensor n)`` for lengths ``n = 0..len(lambdas)-1``."""
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    if lam.size == 0:
        raise ValidationError("length distribution is empty")
    if np.any(lam < 0):
        raise ValidationError("length probabilities must be nonnegative")
    if abs(lam.sum() - 1.0) > tol.PROB:
        raise ValidationError(f"length probabilities sum to {lam.sum():.17g}")
    shape = SpaceShape(rho.dim, lam.size - 1)
    require_dense(shape)
    sigma = np.zeros((shape.D, shape.D), dtype=complex)
    block = np.ones((1, 1), dtype=complex)
    for n, ln in enumerate(lam):
        if n:
            block = np.kron(block, rho.matrix)
        sl = shape.sector(n)
        sigma[sl, sl] = ln * block
    return MessageMatrix(shape, sigma)


def grand_canonical_ensemble(alphabet: QuantumAlphabet, priors, lambdas) -> Ensemble:
    """Explicit ensemble of product messages with ``p(x^n) = lambda_n p(x_1)...p(x_n)``.

    Its message matrix is ``grand_canonical_matrix(letter_matrix(alphabet,
    priors), lambdas)``.  The ensemble has ``sum_n |Q|^n`` entries at most,
    so it is meant for small alphabets and lengths.
    """
    letter_matrix(alphabet, priors)  # validates priors
    p = np.asarray(priors, dtype=float).reshape(-1)
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    if lam.size == 0 or np.any(lam < 0) or abs(lam.sum() - 1.0) > tol.PROB:
        raise ValidationError("length probabilities must be nonnegative and sum to 1")
    N = lam.size - 1
    entries = []
    for n, ln in enumerate(lam):
        if ln == 0:
            continue
        for xs in itertools.product(range(alphabet.size), repeat=n):
            w = ln * math.prod(p[x] for x in xs)
            if w > 0:
                entries.append((product_message(alphabet, xs, max_length=N), w))
    return Ensemble(tuple(entries))


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """Length probabilities, normalized sector blocks and off-block residual.

    ``blocks[n]`` is the ``K^n x K^n`` matrix ``Pi_n sigma Pi_n / lambda_n``
    in sector-local coordinates, present only when ``lambda_n > tol.PROB``.
    """

    shape: SpaceShape
    lambdas: np.ndarray
    blocks: dict[int, np.ndarray]
    residual: float

    @property
    def exact(self) -> bool:
        return self.residual <= tol.BLOCK

    def block(self, n: int) -> np.ndarray:
        return self.blocks[n]

    def embedded(self, n: int) -> np.ndarray:
        return embed_block(self.shape, n, self.blocks[n])


def block_diagonalize(sigma: MessageMatrix) -> BlockDecomposition:
    """Split ``sigma`` into ``sum_n lambda_n sigma_n`` plus an off-block residual.

    ``lambda_n = Tr(Pi_n sigma Pi_n)`` and ``residual`` is the Frobenius norm
    of everything outside the diagonal length blocks.
    """
    shape = sigma.shape
    m = sigma.matrix
    lambdas = np.zeros(shape.N + 1)
    blocks = {}
    for n in range(shape.N + 1):
        sl = shape.sector(n)
        b = m[sl, sl]
        lambdas[n] = np.trace(b).real
        if lambdas[n] > tol.PROB:
            blocks[n] = b / lambdas[n]
    lengths = shape.lengths
    off = lengths[:, None] != lengths[None, :]
    residual = float(np.linalg.norm(m[off]))
    return BlockDecomposition(shape, lambdas, blocks, residual)


class Equivalence(NamedTuple):
    equivalent: bool
    distance: float


def _as_matrix(x: Ensemble | MessageMatrix) -> MessageMatrix:
    return x if isinstance(x, MessageMatrix) else message_matrix(x)


def ensembles_equivalent(
    first: Ensemble | MessageMatrix,
    second: Ensemble | MessageMatrix,
    tol_distance: float = tol.RECON,
) -> Equivalence:
    """Compare two ensembles through the Frobenius distance of their message matrices."""
    a, b = _as_matrix(first), _as_matrix(second)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes {a.shape} and {b.shape} differ")
    dist = float(np.linalg.norm(a.matrix - b.matrix))
    return Equivalence(dist <= tol_distance, dist)


def source_rank(ensemble: Ensemble) -> int:
    """Dimension of the span of the ensemble's states."""
    support = sorted({i for st in ensemble.states for i in st.amplitudes})
    col = {i: c for c, i in enumerate(support)}
    rows = np.zeros((len(ensemble), len(support)), dtype=complex)
    for r, st in enumerate(ensemble.states):
        for i, a in st.amplitudes.items():
            rows[r, col[i]] = a
    return orthonormalize(rows).shape[0]

