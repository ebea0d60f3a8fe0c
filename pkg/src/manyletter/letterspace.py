"""Quantum alphabets, their basis alphabets and single-letter matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import tolerances as tol
from .errors import ValidationError

__all__ = [
    "QuantumAlphabet",
    "LetterMatrix",
    "orthonormalize",
    "make_alphabet",
    "gram_matrix",
    "expand_letter",
    "letter_matrix",
    "letter_spectral",
]


def orthonormalize(vectors: np.ndarray, threshold: float = tol.RANK) -> np.ndarray:
    """Modified Gram-Schmidt over the rows of ``vectors``, in row order.

    Each row is orthogonalized twice against the basis accumulated so far;
    rows whose residual norm is ``<= threshold`` are dropped.  Returns the
    orthonormal rows found (shape ``(rank, dim)``).
    """
    vectors = np.asarray(vectors, dtype=complex)
    basis: list[np.ndarray] = []
    for v in vectors:
        r = v.copy()
        for _ in range(2):
            for b in basis:
                r -= np.vdot(b, r) * b
        nrm = np.linalg.norm(r)
        if nrm > threshold:
            basis.append(r / nrm)
    if not basis:
        return np.zeros((0, vectors.shape[1]), dtype=complex)
    return np.array(basis)


@dataclass(frozen=True, eq=False)
class QuantumAlphabet:
    """Normalized letter vectors with their orthonormal basis alphabet.

    Attributes
    ----------
    letters : ndarray, shape (|Q|, d)
        Letter vectors in ambient coordinates.
    labels : tuple of str
    basis : ndarray, shape (K, d)
        Orthonormal basis alphabet spanning the letters.
    coords : ndarray, shape (|Q|, K)
        ``coords[x, a] = <a|x>``, the letters in basis-alphabet coordinates.
    """

    letters: np.ndarray
    labels: tuple[str, ...]
    basis: np.ndarray
    coords: np.ndarray

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @property
    def size(self) -> int:
        return self.letters.shape[0]

    @property
    def dim(self) -> int:
        return self.letters.shape[1]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"unknown letter label {label!r}") from None

    def expand_letter(self, letter_index: int) -> np.ndarray:
        return expand_letter(self, letter_index)


def make_alphabet(vectors: Sequence, labels: Sequence[str] | None = None) -> QuantumAlphabet:
    """Validate letter vectors and extract a basis alphabet.

    The basis comes from modified Gram-Schmidt in input order, so it is
    reproducible: e.g. for ``|0>, |1>, |+>, |->`` the basis is ``|0>, |1>``.
    """
    if len(vectors) == 0:
        raise ValidationError("an alphabet needs at least one letter")
    try:
        rows = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"letters must be complex vectors: {exc}") from None
    dims = {r.shape[0] for r in rows}
    if len(dims) != 1:
        raise ValidationError(f"letters have mismatched dimensions {sorted(dims)}")
    if dims.pop() < 1:
        raise ValidationError("letters must have dimension >= 1")
    letters = np.array(rows)
    for i, r in enumerate(letters):
        if abs(np.linalg.norm(r) - 1.0) > tol.NORM:
            raise ValidationError(f"letter {i} has norm {np.linalg.norm(r):.17g}, expected 1")

    if labels is None:
        labels = [str(i) for i in range(len(rows))]
    labels = tuple(str(s) for s in labels)
    if len(labels) != len(rows):
        raise ValidationError(f"{len(labels)} labels for {len(rows)} letters")
    if len(set(labels)) != len(labels):
        raise ValidationError("letter labels must be distinct")

    basis = orthonormalize(letters)
    coords = letters @ basis.conj().T
    letters.setflags(write=False)
    basis.setflags(write=False)
    coords.setflags(write=False)
    return QuantumAlphabet(letters, labels, basis, coords)


def gram_matrix(alphabet: QuantumAlphabet) -> np.ndarray:
    """``G[i, j] = <x_i|x_j>``."""
    return alphabet.letters.conj() @ alphabet.letters.T


def expand_letter(alphabet: QuantumAlphabet, letter_index: int) -> np.ndarray:
    """Coordinates ``<a|x>`` of letter ``x`` in the basis alphabet."""
    if not 0 <= letter_index < alphabet.size:
        raise ValidationError(f"letter index {letter_index} outside [0, {alphabet.size})")
    return alphabet.coords[letter_index].copy()


@dataclass(frozen=True, eq=False)
class LetterMatrix:
    """Single-letter density matrix in basis-alphabet coordinates."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"letter matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > tol.HERM:
            raise ValidationError("letter matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > tol.TRACE:
            raise ValidationError(f"letter matrix has trace {np.trace(m).real:.17g}")
        if np.linalg.eigvalsh(m)[0] < -tol.PSD:
            raise ValidationError("letter matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _check_probabilities(p, n: int, what: str) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.shape[0] != n:
        raise ValidationError(f"{what}: expected {n} entries, got {p.shape[0]}")
    if np.any(p < 0):
        raise ValidationError(f"{what}: negative probability")
    if abs(p.sum() - 1.0) > tol.PROB:
        raise ValidationError(f"{what}: probabilities sum to {p.sum():.17g}")
    return p


def letter_matrix(alphabet: QuantumAlphabet, priors) -> LetterMatrix:
    """``rho = sum_x p(x) |x><x|`` in basis-alphabet coordinates."""
    p = _check_probabilities(priors, alphabet.size, "priors")
    c = alphabet.coords
    rho = (c.T * p) @ c.conj()
    return LetterMatrix(0.5 * (rho + rho.conj().T))


def letter_spectral(rho: LetterMatrix) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs ``(q(a), |a>)`` of a letter matrix, eigenvalues descending.

    Eigenvectors of a degenerate eigenvalue are an arbitrary orthonormal
    basis of its eigenspace.
    """
    w, v = np.linalg.eigh(rho.matrix)
    order = np.argsort(-w, kind="stable")
    return [(float(w[k]), v[:, k].copy()) for k in order]
