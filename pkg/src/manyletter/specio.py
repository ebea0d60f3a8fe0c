"""Reading and writing the JSON spec files for alphabets, states, observables and ensembles.

Complex numbers are written as ``[re, im]`` pairs.  Structural problems
(bad JSON, missing keys, wrong types) raise :class:`SpecFormatError`;
well-formed files whose content violates an invariant raise
:class:`ValidationError`.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .ensembles import Ensemble, grand_canonical_ensemble
from .errors import SpecFormatError, ValidationError
from .letterspace import QuantumAlphabet, make_alphabet
from .mstate import ManyLetterState, SpaceShape, global_index, product_message
from .operators import Observable

__all__ = [
    "read_json",
    "parse_complex",
    "complex_pair",
    "complex_array",
    "load_alphabet",
    "alphabet_to_dict",
    "load_state",
    "state_to_dict",
    "load_observable",
    "load_ensemble",
    "EnsembleSpec",
    "dumps",
]


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"{path}: invalid JSON: {exc}") from None
    except UnicodeDecodeError as exc:
        raise SpecFormatError(f"{path}: not UTF-8: {exc}") from None
    except OSError as exc:
        raise SpecFormatError(f"{path}: cannot read: {exc.strerror}") from None


def _require(obj: Any, key: str, kind, where: str):
    if not isinstance(obj, dict):
        raise SpecFormatError(f"{where}: expected a JSON object")
    if key not in obj:
        raise SpecFormatError(f"{where}: missing key {key!r}")
    val = obj[key]
    if kind is float:
        kind = (int, float)
    if not isinstance(val, kind) or isinstance(val, bool):
        raise SpecFormatError(f"{where}: key {key!r} has the wrong type")
    return val


def parse_complex(value: Any) -> complex:
    """``[re, im]`` (or a bare real number) to a Python complex."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise SpecFormatError(f"expected a complex number as [re, im], got {value!r}")


def complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def complex_array(a) -> list:
    """Nested lists of ``[re, im]`` pairs for a complex array of any rank."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return complex_pair(a.item())
    return [complex_array(x) for x in a]


def load_alphabet(obj: Any) -> tuple[QuantumAlphabet, np.ndarray | None]:
    """Alphabet spec object to ``(alphabet, priors or None)``."""
    letters = _require(obj, "letters", list, "alphabet")
    labels, vectors = [], []
    for k, entry in enumerate(letters):
        where = f"alphabet letter {k}"
        labels.append(_require(entry, "label", str, where))
        vec = _require(entry, "vector", list, where)
        vectors.append([parse_complex(v) for v in vec])
    alphabet = make_alphabet(vectors, labels)
    priors = None
    if obj.get("priors") is not None:
        pr = obj["priors"]
        if not isinstance(pr, list) or not all(
            isinstance(p, (int, float)) and not isinstance(p, bool) for p in pr
        ):
            raise SpecFormatError("alphabet: priors must be a list of numbers")
        priors = np.array(pr, dtype=float)
    return alphabet, priors


def alphabet_to_dict(alphabet: QuantumAlphabet, priors=None) -> dict:
    out: dict[str, Any] = {
        "letters": [
            {"label": lab, "vector": complex_array(vec)}
            for lab, vec in zip(alphabet.labels, alphabet.letters)
        ]
    }
    if priors is not None:
        out["priors"] = [float(p) for p in priors]
    return out


def load_state(obj: Any, K: int | None = None) -> ManyLetterState:
    """State spec object to a normalized state.

    ``"normalize": true`` rescales the amplitudes; otherwise they must
    already have unit norm.  ``K``, when given, must match the file.
    """
    k = _require(obj, "K", int, "state")
    N = _require(obj, "N", int, "state")
    terms = _require(obj, "terms", list, "state")
    if K is not None and k != K:
        raise ValidationError(f"state has K={k}, expected {K}")
    shape = SpaceShape(k, N)
    pairs = []
    for t, term in enumerate(terms):
        digits = _require(term, "digits", list, f"state term {t}")
        if not all(isinstance(d, int) and not isinstance(d, bool) for d in digits):
            raise SpecFormatError(f"state term {t}: digits must be integers")
        pairs.append((tuple(digits), parse_complex(_require(term, "amp", (list, int, float), f"state term {t}"))))
    if not pairs:
        raise ValidationError("state has no terms")
    return ManyLetterState.from_terms(shape, pairs, normalize=bool(obj.get("normalize", False)))


def state_to_dict(state: ManyLetterState) -> dict:
    return {
        "K": state.shape.K,
        "N": state.shape.N,
        "terms": [{"digits": list(s), "amp": complex_pair(a)} for s, a in state.items()],
    }


def load_observable(obj: Any, shape: SpaceShape) -> Observable:
    """Observable spec: ``{"diagonal": [...], "default": x}`` or ``{"dense": [[[re, im], ...], ...]}``."""
    if not isinstance(obj, dict):
        raise SpecFormatError("observable: expected a JSON object")
    if "diagonal" in obj:
        entries = _require(obj, "diagonal", list, "observable")
        default = obj.get("default", 0.0)
        if not isinstance(default, (int, float)) or isinstance(default, bool):
            raise SpecFormatError("observable: default must be a number")
        d = np.full(shape.D, float(default))
        for k, e in enumerate(entries):
            digits = _require(e, "digits", list, f"observable entry {k}")
            value = _require(e, "value", float, f"observable entry {k}")
            d[global_index(shape, tuple(digits))] = float(value)
        return Observable(shape, diagonal=d)
    if "dense" in obj:
        rows = _require(obj, "dense", list, "observable")
        m = np.array([[parse_complex(v) for v in row] for row in rows], dtype=complex)
        if m.shape != (shape.D, shape.D):
            raise ValidationError(f"dense observable of shape {m.shape} does not match D={shape.D}")
        return Observable.from_dense(shape, m, hermitize=True)
    raise SpecFormatError("observable: needs a 'diagonal' or 'dense' key")


class EnsembleSpec:
    """A loaded ensemble file: the alphabet, its priors and the ensemble."""

    def __init__(self, alphabet: QuantumAlphabet, priors, ensemble: Ensemble):
        self.alphabet = alphabet
        self.priors = priors
        self.ensemble = ensemble

    @property
    def shape(self) -> SpaceShape:
        return self.ensemble.shape


def _letter_index(alphabet: QuantumAlphabet, x: Any) -> int:
    if isinstance(x, str):
        return alphabet.index(x)
    if isinstance(x, int) and not isinstance(x, bool):
        if not 0 <= x < alphabet.size:
            raise ValidationError(f"letter index {x} outside [0, {alphabet.size})")
        return x
    raise SpecFormatError(f"product letters must be indices or labels, got {x!r}")


def load_ensemble(
    obj: Any, base_dir: str | Path = ".", max_length: int | None = None
) -> EnsembleSpec:
    """Ensemble spec object (explicit entries or grand-canonical shorthand).

    ``alphabet`` may be an inline alphabet object or a path, resolved
    against ``base_dir``.  ``max_length`` overrides the file's ``N``.
    """
    if not isinstance(obj, dict) or "alphabet" not in obj:
        raise SpecFormatError("ensemble: missing key 'alphabet'")
    alpha_obj = obj["alphabet"]
    if isinstance(alpha_obj, str):
        alpha_obj = read_json(Path(base_dir) / alpha_obj)
    alphabet, priors = load_alphabet(alpha_obj)

    if "grand_canonical" in obj:
        gc = obj["grand_canonical"]
        lambdas = _require(gc, "lambdas", list, "grand_canonical")
        gc_priors = gc.get("priors", None) if isinstance(gc, dict) else None
        if gc_priors is None:
            if priors is None:
                raise SpecFormatError("grand_canonical: no priors given in shorthand or alphabet")
            gc_priors = priors
        ensemble = grand_canonical_ensemble(alphabet, gc_priors, lambdas)
        priors = np.asarray(gc_priors, dtype=float)
        N = ensemble.shape.N
        file_N = obj.get("N")
        if file_N is not None:
            if not isinstance(file_N, int) or file_N < N:
                raise ValidationError(f"ensemble N={file_N} is below the longest length {N}")
            N = file_N
    else:
        N = _require(obj, "N", int, "ensemble")
        entries = _require(obj, "entries", list, "ensemble")
        pairs = []
        for k, entry in enumerate(entries):
            where = f"ensemble entry {k}"
            st_obj = _require(entry, "state", dict, where)
            p = _require(entry, "p", float, where)
            if "product" in st_obj:
                idx = [_letter_index(alphabet, x) for x in _require(st_obj, "product", list, where)]
                if len(idx) > N:
                    raise ValidationError(f"{where}: product of length {len(idx)} exceeds N={N}")
                st = product_message(alphabet, idx, max_length=N)
            else:
                st = load_state(st_obj, K=alphabet.rank)
                if st.shape.N > N:
                    raise ValidationError(f"{where}: state N={st.shape.N} exceeds ensemble N={N}")
                st = st.embed(N)
            pairs.append((st, p))
        ensemble = Ensemble(tuple(pairs))

    if max_length is not None:
        longest = max(max(st.lengths()) for st in ensemble.states)
        if max_length < longest:
            raise ValidationError(f"max length {max_length} is below the longest entry ({longest})")
        N = max_length
    if N != ensemble.shape.N:
        ensemble = Ensemble(tuple((st.embed(N), p) for st, p in ensemble.entries))
    return EnsembleSpec(alphabet, priors, ensemble)


def dumps(report: Any) -> str:
    """Deterministic JSON text for reports (trailing newline included)."""
    return json.dumps(report, indent=2, allow_nan=False) + "\n"

