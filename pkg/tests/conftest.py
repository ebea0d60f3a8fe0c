import math

import numpy as np
import pytest

from manyletter import Ensemble, ManyLetterState, SpaceShape, make_alphabet

S = 1 / math.sqrt(2)


@pytest.fixture
def qubit():
    return make_alphabet([(1, 0), (0, 1)], ["0", "1"])


@pytest.fixture
def bb84():
    return make_alphabet([(1, 0), (0, 1), (S, S), (S, -S)], ["0", "1", "+", "-"])


def random_terms(rng, K, N, max_terms=6, lengths=None):
    """Random normalized state as a dict digits -> amplitude."""
    n_terms = int(rng.integers(1, max_terms + 1))
    terms = {}
    for _ in range(n_terms):
        n = int(rng.choice(lengths)) if lengths is not None else int(rng.integers(0, N + 1))
        digits = tuple(int(d) for d in rng.integers(0, K, size=n))
        terms[digits] = terms.get(digits, 0) + complex(rng.normal(), rng.normal())
    nrm = math.sqrt(sum(abs(a) ** 2 for a in terms.values()))
    return {s: a / nrm for s, a in terms.items()}


def state_from_terms(terms, K, N):
    return ManyLetterState.from_terms(SpaceShape(K, N), terms.items())


def random_ensemble_terms(rng, K, N, max_entries=8, definite=False):
    n = int(rng.integers(1, max_entries + 1))
    p = rng.random(n) + 0.05
    p /= p.sum()
    out = []
    for k in range(n):
        lengths = [int(rng.integers(0, N + 1))] if definite else None
        out.append((random_terms(rng, K, N, lengths=lengths), float(p[k])))
    return out


def ensemble_from_terms(entries, K, N):
    return Ensemble(tuple((state_from_terms(t, K, N), p) for t, p in entries))


@pytest.fixture
def nprng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get(__package__ + ".test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: s.split("]")[0].split("[")[1].zfill(2)):
        terminalreporter.write_line(line)
