"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""

import functools
import itertools
import math
import time

import numpy as np

from manyletter import (
    Ensemble,
    SpaceShape,
    basis_state,
    block_diagonalize,
    commutator_norm,
    dephase_length,
    eigen_ensemble,
    ensemble_average,
    ensembles_equivalent,
    expectation,
    expected_length,
    grand_canonical_matrix,
    inner_product,
    length_operator,
    length_outcome_distribution,
    length_projector,
    letter_matrix,
    make_alphabet,
    message_matrix,
    product_ensemble_matrix,
    product_message,
    sample_statistics,
    spectral_decomposition,
    superpose,
)
from manyletter.measurement import basis_outcome_distribution
from manyletter.mstate import from_index
from manyletter.specio import dumps

from .conftest import ensemble_from_terms, random_ensemble_terms, random_terms, state_from_terms
from .oracles import (
    binomial_halfwidth,
    enumerate_strings,
    kron_list,
    naive_basis_distribution,
    naive_block_decomposition,
    naive_expected_length,
    naive_length_distribution,
    naive_message_matrix,
)

RESULTS = []
S = 1 / math.sqrt(2)


def criterion(number, title, budget=None):
    """Time the check, record and print PASS/FAIL, enforce the runtime budget."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            detail = ""
            try:
                detail = fn(*args, **kwargs) or ""
                elapsed = time.perf_counter() - t0
                if budget is not None:
                    assert elapsed < budget, f"took {elapsed:.2f} s, budget {budget} s"
            except BaseException as exc:
                elapsed = time.perf_counter() - t0
                line = f"FAIL [{number}] {title} ({elapsed:.2f} s): {exc}".splitlines()[0]
                RESULTS.append(line)
                print("\n" + line)
                raise
            line = f"PASS [{number}] {title} ({elapsed:.2f} s) {detail}".rstrip()
            RESULTS.append(line)
            print("\n" + line)

        return run

    return wrap


def rng(tag):
    return np.random.default_rng([20240611, tag])


def max_abs(a):
    return float(np.max(np.abs(a), initial=0.0))


@criterion(1, "direct-sum orthogonality and completeness", budget=1.0)
def test_direct_sum_orthogonality():
    sh = SpaceShape(2, 5)
    states = [basis_state(sh, s) for s in enumerate_strings(2, 5)]
    pairs = 0
    for a, b in itertools.combinations(states, 2):
        if a.definite_length() != b.definite_length():
            assert inner_product(a, b) == 0
            pairs += 1
    assert pairs == 63 * 62 // 2 - sum(k * (k - 1) // 2 for k in (1, 2, 4, 8, 16, 32))

    g = rng(1)
    worst = 0.0
    for _ in range(100):
        K, N = int(g.integers(1, 4)), int(g.integers(0, 5))
        phi = state_from_terms(random_terms(g, K, N), K, N)
        total = math.fsum(length_projector(phi.shape, n)(phi).norm_squared() for n in range(N + 1))
        worst = max(worst, abs(total - 1))
    assert worst <= 1e-9
    return f"pairs={pairs} completeness_err={worst:.1e}"


@criterion(2, "length-operator law", budget=5.0)
def test_length_operator_law():
    g = rng(2)
    worst = 0.0
    for _ in range(100):
        K, N = int(g.integers(1, 4)), int(g.integers(0, 6))
        terms = random_terms(g, K, N)
        phi = state_from_terms(terms, K, N)
        direct = sum(abs(a) ** 2 * len(s) for s, a in terms.items())
        worst = max(worst, abs(expectation(length_operator(phi.shape), phi) - direct))
    for _ in range(50):
        K, N = int(g.integers(1, 4)), int(g.integers(0, 4))
        entries = random_ensemble_terms(g, K, N)
        sigma = message_matrix(ensemble_from_terms(entries, K, N))
        direct = sum(p * sum(abs(a) ** 2 * len(s) for s, a in t.items()) for t, p in entries)
        worst = max(worst, abs(ensemble_average(length_operator(sigma.shape), sigma) - direct))
    assert worst <= 1e-10
    return f"max_err={worst:.1e}"


@criterion(3, "ensemble indistinguishability", budget=10.0)
def test_ensemble_indistinguishability():
    g = rng(3)
    worst = 0.0
    for _ in range(50):
        K, N = int(g.integers(1, 4)), int(g.integers(0, 4))
        ens = ensemble_from_terms(random_ensemble_terms(g, K, N), K, N)
        sigma = message_matrix(ens)
        d = np.linalg.norm(sigma.matrix - message_matrix(eigen_ensemble(sigma)).matrix)
        worst = max(worst, d)
    assert worst <= 1e-10

    bb84 = make_alphabet([(1, 0), (0, 1), (S, S), (S, -S)], ["0", "1", "+", "-"])
    z = Ensemble(tuple((product_message(bb84, (x,), max_length=1), 0.5) for x in (0, 1)))
    h = Ensemble(tuple((product_message(bb84, (x,), max_length=1), 0.5) for x in (2, 3)))
    verdict = ensembles_equivalent(z, h)
    assert verdict.equivalent and verdict.distance <= 1e-12
    return f"max_dist={worst:.1e} pair_dist={verdict.distance:.1e}"


@criterion(4, "factorization of product joints")
def test_factorization():
    g = rng(4)
    alphabets = [
        make_alphabet([(1, 0), (0, 1)]),
        make_alphabet([(1, 0), (0, 1), (S, S), (S, -S)]),
        make_alphabet([(1,)]),
        make_alphabet([(1, 0, 0), (0, S, S)]),
    ]
    worst = 0.0
    for alphabet in alphabets:
        for N in (1, 2, 3):
            for _ in range(3):
                ps = [g.dirichlet(np.ones(alphabet.size)) for _ in range(N)]
                joint = functools.reduce(np.multiply.outer, ps)
                sigma, marg = product_ensemble_matrix(alphabet, joint)
                sl = sigma.shape.sector(N)
                target = functools.reduce(np.kron, [m.matrix for m in marg])
                worst = max(worst, np.linalg.norm(sigma.matrix[sl, sl] - target))
    assert worst <= 1e-10

    qubit = make_alphabet([(1, 0), (0, 1)])
    sigma, marg = product_ensemble_matrix(qubit, [[0.5, 0], [0, 0.5]])
    sl = sigma.shape.sector(2)
    gap = np.linalg.norm(sigma.matrix[sl, sl] - np.kron(marg[0].matrix, marg[1].matrix))
    # brute force: messages 00 and 11 with explicit tensor products and loops
    e = [(1, 0), (0, 1)]
    brute = np.zeros((4, 4))
    for x in (0, 1):
        v = kron_list([e[x], e[x]])
        for i in range(4):
            for j in range(4):
                brute[i, j] += 0.5 * (v[i] * v[j]).real
    marginal = [[0.5 * sum(e[x][i] * e[x][j] for x in (0, 1)) for j in range(2)] for i in range(2)]
    prod = [[marginal[i // 2][j // 2] * marginal[i % 2][j % 2] for j in range(4)] for i in range(4)]
    brute_gap = math.sqrt(sum((brute[i, j] - prod[i][j]) ** 2 for i in range(4) for j in range(4)))
    assert abs(gap - brute_gap) <= 1e-12
    assert gap > 0.4
    return f"max_err={worst:.1e} correlated_gap={gap:.4f}"


def random_letter_matrix(g):
    Q = int(g.integers(1, 4))
    vecs = []
    while len(vecs) < Q:
        v = g.normal(size=2) + 1j * g.normal(size=2)
        vecs.append(v / np.linalg.norm(v))
    vecs[0] = np.array([1, 0])
    vecs.append(np.array([0, 1]))  # spans C^2, so K = 2
    alphabet = make_alphabet(vecs)
    return letter_matrix(alphabet, g.dirichlet(np.ones(alphabet.size)))


@criterion(5, "grand canonical round trip", budget=10.0)
def test_grand_canonical_round_trip():
    g = rng(5)
    worst = 0.0
    for _ in range(20):
        rho = random_letter_matrix(g)
        assert rho.dim == 2
        N = int(g.integers(1, 6))
        lam = g.dirichlet(np.ones(N + 1))
        dec = block_diagonalize(grand_canonical_matrix(rho, lam))
        worst = max(worst, max_abs(dec.lambdas - lam), dec.residual)
        for n in range(N + 1):
            target = functools.reduce(np.kron, [rho.matrix] * n, np.ones((1, 1)))
            worst = max(worst, max_abs(dec.block(n) - target))
        sigma = grand_canonical_matrix(rho, lam)
        worst = max(worst, abs(expected_length(sigma) - math.fsum(n * x for n, x in enumerate(lam))))
    assert worst <= 1e-10
    return f"max_err={worst:.1e}"


@criterion(6, "length dephasing and commutation")
def test_dephasing():
    g = rng(6)
    worst = 0.0
    done = 0
    while done < 20:
        K, N = int(g.integers(1, 4)), int(g.integers(1, 4))
        sigma = message_matrix(ensemble_from_terms(random_ensemble_terms(g, K, N), K, N))
        if block_diagonalize(sigma).residual < 1e-3:
            continue  # need cross-length coherences
        done += 1
        L = length_operator(sigma.shape)
        assert commutator_norm(L, sigma) > 1e-6
        out = dephase_length(sigma)
        worst = max(
            worst,
            commutator_norm(L, out),
            max_abs(dephase_length(out).matrix - out.matrix),
            abs(np.trace(out.matrix) - np.trace(sigma.matrix)),
            abs(expected_length(out) - expected_length(sigma)),
        )
    assert worst <= 1e-12
    return f"max_err={worst:.1e}"


@criterion(7, "seeded measurement statistics", budget=30.0)
def test_measurement_statistics():
    trials = 100_000
    sh = SpaceShape(2, 2)
    cat = superpose([(1, basis_state(sh, (0,))), (1, basis_state(sh, (1, 1)))])
    hist = sample_statistics(cat, trials, seed=20240611)
    f1 = hist.freq(1)
    assert abs(f1 - 0.5) <= 0.006

    qubit = make_alphabet([(1, 0), (0, 1)])
    sigma = grand_canonical_matrix(letter_matrix(qubit, [0.75, 0.25]), [0.5, 0.25, 0.25])
    lam, q = [0.5, 0.25, 0.25], [0.75, 0.25]
    bhist = sample_statistics(sigma, trials, seed=7, kind="basis")
    worst_z = 0.0
    for b in bhist.bins:
        p = lam[len(b.value)] * math.prod(q[d] for d in b.value)
        assert abs(b.probability - p) <= 1e-12
        z = abs(b.count / trials - p) / math.sqrt(p * (1 - p) / trials)
        worst_z = max(worst_z, z)
        assert abs(b.count / trials - p) <= binomial_halfwidth(p, trials)
    assert len(bhist.bins) == 7

    again = sample_statistics(sigma, trials, seed=7, kind="basis")
    assert dumps(again.to_dict()) == dumps(bhist.to_dict())
    assert dumps(sample_statistics(cat, trials, seed=20240611).to_dict()) == dumps(hist.to_dict())
    return f"freq(n=1)={f1:.5f} basis_max_z={worst_z:.2f}"


@criterion(8, "brute-force oracle equivalence")
def test_oracle_equivalence():
    g = rng(8)
    worst = 0.0
    cases = 0
    for N in range(5):
        for _ in range(8):
            entries = random_ensemble_terms(g, 2, N)
            sigma = message_matrix(ensemble_from_terms(entries, 2, N))
            naive = naive_message_matrix(entries, 2, N)
            worst = max(worst, max_abs(sigma.matrix - naive))

            recon = sum(q * np.outer(e.to_vector(), e.to_vector().conj()) for q, e in spectral_decomposition(sigma))
            worst = max(worst, max_abs(recon - naive))

            dec = block_diagonalize(sigma)
            lam, blocks, res = naive_block_decomposition(naive, 2, N)
            worst = max(worst, max_abs(dec.lambdas - lam), abs(dec.residual - res))
            assert set(dec.blocks) == set(blocks)
            for n, b in blocks.items():
                worst = max(worst, max_abs(dec.block(n) - b))

            worst = max(worst, abs(expected_length(sigma) - naive_expected_length(naive, 2, N)))

            p_len = naive_length_distribution(naive, 2, N)
            got = dict(length_outcome_distribution(sigma))
            worst = max(worst, max(abs(got.get(n, 0.0) - p) for n, p in enumerate(p_len)))
            p_basis = naive_basis_distribution(naive, 2, N)
            got = {from_index(sigma.shape, i): p for i, p in basis_outcome_distribution(sigma)}
            worst = max(worst, max(abs(got.get(s, 0.0) - p) for s, p in p_basis.items()))

            # the pure first entry through the sparse code paths
            terms, _ = entries[0]
            phi = state_from_terms(terms, 2, N)
            pure = naive_message_matrix([(terms, 1.0)], 2, N)
            worst = max(worst, abs(expected_length(phi) - naive_expected_length(pure, 2, N)))
            got = dict(length_outcome_distribution(phi))
            p_len = naive_length_distribution(pure, 2, N)
            worst = max(worst, max(abs(got.get(n, 0.0) - p) for n, p in enumerate(p_len)))
            cases += 1
    assert worst <= 1e-10
    return f"cases={cases} max_err={worst:.1e}"
