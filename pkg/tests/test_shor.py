import math

import numpy as np
import pytest

from oracles import brute_order, dft_matrix, order_finding_distribution, random_state
from trapion.errors import NotCoprime, PrecheckFailed, RegisterTooSmall
from trapion.qubits import QubitState, apply_permutation, marginal_probabilities
from trapion.shor import (
    classical_order,
    convergents,
    extract_order,
    factor_with_report,
    legendre_factor,
    modexp_oracle,
    precheck,
    qft,
    qft_by_gates,
    run_order_finding,
    shor_factor,
)


def odd_composites(limit):
    return [n for n in range(9, limit + 1, 2) if any(n % p == 0 for p in range(3, math.isqrt(n) + 1, 2))]


@pytest.mark.parametrize("x,n,r", [(7, 15, 4), (4, 15, 2), (1, 15, 1), (2, 21, 6)])
def test_classical_order_examples(x, n, r):
    assert classical_order(x, n) == r


def test_classical_order_matches_brute_force():
    for n in range(2, 120):
        for x in range(1, n):
            if math.gcd(x, n) == 1:
                assert classical_order(x, n) == brute_order(x, n)


def test_classical_order_needs_coprime():
    with pytest.raises(NotCoprime):
        classical_order(3, 15)


# --- oracle ------------------------------------------------------------------


def test_modexp_oracle_examples():
    perm = modexp_oracle(7, 15, 8, 4)
    assert perm[2 << 4 | 0] == 2 << 4 | 4
    assert perm[0] == 1


def test_modexp_oracle_is_a_bijection_for_small_moduli():
    for n in range(3, 32):
        l = n.bit_length()
        for x in range(1, n):
            if math.gcd(x, n) != 1:
                continue
            perm = modexp_oracle(x, n, 2 * l, l)
            assert np.array_equal(np.sort(perm), np.arange(perm.size))


def test_modexp_oracle_register_checks():
    with pytest.raises(RegisterTooSmall):
        modexp_oracle(7, 15, 8, 3)


# --- QFT ---------------------------------------------------------------------


def test_qft_of_zero_is_uniform():
    q = qft(QubitState(5), range(5))
    np.testing.assert_allclose(q.amplitudes, np.full(32, 2**-2.5), atol=1e-14)


@pytest.mark.parametrize("m", [1, 3, 6])
def test_qft_matches_dft_matrix(m):
    rng = np.random.default_rng(m)
    psi = random_state(rng, 2**m)
    q = qft(QubitState(m, psi), range(m))
    np.testing.assert_allclose(q.amplitudes, dft_matrix(m) @ psi, atol=1e-12)


def test_qft_on_a_subregister_matches_gate_construction():
    rng = np.random.default_rng(3)
    psi = random_state(rng, 2**7)
    a = qft(QubitState(7, psi), [1, 2, 4, 5])
    b = qft_by_gates(QubitState(7, psi), [1, 2, 4, 5])
    np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)


def test_qft_inverse_roundtrip():
    rng = np.random.default_rng(4)
    psi = random_state(rng, 2**8)
    q = qft(qft(QubitState(8, psi), range(8)), range(8), inverse=True)
    np.testing.assert_allclose(q.amplitudes, psi, atol=1e-10)


def test_period_four_concentrates_on_multiples_of_64():
    psi = np.zeros(256, dtype=complex)
    psi[::4] = 1
    psi /= np.linalg.norm(psi)
    probs = np.abs(dft_matrix(8) @ psi) ** 2
    got = qft(QubitState(8, psi), range(8)).probabilities()
    np.testing.assert_allclose(got, probs, atol=1e-12)
    assert got[::64].sum() >= 0.9


# --- order extraction --------------------------------------------------------


def test_convergents_of_a_known_fraction():
    assert [str(c) for c in convergents(415, 93)] == ["4", "9/2", "58/13", "415/93"]


def test_extract_order_returns_minimal_order():
    # 128/256 = 1/2 gives q = 2, which is a multiple of the order of 4 mod 15
    assert extract_order(128, 8, 7, 15) is None
    assert extract_order(64, 8, 7, 15) == 4
    assert extract_order(128, 8, 4, 15) == 2
    assert extract_order(0, 8, 7, 15) is None


@pytest.mark.parametrize("n,x,expected", [(15, 7, 0.5), (15, 4, 0.5), (21, 2, 0.3309426043699507)])
def test_exact_success_probability(n, x, expected):
    m = 2 * n.bit_length()
    probs = order_finding_distribution(x, n, m)
    r = classical_order(x, n)
    p = sum(pc for c, pc in enumerate(probs) if extract_order(c, m, x, n) == r)
    assert p == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("n,x", [(15, 7), (21, 2)])
def test_simulated_outcome_distribution_matches_oracle(n, x):
    l = n.bit_length()
    qs = QubitState(3 * l)
    qs.amplitudes.reshape(2 ** (2 * l), 2**l)[:, 0] = 2**-l
    apply_permutation(qs, modexp_oracle(x, n, 2 * l, l))
    qft(qs, range(2 * l))
    got = marginal_probabilities(qs, range(2 * l))
    np.testing.assert_allclose(got, order_finding_distribution(x, n, 2 * l), atol=1e-12)


@pytest.mark.parametrize("n,x,r", [(15, 7, 4), (15, 4, 2), (21, 2, 6)])
def test_run_order_finding_examples(n, x, r):
    results = [run_order_finding(n, x, np.random.default_rng(s)) for s in range(40)]
    assert any(res.success for res in results)
    for res in results:
        assert res.register_size == 2 * n.bit_length()
        if res.success:
            assert res.order == r


def test_order_finding_success_rate_15_7():
    hits = sum(run_order_finding(15, 7, np.random.default_rng(s)).success for s in range(200))
    assert hits / 200 >= 0.4


def test_register_minimum():
    with pytest.raises(RegisterTooSmall):
        run_order_finding(15, 7, np.random.default_rng(0), a_bits=4)


def test_oracle_agreement_up_to_100():
    # l+1 argument bits keep the sweep quick; order verification makes every
    # reported success exact regardless of register size
    for n in odd_composites(100):
        l = n.bit_length()
        for x in range(2, n):
            if math.gcd(x, n) != 1:
                continue
            res = run_order_finding(n, x, np.random.default_rng(n * 1000 + x), a_bits=l + 1)
            if res.success:
                assert res.order == classical_order(x, n)


def test_oracle_agreement_full_register_small_moduli():
    for n in odd_composites(35):
        for x in range(2, n):
            if math.gcd(x, n) == 1:
                res = run_order_finding(n, x, np.random.default_rng(x))
                if res.success:
                    assert res.order == classical_order(x, n)


# --- classical post-processing ----------------------------------------------


def test_legendre_factor():
    assert legendre_factor(4, 15) == (3, 5)
    assert legendre_factor(1, 15) is None
    assert legendre_factor(14, 15) is None
    assert legendre_factor(2, 15) is None


@pytest.mark.parametrize("n", [16, 13, 9, 27, 125, 2, 1])
def test_precheck_rejects(n):
    with pytest.raises(PrecheckFailed):
        precheck(n)


@pytest.mark.parametrize("n", [15, 21, 225, 441])
def test_precheck_accepts(n):
    precheck(n)


def test_factor_15_and_21():
    assert sorted(shor_factor(15, np.random.default_rng(7))) == [3, 5]
    assert sorted(shor_factor(21, np.random.default_rng(7))) == [3, 7]


def test_simulated_mode_size_limit():
    with pytest.raises(PrecheckFailed):
        shor_factor(33, np.random.default_rng(0))


def test_factor_correctness_oracle_mode():
    for n in odd_composites(600):
        try:
            precheck(n)
        except PrecheckFailed:
            continue
        p, q = shor_factor(n, np.random.default_rng(n), mode="oracle")
        assert p * q == n
        assert 1 < p < n and 1 < q < n


def test_seed_determinism():
    a = factor_with_report(21, np.random.default_rng(123))
    b = factor_with_report(21, np.random.default_rng(123))
    assert a == b
    assert a["register_bits"] == 10
    assert a["transcript"][-1]["order"] == a["order"]
