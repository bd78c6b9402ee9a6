import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chardelta import arithmetic as ar
from chardelta.errors import DomainError, PreconditionError


def trial_division_primes(lo, hi):
    return [n for n in range(lo, hi + 1) if n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))]


def test_sieve_small():
    assert ar.sieve_primes(10, 20) == [11, 13, 17, 19]
    assert ar.sieve_primes(2, 2) == [2]


def test_sieve_matches_trial_division():
    got = ar.sieve_primes(100, 200)
    assert got == trial_division_primes(100, 200)
    assert len(got) == 21


def test_sieve_rejects_inverted_range():
    with pytest.raises(PreconditionError):
        ar.sieve_primes(20, 10)


def test_mod_inverse_examples():
    assert ar.mod_inverse(2, 5) == 3
    assert ar.mod_inverse(1, 17) == 1
    assert ar.mod_inverse(7, 31) == 9


def test_mod_inverse_non_coprime():
    with pytest.raises(ArithmeticError):
        ar.mod_inverse(6, 9)


@given(st.integers(2, 10**6), st.integers(-(10**6), 10**6))
def test_mod_inverse_property(c, a):
    if math.gcd(a, c) != 1:
        return
    x = ar.mod_inverse(a, c)
    assert 1 <= x <= max(c - 1, 1)
    assert (a * x) % c == 1 % c


@pytest.mark.parametrize("p", [3, 5, 7, 13, 31, 47, 101])
def test_prime_modulus_invariants(p):
    mod = ar.prime_modulus(p)
    assert pow(mod.g, p - 1, p) == 1
    assert all(pow(mod.g, j, p) != 1 for j in range(1, p - 1))
    assert sorted(mod.ind[1:].tolist()) == list(range(p - 1))
    for n in range(1, p):
        assert pow(mod.g, int(mod.ind[n]), p) == n
    # smallest primitive root
    for g in range(2, mod.g):
        assert any(pow(g, j, p) == 1 for j in range(1, p - 1))


def test_char_value_examples():
    triv = ar.character(5, 0)
    assert ar.char_value(triv, 3) == 1
    chi = ar.character(5, 1)
    assert ar.prime_modulus(5).g == 2
    assert abs(ar.char_value(chi, 2) - 1j) < 1e-15
    for k in range(4):
        assert ar.char_value(ar.character(5, k), 10) == 0


def test_char_value_vectorized_matches_scalar():
    chi = ar.character(13, 5)
    n = np.arange(-30, 30)
    vec = ar.char_value(chi, n)
    assert np.allclose(vec, [ar.char_value(chi, int(k)) for k in n], atol=0)


def test_parity_matches_chi_minus_one():
    for p in (5, 7, 13, 29):
        for chi in ar.characters(p):
            val = chi(-1)
            assert abs(val - (1 if chi.parity == 0 else -1)) < 1e-14


def test_multiplicativity_random_pairs():
    rng = random.Random(1)
    for _ in range(500):
        p = rng.choice(ar.sieve_primes(3, 100))
        chi = ar.character(p, rng.randrange(p - 1))
        m, n = rng.randrange(-1000, 1000), rng.randrange(-1000, 1000)
        assert abs(chi(m * n) - chi(m) * chi(n)) < 1e-12


def test_orthogonality_all_small_primes():
    for p in ar.sieve_primes(3, 50):
        table = np.array([chi.values() for chi in ar.characters(p)])
        # (1/phi) sum_chi chi(n) conj(chi(r)) for all units n, r at once
        gram = table[:, 1:].T @ table[:, 1:].conj() / (p - 1)
        assert np.max(np.abs(gram - np.eye(p - 1))) < 1e-12


def direct_gauss(chi):
    p = chi.p
    return sum(chi(a) * cmath.exp(2j * math.pi * a / p) for a in range(p))


def test_gauss_sum_quadratic_mod5():
    g = ar.gauss_sum(ar.quadratic_character(5))
    assert abs(g.raw_sum - math.sqrt(5)) < 1e-12
    assert abs(g.eps_chi - 1) < 1e-12


def test_gauss_sum_unit_modulus_mod13():
    for chi in ar.characters(13)[1:]:
        g = ar.gauss_sum(chi)
        assert abs(abs(g.eps_chi) - 1) < 1e-12
        assert abs(g.raw_sum - direct_gauss(chi)) < 1e-12


def test_gauss_sum_conjugation():
    for p in ar.sieve_primes(3, 50):
        for chi in ar.characters(p)[1:]:
            eps, eps_bar = ar.gauss_sum(chi).eps_chi, ar.gauss_sum(chi.conj()).eps_chi
            assert abs(eps * eps_bar - chi(-1)) < 1e-12
            # the conjugated form only holds when eps_chi is real
            if abs(eps.imag) > 1e-6:
                assert abs(eps * eps_bar.conjugate() - chi(-1)) > 1e-6


def test_gauss_sum_trivial_rejected():
    with pytest.raises(DomainError):
        ar.gauss_sum(ar.character(7, 0))


def test_kloosterman_examples():
    assert abs(ar.kloosterman(1, 1, 3) + 1) < 1e-12
    for c in (1, 2, 9, 10, 12):
        assert abs(ar.kloosterman(0, 0, c) - ar.totient(c)) < 1e-12


def test_weil_bound():
    for p in ar.sieve_primes(2, 200):
        assert abs(ar.kloosterman(1, 1, p)) <= 2 * math.sqrt(p) + 1e-9


@settings(max_examples=50)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 60))
def test_kloosterman_symmetry(a, b, c):
    assert ar.kloosterman(a, b, c) == ar.kloosterman(b, a, c)


def test_divisor_count_and_totient():
    assert ar.divisor_count(12) == 6
    for p in ar.sieve_primes(2, 300):
        assert ar.totient(p) == p - 1
    brute = [sum(1 for d in range(1, n + 1) if n % d == 0) for n in range(1, 2001)]
    assert [ar.divisor_count(n) for n in range(1, 2001)] == brute
    table = ar.divisor_count_table(10**4)
    assert all(table[n] == ar.divisor_count(n) for n in range(1, 10**4 + 1))


def test_totient_brute_force():
    for n in range(1, 300):
        assert ar.totient(n) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
