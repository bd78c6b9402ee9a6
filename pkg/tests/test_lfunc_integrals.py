import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chardelta import constants
from chardelta.arithmetic import mod_inverse, sieve_primes
from chardelta.errors import DomainError, PreconditionError
from chardelta.lfunc import (
    J_integral,
    T_N_estimate,
    calibrate_J_constant,
    character_sum_C,
    character_sum_C_brute,
    nu_integral,
)
from chardelta.lfunc.integrals import (
    J_bound_shape,
    J_phase,
    J_second_derivative_display,
    nu_phase,
    nu_stationary_point,
)
from chardelta.modforms import DELTA, HeckeCoefficients, delta_coefficients
from chardelta.params import PipelineParams

# character sum -------------------------------------------------------------------


def test_charsum_example():
    closed = character_sum_C(7, 3, 2, 1, 1)
    assert abs(closed - math.cos(2 * math.pi * 3 * 4 / 7) / math.sqrt(7)) < 1e-15
    assert abs(character_sum_C_brute(7, 3, 2, 1, 1) - closed) < 1e-12


def test_charsum_vanishes_when_p_divides_n():
    assert character_sum_C(7, 14, 2) == 0
    assert abs(character_sum_C_brute(7, 14, 2)) < 1e-15


@settings(max_examples=80, deadline=None)
@given(
    st.sampled_from(sieve_primes(3, 50)),
    st.integers(1, 200),
    st.integers(1, 200),
    st.integers(1, 20),
    st.sampled_from([1, -1]),
)
def test_charsum_closed_form_matches_brute_force(p, n, r, M, sign):
    if M % p == 0:
        return
    assert abs(character_sum_C(p, n, r, M, sign) - character_sum_C_brute(p, n, r, M, sign)) < 1e-12


def test_charsum_modulus_bound():
    p = 11
    for n in range(1, 11):
        plus, minus = character_sum_C(p, n, 3, 1, 1), character_sum_C(p, n, 3, 1, -1)
        assert abs(plus) ** 2 + abs(minus) ** 2 <= 2 / p + 1e-15


def test_charsum_rejects_p_dividing_M():
    with pytest.raises(DomainError):
        character_sum_C(7, 1, 1, 14)


# T(N) ----------------------------------------------------------------------------


@pytest.fixture(scope="module")
def t_small():
    # P^2 = 100 is about 4 N t^eps at (t, N) = (100, 20)
    return T_N_estimate(PipelineParams(100, 20, 10, 10, form=delta_coefficients(20000)))


def test_T_dual_length_and_constraint(t_small):
    assert t_small.constraint
    assert t_small.dual_length == pytest.approx(20 * 100**0.05 / 100)
    assert t_small.quadrature_change < 1e-3 * abs(t_small.T)


def test_T_is_small_relative_to_Sstar(t_small):
    # far from the asymptotic claim of 1e-8, but clearly below S*
    assert t_small.ratio < 1e-2


def test_T_diagnostic_only_when_constraint_fails():
    report = T_N_estimate(PipelineParams(100, 20, 3, 10, form=delta_coefficients(20000)))
    assert not report.constraint and report.passed is None and report.notes


# nu-integral ---------------------------------------------------------------------


def _admissible(rng):
    primes = sieve_primes(50, 200)
    while True:
        p = int(rng.choice(primes))
        K = float(10 ** rng.uniform(1, 3))
        t = float(K**1.5 * 10 ** rng.uniform(0, 1))
        nu = rng.uniform(1.1, 1.9)
        r = int(rng.integers(1, 500))
        n = max(1, round(p * K * K * r * nu * nu / (2 * math.pi * (t + K * nu))))
        if 1 < nu_stationary_point(p, n, r, t, K) < 2:
            return p, n, r, t, K


def test_nu0_zeroes_h_prime_on_random_instances():
    rng = np.random.default_rng(7)
    for _ in range(100):
        p, n, r, t, K = _admissible(rng)
        h, dh, d2h = nu_phase(p, n, r, t, K)
        nu0 = nu_stationary_point(p, n, r, t, K)
        assert abs(float(dh(nu0))) / (2 * math.pi) < 1e-10
        assert float(h(nu0)) == pytest.approx(-K * nu0 - t * math.log(t + K * nu0), rel=1e-12)
        assert np.all(d2h(np.linspace(1, 2, 101)) > 0)


def test_nu_stationary_phase_window_only():
    report = nu_integral(53, 11139, 38, 2 * 1000**1.5, 1000.0)
    assert report.relative_error <= report.allowed_error


def test_nu_stationary_phase_with_weights():
    report = nu_integral(53, 11139, 38, 2 * 1000**1.5, 1000.0, N=10000)
    assert report.interpolation_error < 1e-2
    assert report.relative_error <= report.allowed_error


def test_nu_outside_support_returns_decay_case():
    report = nu_integral(53, 10, 38, 2 * 1000**1.5, 1000.0)
    assert report.stationary is None and report.nu0 < 1
    assert abs(report.oracle) < 1e-6 and report.min_slope > 0


def test_nu_rejects_bad_input():
    with pytest.raises(PreconditionError):
        nu_integral(53, 0, 38, 100.0, 10.0)


# J-integral ----------------------------------------------------------------------

J_PARAMS = PipelineParams(1e4, 10000, 150, 250, form=HeckeCoefficients(DELTA, np.zeros(10)))
P1, P2 = 151, 157


def _pair(D):
    r1 = (-D * mod_inverse(P1, P2)) % P2
    r1 += P2 * round((150 - r1) / P2)
    return r1, (P1 * r1 + D) // P2


def test_J_second_derivative_matches_display():
    H, dH, d2H = J_phase(P1, P2, 0, 131, 126, J_PARAMS)
    w = np.linspace(0.5, 2, 7)
    assert np.allclose(d2H(w) / (2 * math.pi), J_second_derivative_display(P1, P2, 131, 126, J_PARAMS, w), rtol=1e-12)


def test_J_constant_is_the_frozen_calibration():
    assert calibrate_J_constant(P1, P2, 131, 126, J_PARAMS) == pytest.approx(constants.J_BOUND_C, rel=0.01)


@pytest.mark.parametrize("D", [2**j for j in range(12)])
def test_J_bound_across_three_decades(D):
    r1, r2 = _pair(D)
    for n in (0, 1, -2):
        report = J_integral(P1, P2, n, r1, r2, J_PARAMS)
        assert report.D == D and report.passed


def test_J_bound_halves_when_D_quadruples():
    assert J_bound_shape(4096, J_PARAMS) == pytest.approx(J_bound_shape(1024, J_PARAMS) / 2)
    r1, r2 = _pair(1024 * 4)
    assert J_integral(P1, P2, 0, r1, r2, J_PARAMS).passed


def test_J_negligible_for_large_n():
    n = int(10 * J_PARAMS.N * J_PARAMS.t_eps / J_PARAMS.K)
    assert abs(J_integral(P1, P2, n, *_pair(64), J_PARAMS).value) < 1e-8


def test_J_diagonal_is_bounded_by_C():
    report = J_integral(P1, P1, 0, 150, 150, J_PARAMS)
    assert report.D == 0 and abs(report.value) <= constants.J_BOUND_C * J_PARAMS.t_eps
