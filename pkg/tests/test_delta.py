import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chardelta import delta as dl
from chardelta.arithmetic import sieve_primes
from chardelta.errors import PreconditionError
from chardelta.lfunc.direct import S_direct
from chardelta.modforms import DELTA, HeckeCoefficients
from chardelta.params import PipelineParams
from chardelta.windows import make_window

PRIMES = sieve_primes(3, 60)


def test_params_flags():
    params = PipelineParams(200, 60, 40, 30)
    assert params.primes[0] == 41 and params.primes[-1] == 79
    assert params.P_star == len(sieve_primes(40, 80))
    flags = params.constraint_flags()
    assert flags["PK > N^(1+eps)"] and flags["P^2 > N t^eps"]
    # 200^(2/3 - 0.05) is about 26, below K = 30
    assert not flags["K < t^(2/3-eps)"] and flags["K < N t^-eps"]
    assert not PipelineParams(200, 60, 2, 1).pk_large
    with pytest.raises(PreconditionError):
        PipelineParams(200, 60, 1, 30)


def test_additive_zero_and_orthogonality():
    assert abs(dl.delta_additive(0, 50, 4) - 1) < 1e-10
    for n in (1, 7, 49, -3):
        assert abs(dl.delta_additive(n, 50, 4)) < 1e-12


def test_additive_multiple_of_q_is_small():
    # additive factor is 1; the x-integral is the Fourier transform at 2 pi q / X
    value = abs(dl.delta_additive(50, 50, 4))
    assert value == pytest.approx(abs(dl.nu_transform(make_window("V_bump"), 2 * math.pi * 50 / 4)), rel=1e-9)
    assert value < 1e-4


def test_multiplicative_diagonal():
    assert abs(dl.delta_multiplicative(150, 150, 101, 50, N=100) - 1) < 1e-8


def test_multiplicative_non_congruent():
    assert abs(dl.delta_multiplicative(150, 250, 101, 50)) < 1e-12


def test_multiplicative_congruent_pair_decays_in_K():
    small = abs(dl.delta_multiplicative(110, 211, 101, 50))
    large = abs(dl.delta_multiplicative(110, 211, 101, 200))
    assert large * 16 <= small
    # the congruent off-diagonal value equals the window's Fourier transform
    assert small == pytest.approx(abs(dl.nu_transform(make_window("V_bump"), 50 * math.log(110 / 211))), rel=1e-9)


def test_multiplicative_preconditions():
    with pytest.raises(PreconditionError):
        dl.delta_multiplicative(150, 202, 101, 50)
    with pytest.raises(PreconditionError):
        dl.delta_multiplicative(150, 150, 100, 50)
    with pytest.raises(PreconditionError):
        dl.delta_multiplicative(150, 150, 101, 50, N=200)
    with pytest.raises(PreconditionError):
        dl.delta_multiplicative(150, 150, 101, 1, N=100)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 400), st.integers(1, 400), st.floats(1, 200))
def test_orthogonality_exact(p, n, r, K):
    if r % p == 0 or n % p == 0 or (n - r) % p == 0:
        return
    assert abs(dl.delta_multiplicative(n, r, p, K)) < 1e-12


def test_character_matrix_rows_orthogonal():
    table = dl.character_matrix(13)
    gram = table[:, 1:] @ np.conj(table[:, 1:]).T
    assert np.allclose(gram, 12 * np.eye(12), atol=1e-12)


@pytest.fixture(scope="module")
def decomposition():
    return dl.decompose_S(PipelineParams(200, 60, 40, 30))


def test_decomposition_residual_is_the_lemma_error(decomposition):
    d = decomposition
    assert d.S == pytest.approx(S_direct(PipelineParams(200, 60, 40, 30)))
    # exact apart from the off-diagonal congruent pairs the lemma discards
    assert abs(d.residual - d.off_diagonal) < 1e-12 + d.quadrature_bound
    assert abs(d.Sstar) > 10 * abs(d.S1)


def test_decomposition_residual_shrinks_with_K():
    base = dl.decompose_S(PipelineParams(200, 30, 30, 30))
    big = dl.decompose_S(PipelineParams(200, 30, 30, 240))
    assert abs(big.residual) * 1e3 < abs(base.residual)


def test_decomposition_zero_form():
    zero = HeckeCoefficients(DELTA, np.zeros(200))
    d = dl.decompose_S(PipelineParams(200, 20, 20, 30, form=zero))
    assert d.S == d.S0 == d.S1 == d.Sstar == 0


def test_decomposition_S0_vanishes_when_no_multiple_in_window():
    # N = 8, P = 17: primes 17..31 exceed every n in (8, 16)
    d = dl.decompose_S(PipelineParams(50, 8, 17, 30))
    assert d.S0 == 0


def test_decomposition_quadrature_bound_scales_with_tol():
    params = PipelineParams(200, 20, 20, 30)
    a = dl.decompose_S(params, tol=1e-10).quadrature_bound
    b = dl.decompose_S(params, tol=5e-11).quadrature_bound
    assert b == pytest.approx(a / 2)


def test_decompose_refuses_small_PK():
    with pytest.raises(PreconditionError):
        dl.decompose_S(PipelineParams(200, 60, 3, 1))


def test_S_direct_counting_window():
    ones = HeckeCoefficients(DELTA, np.r_[0.0, np.ones(3000)])
    V = make_window("V_bump")
    value = S_direct(PipelineParams(1e-300, 1000, 10, 1, form=ones), V)
    assert abs(value.real - 1000) < 0.01 * 1000
    assert S_direct(PipelineParams(10, 1, 2, 1)) == 0
