import numpy as np
import pytest

from chardelta.arithmetic import characters
from chardelta.errors import PreconditionError
from chardelta.lfunc import n_dual_transform, r_dual_transform
from chardelta.lfunc.dual import n_direct, r_direct, w1_weights
from chardelta.modforms import delta_coefficients

R_CASE = dict(t=500.0, K=20.0, nu=1.3, N=100)
N_CASE = dict(K=40.0, nu=1.5, N=50, t=500.0)
CHARS_53 = characters(53)[1:]
CHARS_29 = characters(29)[1:]


@pytest.fixture(scope="module")
def form_big():
    return delta_coefficients(400000)


# r-sum ---------------------------------------------------------------------------


@pytest.mark.parametrize("index", [1, 2, 5, 26])
def test_r_dual_exact_identity(index):
    chi = characters(53)[index]
    report = r_dual_transform(53, chi, mode="exact", window="none", **R_CASE)
    assert report.difference < 1e-6


def test_r_dual_wrong_parity_fails():
    chi = characters(53)[1]
    wrong = r_dual_transform(53, chi, mode="exact", window="none", parity=1 - chi.parity, **R_CASE)
    assert wrong.difference > 1e3 * 1e-6


def test_r_dual_lemma_mode_typical_character_within_budget():
    reports = [r_dual_transform(53, chi, **R_CASE) for chi in CHARS_53]
    errors = np.array([r.difference for r in reports])
    assert np.median(errors) <= 10 * reports[0].budget


def test_r_dual_error_shrinks_with_t():
    errors = {}
    for t in (500.0, 1000.0, 2000.0):
        case = dict(R_CASE, t=t)
        errors[t] = np.median([r_dual_transform(53, chi, **case).difference for chi in CHARS_53])
    # the budget predicts a factor 2^(1-eps) per doubling; a factor above 4/3 is required
    assert errors[1000.0] < 0.75 * errors[500.0]
    assert errors[2000.0] < 0.75 * errors[1000.0]


def test_r_dual_all_characters_pass_at_t_2000():
    case = dict(R_CASE, t=2000.0)
    assert all(r_dual_transform(53, chi, **case).passed for chi in CHARS_53)


def test_r_direct_conjugation_symmetry():
    chi = characters(53)[3]
    T = 526.0
    assert abs(r_direct(chi.conj(), -T, 100) - np.conj(r_direct(chi, T, 100))) < 1e-12


def test_w1_exact_and_lemma_agree_near_the_dual_length():
    r = np.array([40.0, 44.0, 48.0])
    lemma = w1_weights(53, 0, 2000.0, 100, r, "lemma")
    exact = w1_weights(53, 0, 2000.0, 100, r, "exact")
    assert np.max(np.abs(lemma - exact)) < 1e-3


def test_r_dual_preconditions():
    with pytest.raises(PreconditionError):
        r_dual_transform(53, characters(53)[0], **R_CASE)
    with pytest.raises(PreconditionError):
        r_dual_transform(53, characters(29)[1], **R_CASE)
    with pytest.raises(PreconditionError):
        r_dual_transform(53, characters(53)[1], 500.0, 200.0, 1.3, 100)
    with pytest.raises(PreconditionError):
        r_dual_transform(53, characters(53)[1], mode="asymptotic", **R_CASE)


# n-sum ---------------------------------------------------------------------------


@pytest.mark.parametrize("index", [1, 7])
def test_n_dual_exact_identity(form_big, index):
    chi = characters(29)[index]
    report = n_dual_transform(29, chi, form=form_big, mode="exact", window="none", **N_CASE)
    assert report.difference < 1e-6


def test_n_dual_wrong_root_number_fails(form_big):
    from chardelta.arithmetic import gauss_sum

    chi = characters(29)[1]
    eps = gauss_sum(chi).eps_chi
    wrong = n_dual_transform(29, chi, form=form_big, mode="exact", window="none", eta=eps, **N_CASE)
    assert wrong.difference > 1e3 * 1e-6


def test_n_dual_lemma_mode_median_within_budget():
    reports = [n_dual_transform(29, chi, **N_CASE) for chi in CHARS_29]
    errors = np.array([r.difference for r in reports])
    assert np.median(errors) <= 10 * reports[0].budget
    assert reports[0].dual_length == pytest.approx((29 * 40 * 1.5 / (2 * np.pi)) ** 2 / 50)


def test_n_direct_conjugation_symmetry():
    form = delta_coefficients(200)
    chi = characters(29)[4]
    a = n_direct(form, chi, 40.0, 1.5, 50)
    b = n_direct(form, chi.conj(), 40.0, -1.5, 50)
    assert abs(b - np.conj(a)) < 1e-12


def test_n_dual_preconditions():
    with pytest.raises(PreconditionError):
        n_dual_transform(29, characters(29)[0], **N_CASE)
    with pytest.raises(PreconditionError):
        n_dual_transform(29, characters(31)[1], **N_CASE)
    # P^2 > N t^eps fails
    with pytest.raises(PreconditionError):
        n_dual_transform(7, characters(7)[1], 40.0, 1.5, 50, t=500.0)
