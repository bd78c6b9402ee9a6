import math
import random
import warnings

import numpy as np
import pytest

from chardelta import modforms as mf
from chardelta.arithmetic import divisor_count, sieve_primes
from chardelta.errors import FormatError, InvariantError, ParseError, PreconditionError


def sigma(k, n):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def tau_by_divisor_sums(n):
    """Independent oracle: 756 tau(n) = 65 s11(n) + 691 s5(n) - 252*691 sum s5(k)s5(n-k)."""
    conv = sum(sigma(5, k) * sigma(5, n - k) for k in range(1, n))
    total = 65 * sigma(11, n) + 691 * sigma(5, n) - 252 * 691 * conv
    assert total % 756 == 0
    return total // 756


@pytest.fixture(scope="module")
def delta():
    return mf.delta_coefficients(10**5)


def test_tau_small_values():
    tau = mf.tau_table(10)
    assert tau[1] == 1
    assert tau[2] == -24 and tau[3] == 252
    assert tau[6] == tau[2] * tau[3] == -6048


def test_tau_matches_naive_product():
    assert mf.tau_table(60) == mf.naive_tau(60)


@pytest.mark.parametrize("n", [97, 1000, 4096, 9973])
def test_tau_matches_divisor_sum_oracle(n):
    assert mf.tau_table(n)[n] == tau_by_divisor_sums(n)


def test_tau_rejects_bad_size():
    with pytest.raises(PreconditionError):
        mf.tau_table(0)


def test_normalized_lambda(delta):
    assert mf.normalized_lambda(delta, 1) == 1.0
    assert abs(mf.normalized_lambda(delta, 2) + 0.5303300859) < 1e-10
    with pytest.raises(PreconditionError):
        mf.normalized_lambda(delta, delta.n_max + 1)


def test_deligne_bound_no_exceptions(delta):
    assert mf.deligne_violations(delta, 10**5) == []


def test_hecke_relation_at_primes(delta):
    lam = delta.lam
    for p in sieve_primes(2, 300):
        assert abs(lam[p * p] - (lam[p] ** 2 - 1)) < 1e-10


def test_multiplicativity_random(delta):
    rng = random.Random(7)
    lam = delta.lam
    done = 0
    while done < 1000:
        m, n = rng.randint(2, 10**4), rng.randint(2, 10**4)
        if math.gcd(m, n) != 1 or m * n > delta.n_max:
            continue
        done += 1
        assert abs(lam[m * n] - lam[m] * lam[n]) < 1e-10


def test_hecke_violations_detects_tampering(delta):
    assert mf.hecke_violations(delta, 2000) == []
    raw = list(delta.raw[:2001])
    raw[12] += 1
    bad = mf.HeckeCoefficients(delta.form, delta.lam[:2001], tuple(raw))
    assert (12, "multiplicativity") in mf.hecke_violations(bad, 2000)


def test_rp_average(delta):
    assert mf.rp_average_check(delta, 1) == 1.0
    v4 = mf.rp_average_check(delta, 10**4)
    v5 = mf.rp_average_check(delta, 10**5)
    # the verified coefficients give about 0.384 here
    assert 0.3 < v4 < 5
    assert v4 / 3 < v5 < 3 * v4


def write(tmp_path, text, name="coeffs.txt"):
    path = tmp_path / name
    path.write_bytes(text.encode("ascii"))
    return path


def test_load_coefficients_basic(tmp_path):
    path = write(tmp_path, "# weight 12\r\n# label test\r\n1 1\r\n2 -24\r\n3 252\r\n")
    coeffs = mf.load_coefficients(path)
    assert coeffs.form.weight == 12 and coeffs.form.label == "test"
    assert abs(coeffs.lam[2] + 24 / 2**5.5) < 1e-12


def test_load_coefficients_round_trip(tmp_path, delta):
    lines = ["# weight 12", "# level 1"] + [f"{n} {mf.tau_table(500)[n]}" for n in range(1, 501)]
    coeffs = mf.load_coefficients(write(tmp_path, "\n".join(lines) + "\n"))
    assert np.allclose(coeffs.lam, delta.lam[:501], rtol=1e-14, atol=0)


def test_loaded_integer_table_passes_hecke_checks(tmp_path):
    lines = ["# weight 12"] + [f"{n} {mf.tau_table(300)[n]}" for n in range(1, 301)]
    coeffs = mf.load_coefficients(write(tmp_path, "\n".join(lines)))
    assert coeffs.raw[2] == -24
    assert mf.hecke_violations(coeffs, 300) == [] and mf.deligne_violations(coeffs, 300) == []


def test_load_coefficients_errors(tmp_path):
    with pytest.raises(FormatError):
        mf.load_coefficients(write(tmp_path, ""))
    with pytest.raises(FormatError):
        mf.load_coefficients(write(tmp_path, "1 1\n3 252\n"))
    with pytest.raises(ParseError, match="line 2"):
        mf.load_coefficients(write(tmp_path, "1 1\n2 abc\n"))
    with pytest.raises(InvariantError):
        mf.load_coefficients(write(tmp_path, "# weight 12\n1 2\n"))


def test_load_coefficients_warns_on_non_multiplicative(tmp_path):
    lines = ["# weight 2"] + [f"{n} {1 if n == 1 else n % 7 - 3}" for n in range(1, 400)]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        mf.load_coefficients(write(tmp_path, "\n".join(lines)))
    assert any("multiplicativity" in str(w.message) for w in caught)


def test_divisor_bound_uses_divisor_count(delta):
    for n in (1, 2, 12, 360, 720, 5040):
        assert abs(delta.lam[n]) <= divisor_count(n)
