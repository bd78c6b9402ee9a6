"""The parity-split character sum C_+- and its closed form."""

from __future__ import annotations

import math

import numpy as np

from ..arithmetic import TWO_PI, characters, e, is_prime, mod_inverse
from ..errors import DomainError, PreconditionError
from ..summation import ksum


def _check(p: int, M: int, sign: int) -> None:
    if not is_prime(p):
        raise PreconditionError("p must be prime")
    if M % p == 0:
        raise DomainError("the character sum needs (M, p) = 1")
    if sign not in (1, -1):
        raise PreconditionError("sign must be +1 or -1")


def character_sum_C(p: int, n: int, r: int, M: int = 1, sign: int = 1) -> complex:
    """(1/(2 sqrt p)) delta(p not dividing n r) (e(-n conj(Mr)/p) + sign e(n conj(Mr)/p))."""
    _check(p, M, sign)
    if n % p == 0 or r % p == 0:
        return 0j
    x = n * mod_inverse(M * r % p, p) % p / p
    return complex((e(-x) + sign * e(x)) / (2 * math.sqrt(p)))


def character_sum_C_brute(p: int, n: int, r: int, M: int = 1, sign: int = 1) -> complex:
    """(1/phi(p)) sum over all chi mod p of ((chi(-1) + sign)/2) eps_chi conj(chi)(n) chi(Mr).

    eps_chi = (1/sqrt p) sum_a chi(a) e(a/p) for every chi, so the trivial
    character contributes with eps = -1/sqrt p.
    """
    _check(p, M, sign)
    a = np.arange(p)
    additive = np.exp(1j * TWO_PI * a / p)
    terms = []
    for chi in characters(p):
        table = chi.values()
        eps = ksum(table * additive) / math.sqrt(p)
        weight = (table[p - 1] + sign) / 2
        terms.append(weight * eps * np.conj(table[n % p]) * table[M * r % p])
    return complex(ksum(terms)) / (p - 1)
