"""Exact modular arithmetic: primes, inverses, characters mod a prime, Gauss and
Kloosterman sums, divisor and totient functions."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericError, PreconditionError
from .summation import ksum

TWO_PI = 2.0 * math.pi


def e(x):
    """Additive character e(x) = exp(2 pi i x); accepts scalars or arrays."""
    if isinstance(x, np.ndarray):
        return np.exp(1j * TWO_PI * x)
    return cmath.exp(1j * TWO_PI * x)


def sieve_primes(lo: int, hi: int) -> list[int]:
    """All primes in ``[lo, hi]`` in increasing order."""
    if lo > hi:
        raise PreconditionError(f"inverted range [{lo}, {hi}]")
    if lo < 2 or hi > 10**8:
        raise PreconditionError("sieve range must satisfy 2 <= lo <= hi <= 1e8")
    flags = np.ones(hi + 1, dtype=bool)
    flags[:2] = False
    for q in range(2, math.isqrt(hi) + 1):
        if flags[q]:
            flags[q * q :: q] = False
    return [int(v) for v in np.nonzero(flags[lo:])[0] + lo]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def mod_inverse(a: int, c: int) -> int:
    """Inverse of ``a`` modulo ``c``, returned in ``[1, c-1]``."""
    if c < 2:
        raise PreconditionError("modulus must be at least 2")
    if math.gcd(a, c) != 1:
        raise ArithmeticError(f"{a} is not invertible modulo {c}")
    return pow(a, -1, c)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (n is small throughout)."""
    if n < 1:
        raise PreconditionError("factorize needs n >= 1")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisor_count(n: int) -> int:
    if n < 1:
        raise PreconditionError("divisor_count needs n >= 1")
    return math.prod(k + 1 for k in factorize(n).values())


def totient(n: int) -> int:
    if n < 1:
        raise PreconditionError("totient needs n >= 1")
    out = n
    for q in factorize(n):
        out = out // q * (q - 1)
    return out


def divisor_count_table(n_max: int) -> np.ndarray:
    """d(n) for 0 <= n <= n_max (entry 0 unused) via a divisor sieve."""
    d = np.zeros(n_max + 1, dtype=np.int64)
    for k in range(1, n_max + 1):
        d[k::k] += 1
    return d


@dataclass(frozen=True)
class PrimeModulus:
    """An odd prime with its smallest primitive root and discrete-log table.

    ``ind[n]`` is the discrete log of ``n`` to base ``g`` for ``1 <= n < p``;
    ``ind[0]`` is set to -1 as a sentinel.
    """

    p: int
    g: int
    ind: np.ndarray = field(repr=False, compare=False)

    @property
    def phi(self) -> int:
        return self.p - 1


def primitive_root(p: int) -> int:
    """Smallest primitive root modulo the prime ``p``."""
    if p == 2:
        return 1
    factors = factorize(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise NumericError(f"no primitive root found mod {p}")


@lru_cache(maxsize=256)
def prime_modulus(p: int) -> PrimeModulus:
    if p < 3 or not is_prime(p):
        raise PreconditionError(f"{p} is not an odd prime")
    g = primitive_root(p)
    ind = np.full(p, -1, dtype=np.int64)
    x = 1
    for j in range(p - 1):
        ind[x] = j
        x = x * g % p
    ind.setflags(write=False)
    return PrimeModulus(p, g, ind)


@dataclass(frozen=True)
class DirichletCharacter:
    """chi(n) = e(index * ind(n) / (p-1)) for p not dividing n, else 0."""

    modulus: PrimeModulus
    index: int

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def is_trivial(self) -> bool:
        return self.index % (self.p - 1) == 0

    @property
    def parity(self) -> int:
        # ind(-1) = (p-1)/2, so chi(-1) = (-1)^index
        return self.index % 2

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, (-self.index) % (self.p - 1))

    def __call__(self, n):
        return char_value(self, n)

    def values(self) -> np.ndarray:
        """chi(0), chi(1), ..., chi(p-1) as a complex array."""
        return _char_table(self.p, self.index % (self.p - 1))


@lru_cache(maxsize=4096)
def _char_table(p: int, index: int) -> np.ndarray:
    mod = prime_modulus(p)
    out = np.zeros(p, dtype=complex)
    k = (index * mod.ind[1:]) % (p - 1)
    out[1:] = np.exp(1j * TWO_PI * k / (p - 1))
    # snap the 4th roots of unity to exact values
    body = out[1:]
    body[k == 0] = 1.0
    body[2 * k == p - 1] = -1.0
    body[4 * k == p - 1] = 1j
    body[4 * k == 3 * (p - 1)] = -1j
    out.setflags(write=False)
    return out


def character(p: int, index: int) -> DirichletCharacter:
    return DirichletCharacter(prime_modulus(p), index % (p - 1))


def characters(p: int) -> list[DirichletCharacter]:
    """All p-1 characters mod p, index 0 (trivial) first."""
    mod = prime_modulus(p)
    return [DirichletCharacter(mod, j) for j in range(p - 1)]


def quadratic_character(p: int) -> DirichletCharacter:
    return character(p, (p - 1) // 2)


def char_value(chi: DirichletCharacter, n):
    """chi(n) for an integer or an integer array ``n``."""
    table = chi.values()
    if isinstance(n, np.ndarray):
        return table[np.mod(n, chi.p)]
    return complex(table[int(n) % chi.p])


@dataclass(frozen=True)
class GaussSumData:
    eps_chi: complex
    raw_sum: complex


def gauss_sum(chi: DirichletCharacter) -> GaussSumData:
    """Normalized Gauss sum (1/sqrt p) sum_a chi(a) e(a/p) by direct summation."""
    if chi.is_trivial:
        raise DomainError("the trivial character has Gauss sum -1, not of modulus sqrt(p)")
    p = chi.p
    a = np.arange(p)
    raw = ksum(chi.values() * np.exp(1j * TWO_PI * a / p))
    eps = raw / math.sqrt(p)
    if abs(abs(eps) - 1.0) > 1e-12:
        raise NumericError("Gauss sum lost unit modulus", value=eps)
    return GaussSumData(eps, raw)


def root_number(chi: DirichletCharacter) -> complex:
    return gauss_sum(chi).eps_chi


def kloosterman(a: int, b: int, c: int) -> float:
    """S(a, b; c) summed over units modulo ``c``."""
    if c < 1:
        raise PreconditionError("Kloosterman modulus must be >= 1")
    if c == 1:
        return 1.0
    terms = []
    for alpha in range(1, c):
        if math.gcd(alpha, c) == 1:
            terms.append(((a * alpha + b * pow(alpha, -1, c)) % c) / c)
    phases = np.exp(1j * TWO_PI * np.asarray(terms))
    total = ksum(phases)
    if abs(total.imag) > 1e-10:
        raise NumericError("Kloosterman sum has a non-negligible imaginary part", imag=total.imag)
    return total.real
