"""Trivial delta methods with additive and multiplicative characters.

The exact split of S(N) into S0 + S1 + S* is computed term by term so that
the residual measures only the delta lemma's own error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arithmetic import TWO_PI, characters, e, is_prime
from .errors import PreconditionError
from .lfunc.direct import S_direct, twist
from .oscillatory import OscillatoryIntegral, integrate_oracle
from .params import PipelineParams
from .summation import ksum
from .windows import SmoothWindow, make_window

__all__ = [
    "PipelineParams",
    "Decomposition",
    "delta_additive",
    "delta_multiplicative",
    "character_matrix",
    "decompose_S",
    "nu_transform",
]


def nu_transform(V: SmoothWindow, omega: float, tol: float = 1e-12) -> complex:
    """int V(nu) exp(i omega nu) d nu by oracle quadrature."""
    if omega == 0:
        return complex(integrate_oracle(OscillatoryIntegral(V, lambda x: 0 * x, V.support), tol))
    I = OscillatoryIntegral(
        V, lambda x: omega * x, V.support, dh=lambda x: omega + 0 * x, d2h=lambda x: 0 * x
    )
    return complex(integrate_oracle(I, tol))


def delta_additive(n: int, q: int, X: float, V: SmoothWindow | None = None, tol: float = 1e-12) -> complex:
    """(1/q) sum_{alpha mod q} e(n alpha/q) int V(x) e(n x/X) dx, approximately delta(n = 0)."""
    if q < 1 or X <= 0:
        raise PreconditionError("need q >= 1 and X > 0")
    V = V or make_window("V_bump")
    alpha = np.arange(q)
    additive = ksum(e((n * alpha % q) / q)) / q
    return complex(additive) * nu_transform(V, TWO_PI * n / X, tol)


def character_matrix(p: int) -> np.ndarray:
    """Rows chi_j(a) for a = 0..p-1, trivial character first; shape (p-1, p)."""
    return np.array([chi.values() for chi in characters(p)])


def _orthogonality(p: int, n: int, r: int) -> complex:
    """(1/phi(p)) sum over all chi mod p of chi(n) conj(chi(r))."""
    table = character_matrix(p)
    return complex(ksum(table[:, n % p] * np.conj(table[:, r % p]))) / (p - 1)


def delta_multiplicative(
    n: int,
    r: int,
    p: int,
    K: float,
    V: SmoothWindow | None = None,
    *,
    N: int | None = None,
    eps: float = 0.05,
    tol: float = 1e-12,
) -> complex:
    """(1/phi(p)) sum_chi chi(n) conj(chi(r)) int V(nu) (n/r)^(iK nu) d nu, approximately delta(n = r).

    When ``N`` is given the lemma's ranges n, r in [N, 2N] and pK > N^(1+eps)
    are enforced.
    """
    if not is_prime(p) or p == 2:
        raise PreconditionError("p must be an odd prime")
    if r % p == 0:
        raise PreconditionError("the lemma needs p not dividing r")
    if n < 1 or r < 1 or K <= 0:
        raise PreconditionError("need n, r >= 1 and K > 0")
    if N is not None:
        if not (N <= n <= 2 * N and N <= r <= 2 * N):
            raise PreconditionError("n and r must lie in [N, 2N]")
        if p * K <= N ** (1 + eps):
            raise PreconditionError("the lemma needs pK > N^(1+eps)")
    V = V or make_window("V_bump")
    weight = _orthogonality(p, n, r)
    return weight * nu_transform(V, K * math.log(n / r), tol)


@dataclass(frozen=True)
class Decomposition:
    S: complex
    S0: complex
    S1: complex
    Sstar: complex
    quadrature_bound: float
    off_diagonal: complex

    @property
    def residual(self) -> complex:
        return self.S - self.S0 - self.S1 - self.Sstar

    def as_dict(self) -> dict:
        return {
            "S": self.S,
            "S0": self.S0,
            "S1": self.S1,
            "Sstar": self.Sstar,
            "residual": self.residual,
            "quadrature_bound": self.quadrature_bound,
            "off_diagonal": self.off_diagonal,
        }


def _support_integers(window: SmoothWindow, N: int) -> np.ndarray:
    lo, hi = window.support
    return np.arange(max(1, math.floor(lo * N) + 1), math.ceil(hi * N))


def decompose_S(
    params: PipelineParams,
    V: SmoothWindow | None = None,
    U: SmoothWindow | None = None,
    tol: float = 1e-12,
) -> Decomposition:
    """S(N) and the three pieces of the delta-method split, each computed directly.

    S0 keeps the factor n^(-it).  ``off_diagonal`` is the lemma's error: the
    contribution of pairs n = r mod p with n != r, which the residual should
    reproduce up to ``quadrature_bound``.
    """
    if not params.pk_large:
        raise PreconditionError("decompose_S needs PK > N^(1+eps)")
    V = V or make_window("V_bump")
    U = U or make_window("U_plateau")
    N, t, K = params.N, params.t, params.K
    n = _support_integers(V, N)
    r = _support_integers(U, N)
    A = params.form.window(int(n[0]), int(n[-1])) * V(n / N)
    B = twist(r, t) * U(r / N)
    AB = np.outer(A, B)

    cache: dict[Fraction, complex] = {}
    integrals = np.empty(AB.shape, dtype=complex)
    for i, ni in enumerate(n.tolist()):
        for j, rj in enumerate(r.tolist()):
            key = Fraction(ni, rj)
            if key not in cache:
                cache[key] = nu_transform(V, K * math.log(ni / rj), tol)
            integrals[i, j] = cache[key]

    s0_terms, s1_terms, star_terms, off_terms = [], [], [], []
    qbound = 0.0
    same = n[:, None] == r[None, :]
    for p in params.primes:
        table = character_matrix(p)
        prim = table[1:].T @ np.conj(table[1:])
        triv = np.outer(table[0], table[0]).real
        nm, rm = n % p, r % p
        star_w = prim[np.ix_(nm, rm)] / (p - 1)
        triv_w = triv[np.ix_(nm, rm)] / (p - 1)
        divisible = nm == 0
        s0_terms.append(ksum(A[divisible] * twist(n[divisible], t)))
        s1_terms.append(ksum(AB * triv_w * integrals))
        star_terms.append(ksum(AB * star_w * integrals))
        congruent = (nm[:, None] == rm[None, :]) & ~divisible[:, None] & ~same
        off_terms.append(ksum(AB[congruent] * integrals[congruent]))
        qbound += tol * float(np.sum(np.abs(AB) * (np.abs(star_w) + triv_w)))

    scale = 1 / params.P_star
    return Decomposition(
        S=S_direct(params, V),
        S0=ksum(s0_terms) * scale,
        S1=ksum(s1_terms) * scale,
        Sstar=ksum(star_terms) * scale,
        quadrature_bound=qbound * scale,
        off_diagonal=-ksum(off_terms) * scale,
    )
