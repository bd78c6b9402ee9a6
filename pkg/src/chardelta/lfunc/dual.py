"""Dual sums after the r- and n-sum functional equations.

Each transform returns the direct smoothed sum next to the dual expression.
In "lemma" mode the Gamma ratio inside the weight uses the asymptotic main
term; "exact" mode uses the exact ratio, which turns the dual side into an
identity up to quadrature error.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..arithmetic import DirichletCharacter, gauss_sum
from ..errors import DomainError, PreconditionError
from ..modforms import HeckeCoefficients, delta_coefficients
from ..specialfun import gamma_ratio_exact, gamma_ratio_main
from ..summation import ksum
from ..windows import SmoothWindow, make_window, mellin_line

TAU_MAX = 1500.0
D_TAU = 0.1
SAFETY_FACTOR = 10.0
MODES = ("lemma", "exact")
WINDOWS = ("V_eps", "V_eps_strict", "none")


@lru_cache(maxsize=8)
def _line(kind: str) -> tuple[np.ndarray, np.ndarray]:
    """Mellin transform of a standard window on Re s = 1/2, |tau| <= TAU_MAX."""
    return mellin_line(make_window(kind), 0.5, TAU_MAX, D_TAU)


def dual_window(t: float, eps: float, strict: bool = False) -> SmoothWindow:
    """V_eps flat on [1/3, 3] at least, so the dual terms it cuts are negligible.

    ``strict`` keeps the plain V_eps(t, eps), flat on [t^-eps, t^eps].
    """
    if strict:
        return make_window("V_eps", t=t, eps=eps)
    return make_window("V_eps", t=t, eps=max(eps, math.log(3) / math.log(t)))


def _tau_integral(line_values: np.ndarray, tau: np.ndarray, log_x: np.ndarray, factor: np.ndarray) -> np.ndarray:
    """Trapezoid sum over tau of line(tau) x^(i tau) factor(tau), one entry per x.

    The uniform tau grid is split as tau0 + d(j1 m2 + j2), so the double sum
    becomes one matrix product instead of len(x) * len(tau) exponentials.
    """
    weights = line_values * factor * D_TAU
    m = weights.size
    m2 = int(math.ceil(math.sqrt(m)))
    m1 = int(math.ceil(m / m2))
    grid = np.zeros(m1 * m2, dtype=complex)
    grid[:m] = weights
    grid = grid.reshape(m1, m2)
    step = tau[1] - tau[0]
    y = np.asarray(log_x, dtype=float)
    outer = np.exp(1j * step * m2 * np.outer(y, np.arange(m1)))
    inner = np.exp(1j * step * np.outer(y, np.arange(m2)))
    return np.exp(1j * tau[0] * y) * np.sum(outer * (inner @ grid.T), axis=1)


@dataclass(frozen=True)
class DualReport:
    direct: complex
    transformed: complex
    budget: float
    dual_length: float
    terms: int
    mode: str

    @property
    def difference(self) -> float:
        return abs(self.direct - self.transformed)

    @property
    def passed(self) -> bool:
        return self.difference <= SAFETY_FACTOR * self.budget


def _check_mode(mode: str, window: str) -> None:
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {MODES}")
    if window not in WINDOWS:
        raise PreconditionError(f"window must be one of {WINDOWS}")


@lru_cache(maxsize=8)
def line_cutoff(kind: str, rel: float = 1e-13) -> float:
    """Smallest tau beyond which the Mellin line stays below rel * its maximum."""
    tau, vals = _line(kind)
    mag = np.abs(vals)
    big = np.flatnonzero(mag >= rel * mag.max())
    return float(np.max(np.abs(tau[big])))


def r_direct(chi: DirichletCharacter, T: float, N: int) -> complex:
    """sum_r conj(chi)(r) r^(-iT) U(r/N)."""
    U = make_window("U_plateau")
    r = np.arange(max(1, math.floor(N / 2) + 1), math.ceil(2.5 * N))
    vals = np.conj(chi.values())[r % chi.p] * np.exp(-1j * T * np.log(r)) * U(r / N)
    return complex(ksum(vals))


def w1_weights(p: int, a: int, T: float, N: int, r: np.ndarray, mode: str = "lemma") -> np.ndarray:
    """W_{1,p,a}(r, nu) at T = t + K nu.

    i^(-a)/(2 pi) int U~(1/2 + i tau) (pi N r/p)^(i tau) G(tau) d tau, where
    G(tau) (T/2e)^(-iT) is the Gamma ratio gamma(1/2 + i(T + tau), a).
    In lemma mode G carries W_{1/4+a/2}(T/2), (T/2)^(-i tau) and the
    quadratic phase exp(-i tau^2/(2T)).
    """
    _check_mode(mode, "V_eps")
    tau, u_line = _line("U_plateau")
    alpha = 0.25 + a / 2
    ratio = gamma_ratio_main(alpha, T / 2, tau / 2) if mode == "lemma" else gamma_ratio_exact(alpha, T / 2, tau / 2)
    factor = ratio * np.exp(1j * T * math.log(T / (2 * math.e)))
    integral = _tau_integral(u_line, tau, np.log(math.pi * N * r / p), factor)
    return (1j) ** (-a) / (2 * math.pi) * integral


@lru_cache(maxsize=64)
def _r_kernel(p: int, a: int, T: float, N: int, t: float, eps: float, mode: str, window: str):
    """Dual indices r and the chi-free part of each dual term."""
    length = p * T / (2 * math.pi * N)
    if window != "none":
        cutoff = dual_window(t, eps, strict=window == "V_eps_strict")
        r = np.arange(1, math.ceil(cutoff.support[1] * length) + 1)
        cut = cutoff(r / length)
    else:
        # the tau-integral is stationary at tau = 2 pi N r/p - T
        r = np.arange(1, math.ceil(p * (T + line_cutoff("U_plateau")) / (2 * math.pi * N)) + 1)
        cut = np.ones(r.size)
    if r[-1] > 10**6:
        raise PreconditionError("dual r-range exceeds 1e6")
    keep = cut > 0
    r, cut = r[keep], cut[keep]
    phase = np.exp(-1j * T * np.log(p * T / (2 * math.pi * math.e * r)))
    return r, phase * cut * w1_weights(p, a, T, N, r, mode) / np.sqrt(r), length


def r_dual_transform(
    p: int,
    chi: DirichletCharacter,
    t: float,
    K: float,
    nu: float,
    N: int,
    eps: float = 0.05,
    mode: str = "lemma",
    window: str = "V_eps",
    parity: int | None = None,
) -> DualReport:
    """Direct r-sum against sqrt(N) eps_{conj chi} sum chi(r)/sqrt(r) (pT/(2 pi e r))^(-iT) V_eps W_1.

    The dual length is pT/(2 pi N) with T = t + K nu; V_eps is centred there.
    ``window="none"`` sums every r whose weight is above the quadrature floor.
    ``parity`` overrides a in W_{1,p,a} (a wrong value is the negative control).
    """
    _check_mode(mode, window)
    if chi.p != p or chi.is_trivial:
        raise PreconditionError("chi must be a nontrivial character mod p")
    if K >= N * t ** (-eps):
        raise PreconditionError("the r-dual needs K < N t^(-eps)")
    T = t + K * nu
    a = chi.parity if parity is None else parity
    r, kernel, length = _r_kernel(p, a, float(T), N, float(t), float(eps), mode, window)
    transformed = math.sqrt(N) * gauss_sum(chi.conj()).eps_chi * ksum(chi.values()[r % p] * kernel)
    budget = math.sqrt(p) / (math.sqrt(N) * t ** (1 - eps))
    return DualReport(r_direct(chi, T, N), complex(transformed), budget, length, int(r.size), mode)


def verify_r_dual(p: int, chi: DirichletCharacter, t: float, K: float, nu: float, N: int, **kwargs) -> DualReport:
    return r_dual_transform(p, chi, t, K, nu, N, **kwargs)


def n_direct(form: HeckeCoefficients, chi: DirichletCharacter, K: float, nu: float, N: int) -> complex:
    """sum_n lambda(n) chi(n) n^(iK nu) V(n/N)."""
    V = make_window("V_bump")
    n = np.arange(N + 1, 2 * N)
    lam = form.window(int(n[0]), int(n[-1]))
    vals = lam * chi.values()[n % chi.p] * np.exp(1j * K * nu * np.log(n)) * V(n / N)
    return complex(ksum(vals))


def w2_weights(p: int, k: int, K: float, nu: float, N: int, n: np.ndarray, mode: str = "lemma") -> np.ndarray:
    """W_{2,p}(n, nu): (1/2 pi) int V~(1/2 + i tau) (4 pi^2 n N/p^2)^(i tau) G(tau) d tau.

    G(tau) (K nu/e)^(2iK nu) is gamma_k(1/2 + i tau - iK nu); in lemma mode it
    carries W_{k/2}(-K nu), (K nu)^(-2 i tau) and exp(i tau^2/(K nu)).
    """
    _check_mode(mode, "V_eps")
    tau, v_line = _line("V_bump")
    beta = -K * nu
    ratio = gamma_ratio_main(k / 2, beta, tau) if mode == "lemma" else gamma_ratio_exact(k / 2, beta, tau)
    factor = ratio * np.exp(-2j * K * nu * math.log(K * nu / math.e))
    integral = _tau_integral(v_line, tau, np.log(4 * math.pi**2 * n * N / p**2), factor)
    return integral / (2 * math.pi)


def n_dual_range(p: int, K: float, nu: float, N: int, t: float, eps: float, window: str) -> np.ndarray:
    length = (p * K * nu / (2 * math.pi)) ** 2 / N
    if window != "none":
        cutoff = dual_window(t, eps, strict=window == "V_eps_strict")
        return np.arange(1, math.ceil(cutoff.support[1] * length) + 1)
    # the exact tau-integral is stationary at tau = K nu + 2 pi sqrt(nN)/p
    tau_stop = K * nu + line_cutoff("V_bump")
    return np.arange(1, math.ceil((p * tau_stop / (2 * math.pi)) ** 2 / N) + 1)


@lru_cache(maxsize=64)
def _n_kernel(p: int, k: int, K: float, nu: float, N: int, t: float, eps: float, mode: str, window: str):
    length = (p * K * nu / (2 * math.pi)) ** 2 / N
    n = n_dual_range(p, K, nu, N, t, eps, window)
    if window == "none":
        cut = np.ones(n.size)
    else:
        cut = dual_window(t, eps, strict=window == "V_eps_strict")(n / length)
    keep = cut > 0
    n, cut = n[keep], cut[keep]
    phase = np.exp(1j * K * nu * np.log((p * K * nu) ** 2 / (4 * math.pi**2 * math.e**2 * n)))
    return n, phase * cut * w2_weights(p, k, K, nu, N, n, mode) / np.sqrt(n), length


def n_dual_transform(
    p: int,
    chi: DirichletCharacter,
    K: float,
    nu: float,
    N: int,
    form: HeckeCoefficients | None = None,
    t: float = 500.0,
    eps: float = 0.05,
    mode: str = "lemma",
    window: str = "V_eps",
    eta: complex | None = None,
) -> DualReport:
    """Direct n-sum against eta sqrt(N) sum conj(lambda chi)(n)/sqrt(n) (p^2K^2nu^2/(4pi^2e^2n))^(iK nu) V_eps W_2.

    eta = eps(f) psi(p) chi(M) eps_chi^2 and the dual length is
    p^2 K^2 nu^2/(4 pi^2 N).  ``t`` enters only the error budget
    P sqrt(N)/(K t^(1/2+eps)) and the P^2 > N t^eps precondition.  ``eta``
    overrides the root number (a wrong value is the negative control).
    """
    _check_mode(mode, window)
    if chi.p != p or chi.is_trivial:
        raise PreconditionError("chi must be a nontrivial character mod p")
    if p**2 <= N * t**eps:
        raise PreconditionError("the n-dual needs P^2 > N t^eps")
    n_hi = int(n_dual_range(p, K, nu, N, t, eps, window)[-1])
    if n_hi > 10**6:
        raise PreconditionError("dual n-range exceeds 1e6")
    form = form or delta_coefficients(max(n_hi, 2 * N) + 1)
    if form.form.level % p == 0:
        raise PreconditionError("the n-dual needs (M, p) = 1")
    if form.n_max < max(n_hi, 2 * N):
        raise DomainError(f"need coefficients up to {max(n_hi, 2 * N)}")
    n, kernel, length = _n_kernel(p, form.form.weight, float(K), float(nu), N, float(t), float(eps), mode, window)
    lam = np.conj(form.lam[n]) * np.conj(chi.values()[n % p])
    if eta is None:
        eta = form.form.root_number * form.form.psi(p) * chi(form.form.level) * gauss_sum(chi).eps_chi ** 2
    transformed = eta * math.sqrt(N) * ksum(lam * kernel)
    budget = p * math.sqrt(N) / (K * t ** (0.5 + eps))
    return DualReport(n_direct(form, chi, K, nu, N), complex(transformed), budget, length, int(n.size), mode)
