"""L-functions of holomorphic cusp forms: functional equations and the AFE.

Completed L-functions use Lambda(s) = (Q/2pi)^s Gamma(s + kappa) L(s) with
kappa = (k-1)/2 and analytic conductor Q = sqrt(M) (times p for a twist).
Values away from the convergent half-plane come from the incomplete-Gamma
smoothed series

    Lambda(s) = sum a(n) (2 pi n/Q)^(-s) Gamma(s + kappa, 2 pi n x0/Q)
              + eta sum b(n) (2 pi n/Q)^(s-1) Gamma(1 - s + kappa, 2 pi n/(Q x0)),

which holds for every x0 > 0 exactly when the root number eta is right.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from ..arithmetic import DirichletCharacter, gauss_sum
from ..errors import DomainError, NumericError, PreconditionError
from ..modforms import HeckeCoefficients, delta_coefficients
from ..specialfun import log_gamma
from ..summation import ksum
from ..windows import smooth_step
from .dirichlet import FEReport

SMOOTHING_POINTS = (1.13, 0.87)  # x0 for the two sides; their product is not 1
_MP_DPS = 40
_TAIL_ARGUMENT = 75.0  # Gamma(w, X) ~ X^(w-1) e^(-X) is negligible beyond this X


@dataclass(frozen=True)
class Twist:
    """Dirichlet coefficients and Gamma data of f or f (x) chi."""

    coeffs: object  # callable n -> mpmath number
    dual: object
    kappa: float
    Q: float
    root_number: complex


def _mp_lambda(form: HeckeCoefficients, n: int):
    """lambda(n) at working precision: exact integers when the table has them."""
    if form.raw is not None:
        return mpmath.mpf(int(form.raw[n])) / mpmath.power(n, mpmath.mpf(form.form.weight - 1) / 2)
    return mpmath.mpmathify(complex(form.lam[n]))


def form_twist(form: HeckeCoefficients, chi: DirichletCharacter | None = None, root_number=None) -> Twist:
    """Twist data for f or f (x) chi; ``root_number`` overrides the lemma's value."""
    M = form.form.level
    kappa = (form.form.weight - 1) / 2
    if chi is None:
        eta = form.form.root_number if root_number is None else root_number
        coeffs = lambda n: _mp_lambda(form, n)
        dual = lambda n: mpmath.conj(_mp_lambda(form, n))
        return Twist(coeffs, dual, kappa, math.sqrt(M), complex(eta))
    p = chi.p
    if M % p == 0:
        raise PreconditionError("the twist needs (M, p) = 1")
    eps = gauss_sum(chi).eps_chi
    eta = form.form.root_number * form.form.psi(p) * chi(M) * eps**2 if root_number is None else root_number
    table = chi.values()
    coeffs = lambda n: _mp_lambda(form, n) * mpmath.mpmathify(complex(table[n % p]))
    dual = lambda n: mpmath.conj(_mp_lambda(form, n)) * mpmath.mpmathify(complex(np.conj(table[n % p])))
    return Twist(coeffs, dual, kappa, p * math.sqrt(M), complex(eta))


def _terms_needed(Q: float, x0: float) -> int:
    return int(math.ceil(_TAIL_ARGUMENT * Q / (2 * math.pi * min(x0, 1 / x0)))) + 1


def smoothed_completed_L(twist: Twist, s: complex, x0: float = 1.0, dual: bool = False) -> complex:
    """Lambda(s) of the twist (or its dual) from the incomplete-Gamma series at split point x0."""
    a, b = (twist.dual, twist.coeffs) if dual else (twist.coeffs, twist.dual)
    eta = np.conj(twist.root_number) if dual else twist.root_number
    n_max = _terms_needed(twist.Q, x0)
    with mpmath.workdps(_MP_DPS):
        s_mp = mpmath.mpc(s)
        kappa = mpmath.mpf(twist.kappa)
        scale = 2 * mpmath.pi / mpmath.mpf(twist.Q)
        first, second = [], []
        for n in range(1, n_max + 1):
            base = scale * n
            first.append(a(n) * mpmath.power(base, -s_mp) * mpmath.gammainc(s_mp + kappa, base * x0))
            second.append(b(n) * mpmath.power(base, s_mp - 1) * mpmath.gammainc(1 - s_mp + kappa, base / x0))
        total = mpmath.fsum(first) + mpmath.mpc(eta) * mpmath.fsum(second)
        return complex(total)


def _needed_coefficients(twist_Q: float) -> int:
    return _terms_needed(twist_Q, min(SMOOTHING_POINTS))


def _normalization_shift(s: complex, normalization: str) -> complex:
    """Factor turning the (2 pi)-normalized Lambda into the requested one at level 1."""
    if normalization == "2pi":
        return 1.0
    if normalization == "pi":
        return cmath.exp(s * math.log(2.0))  # pi^-s = 2^s (2 pi)^-s
    raise PreconditionError("normalization must be '2pi' or 'pi'")


def _check_form(form: HeckeCoefficients, n_needed: int) -> None:
    if form.form.level != 1 or form.form.nebentypus is not None:
        raise PreconditionError("functional-equation checks support the level-1 built-in setting")
    if form.n_max < n_needed:
        raise PreconditionError(f"need coefficients up to {n_needed}")


def verify_cuspform_fe(
    form: HeckeCoefficients | None = None,
    s: complex = 0.5,
    root_number=None,
    normalization: str = "2pi",
    tolerance: float = 1e-7,
) -> FEReport:
    """Lambda(s, f) against eps(f) Lambda(1 - s, conj f), each side at its own split point."""
    if abs(complex(s).imag) > 30:
        raise DomainError("verify_cuspform_fe supports |Im s| <= 30")
    twist = form_twist(form or delta_coefficients(1000), None, root_number)
    form = form or delta_coefficients(1000)
    _check_form(form, _needed_coefficients(twist.Q))
    s = complex(s)
    lhs = smoothed_completed_L(twist, s, SMOOTHING_POINTS[0]) * _normalization_shift(s, normalization)
    rhs = (
        twist.root_number
        * smoothed_completed_L(twist, 1 - s, SMOOTHING_POINTS[1], dual=True)
        * _normalization_shift(1 - s, normalization)
    )
    return FEReport("cuspform", s, lhs, rhs, tolerance, notes=f"normalization={normalization}")


def verify_twisted_fe(
    form: HeckeCoefficients | None,
    chi: DirichletCharacter,
    s: complex,
    root_number=None,
    tolerance: float = 1e-6,
) -> FEReport:
    """Lambda(s, f (x) chi) against eps(f) psi(p) chi(M) eps_chi^2 Lambda(1 - s, conj f (x) conj chi)."""
    if chi.is_trivial:
        raise DomainError("the twist needs a nontrivial (primitive) character")
    if abs(complex(s).imag) > 30:
        raise DomainError("verify_twisted_fe supports |Im s| <= 30")
    form = form or delta_coefficients(2000)
    twist = form_twist(form, chi, root_number)
    _check_form(form, _needed_coefficients(twist.Q))
    s = complex(s)
    lhs = smoothed_completed_L(twist, s, SMOOTHING_POINTS[0])
    rhs = twist.root_number * smoothed_completed_L(twist, 1 - s, SMOOTHING_POINTS[1], dual=True)
    return FEReport("twisted", s, lhs, rhs, tolerance, notes=f"p={chi.p}, index={chi.index}")


def L_value(form: HeckeCoefficients, s: complex, x0: float = 1.0) -> complex:
    """L(s, f) from the smoothed series, divided by its Gamma factor."""
    twist = form_twist(form)
    s = complex(s)
    completed = smoothed_completed_L(twist, s, x0)
    return completed / cmath.exp(s * math.log(twist.Q / (2 * math.pi)) + log_gamma(s + twist.kappa))


# Approximate functional equation -------------------------------------------------

AFE_WEIGHT_FLOOR = 1e-13
_G_TAIL = 52.0  # |G(c + iv)| < exp(-52) beyond the truncation


def _gamma_ratio_line(s: complex, u: np.ndarray, kappa: float, Q: float) -> np.ndarray:
    """gamma_f(s + u)/gamma_f(s) with gamma_f(s) = (Q/2pi)^s Gamma(s + kappa)."""
    return np.exp(u * math.log(Q / (2 * math.pi)) + log_gamma(s + u + kappa) - log_gamma(s + kappa))


def _v_max(G_scale: float, c: float) -> float:
    """|G(c + iv)| e^(pi |v|/2) < exp(-52) beyond v_max; e^(pi |v|/2) bounds the Gamma ratio's growth."""
    g2 = G_scale**2
    return g2 / 2 * (math.pi / 2 + math.sqrt(math.pi**2 / 4 + 4 * (_G_TAIL + c * c / g2) / g2))


def _afe_line(s: complex, y: np.ndarray, G_scale: float, kappa: float, Q: float, c: float, h: float):
    v_max = _v_max(G_scale, c)
    v = np.arange(-v_max, v_max + h / 2, h)
    u = c + 1j * v
    weight = np.exp(u * u / G_scale**2) / u * _gamma_ratio_line(s, u, kappa, Q)
    # (1/2 pi i) int ... du with du = i dv
    phase = np.exp(-np.outer(np.log(y), u))
    return (phase @ weight) * h / (2 * math.pi)


def afe_weight(
    s: complex, y, G_scale: float = 1.0, kappa: float = 5.5, Q: float = 1.0, tol: float = 1e-12
) -> np.ndarray:
    """V_s(y) = (1/2 pi i) int G(u)/u gamma_f(s+u)/gamma_f(s) y^(-u) du with G(u) = exp(u^2/G^2).

    Points y >= 1 use the line Re u = 1; points y < 1 use Re u = -c' plus the
    residue 1 at u = 0.  The trapezoid step halves until successive values
    agree to ``tol``.
    """
    s = complex(s)
    if not -0.5 <= s.real <= 1.5:
        raise DomainError("afe_weight supports -1/2 <= Re s <= 3/2")
    if G_scale <= 0:
        raise DomainError("G_scale must be positive")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y <= 0):
        raise DomainError("afe_weight needs y > 0")
    out = np.empty(y.shape, dtype=complex)
    left = -min(1.0, (s.real + kappa) / 2)
    for mask, c, residue in ((y >= 1, 1.0, 0.0), (y < 1, left, 1.0)):
        if not np.any(mask):
            continue
        h = 0.25
        prev = _afe_line(s, y[mask], G_scale, kappa, Q, c, h)
        for _ in range(12):
            h /= 2
            cur = _afe_line(s, y[mask], G_scale, kappa, Q, c, h)
            if np.max(np.abs(cur - prev)) < tol:
                break
            prev = cur
        else:
            raise NumericError("afe_weight trapezoid did not converge", s=s, G_scale=G_scale)
        out[mask] = cur + residue
    return out


def _afe_step(s: complex, y_probe: np.ndarray, G_scale: float, kappa: float, Q: float) -> float:
    """Trapezoid step that meets 1e-13 |s + kappa| at every probe point (all on Re u = 1).

    On Re u = 1 the Gamma ratio is of size |s + kappa| and G times its growth
    peaks near exp(pi^2 G^2/16); together they set the rounding floor.
    """
    floor = 1e-13 * max(1.0, abs(s + kappa)) * math.exp(math.pi**2 * G_scale**2 / 16)
    h = 0.25
    prev = _afe_line(s, y_probe, G_scale, kappa, Q, 1.0, h)
    for _ in range(12):
        cur = _afe_line(s, y_probe, G_scale, kappa, Q, 1.0, h / 2)
        if np.max(np.abs(cur - prev)) < floor:
            return h / 2
        prev, h = cur, h / 2
    raise NumericError("AFE step selection failed", s=s)


def _afe_length(s: complex, G_scale: float, kappa: float, Q: float, h: float) -> int:
    """First n beyond which |V_s(n)| stays under the floor, found on a geometric probe."""
    probe = np.geomspace(1, 1e8, 321)
    vals = np.abs(_afe_line(s, probe, G_scale, kappa, Q, 1.0, h))
    above = np.flatnonzero(vals >= AFE_WEIGHT_FLOOR)
    if above.size == 0:
        return 1
    if above[-1] == probe.size - 1:
        raise NumericError("AFE weight does not decay within 1e8", s=s, G_scale=G_scale)
    return int(math.ceil(probe[above[-1] + 1]))


def _afe_sum(lam: np.ndarray, s: complex, G_scale: float, kappa: float, Q: float, h: float, length: int) -> complex:
    n = np.arange(1, length + 1, dtype=float)
    pieces = []
    for lo in range(0, length, 20000):
        block = n[lo : lo + 20000]
        weights = _afe_line(s, block, G_scale, kappa, Q, 1.0, h)
        pieces.append(ksum(lam[lo + 1 : lo + 1 + block.size] * np.exp(-s * np.log(block)) * weights))
    return complex(ksum(pieces))


@dataclass(frozen=True)
class AFEValue:
    value: complex
    lengths: tuple[int, int]
    G_scale: float
    notes: str = "R term omitted (exact AFE for a cusp form)"


def afe_L_value(
    t: float, form: HeckeCoefficients | None = None, G_scale: float = 1.0, sigma: float = 0.5
) -> AFEValue:
    """L(sigma + it, f) from the two AFE sums, each truncated where |V| < 1e-13."""
    s = complex(sigma, t)
    kappa = 5.5 if form is None else (form.form.weight - 1) / 2
    Q = 1.0 if form is None else math.sqrt(form.form.level)
    eps = 1.0 if form is None else complex(form.form.root_number)
    probe = np.geomspace(1, max(10.0, 10 * (abs(t) + kappa)), 9)
    h1 = _afe_step(s, probe, G_scale, kappa, Q)
    h2 = _afe_step(1 - s, probe, G_scale, kappa, Q)
    len1 = _afe_length(s, G_scale, kappa, Q, h1)
    len2 = _afe_length(1 - s, G_scale, kappa, Q, h2)
    if form is None:
        form = delta_coefficients(max(len1, len2, 16))
    if form.n_max < max(len1, len2):
        raise PreconditionError(f"AFE needs coefficients up to {max(len1, len2)}")
    first = _afe_sum(form.lam, s, G_scale, kappa, Q, h1, len1)
    second = _afe_sum(np.conj(form.lam), 1 - s, G_scale, kappa, Q, h2, len2)
    ratio = np.exp(
        (1 - 2 * s) * math.log(Q / (2 * math.pi)) + log_gamma(1 - s + kappa) - log_gamma(s + kappa)
    )
    return AFEValue(complex(first + eps * ratio * second), (len1, len2), G_scale)


def smoothed_dirichlet_series(form: HeckeCoefficients, s: complex, X: float) -> complex:
    """sum lambda(n) n^(-s) w(n/X) with w = 1 on [0, 1] and 0 beyond 2 (convergent regime)."""
    if complex(s).real <= 1:
        raise DomainError("the smoothed series is an oracle only for Re s > 1")
    n_hi = int(math.ceil(2 * X))
    if form.n_max < n_hi:
        raise PreconditionError(f"need coefficients up to {n_hi}")
    n = np.arange(1, n_hi + 1, dtype=float)
    w = smooth_step(2 - n / X)[0]
    return complex(ksum(form.lam[1 : n_hi + 1] * np.exp(-complex(s) * np.log(n)) * w))
