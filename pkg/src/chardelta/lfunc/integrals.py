"""The nu-integral after both dual transforms and the J-integral after Poisson."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from .. import constants
from ..errors import NoStationaryPoint, PreconditionError
from ..oscillatory import OscillatoryIntegral, integrate_oracle, stationary_phase
from ..params import PipelineParams
from ..windows import make_window
from .dual import w1_weights, w2_weights

# nu-integral ---------------------------------------------------------------------


def nu_phase(p: int, n: int, r: int, t: float, K: float):
    """2 pi h(nu) and its first two derivatives (radians)."""
    c = math.log(p * K * K * r / (2 * math.pi * n))

    def h(nu):
        nu = np.asarray(nu, dtype=float)
        T = t + K * nu
        return 2 * K * nu * np.log(nu) - K * nu * np.log(T) + K * nu * (c - 1) - t * np.log(T)

    def dh(nu):
        nu = np.asarray(nu, dtype=float)
        return 2 * K * np.log(nu) - K * np.log(t + K * nu) + K * c

    def d2h(nu):
        nu = np.asarray(nu, dtype=float)
        return K * (2 * t + K * nu) / (nu * (t + K * nu))

    return h, dh, d2h


def nu_stationary_point(p: int, n: int, r: int, t: float, K: float) -> float:
    """nu0 = (pi n/(p K r)) (sqrt(2 p r t/(pi n) + 1) + 1)."""
    return math.pi * n / (p * K * r) * (math.sqrt(2 * p * r * t / (math.pi * n) + 1) + 1)


@dataclass(frozen=True)
class NuIntegralReport:
    oracle: complex
    stationary: complex | None
    nu0: float
    h1_residual: float
    h0_residual: float
    R: float
    interpolation_error: float = 0.0
    min_slope: float | None = None

    @property
    def relative_error(self) -> float | None:
        if self.stationary is None:
            return None
        return abs(self.oracle - self.stationary) / abs(self.oracle)

    @property
    def allowed_error(self) -> float:
        return 5 / math.sqrt(self.R)


WEIGHT_NODES = 64


def _chebyshev_nodes(lo: float, hi: float, m: int) -> np.ndarray:
    k = np.arange(m)
    return (lo + hi) / 2 + (hi - lo) / 2 * np.cos((2 * k + 1) * math.pi / (2 * m))


def _weight_interpolant(p, n, r, t, K, N, a, k, mode, support):
    """W1(r, nu) W2(n, nu) interpolated in nu from Chebyshev samples.

    The weights are t^eps-inert in nu, so a few dozen nodes resolve them; the
    reported error is the gap to a 3/4-size interpolant on a test grid.
    """
    r_arr = np.array([r], dtype=float)
    n_arr = np.array([n], dtype=float)

    def sample(m):
        x = _chebyshev_nodes(*support, m)
        y = np.array(
            [w1_weights(p, a, t + K * v, N, r_arr, mode)[0] * w2_weights(p, k, K, v, N, n_arr, mode)[0] for v in x]
        )
        return BarycentricInterpolator(x, y)

    fine, coarse = sample(WEIGHT_NODES), sample(3 * WEIGHT_NODES // 4)
    grid = np.linspace(*support, 513)
    err = float(np.max(np.abs(fine(grid) - coarse(grid))) / max(np.max(np.abs(fine(grid))), 1e-300))
    return fine, err


def nu_integral(
    p: int,
    n: int,
    r: int,
    t: float,
    K: float,
    N: int | None = None,
    a: int = 0,
    k: int = 12,
    mode: str = "lemma",
    tol: float = 1e-8,
) -> NuIntegralReport:
    """I(p, n, r) = int V(nu) W1(r, nu) W2(n, nu) e(h(nu)) d nu by oracle and by stationary phase.

    With ``N`` omitted the amplitude is V alone; otherwise the weights are
    interpolated in nu and the relative interpolation error is reported.  ``h1_residual`` is |h'(nu0)|
    and ``h0_residual`` compares 2 pi h(nu0) with -K nu0 - t log(t + K nu0).
    When nu0 leaves supp V only the oracle value is returned, with the
    smallest |2 pi h'| on the support.
    """
    if min(p, n, r) < 1 or t <= 0 or K <= 0:
        raise PreconditionError("need p, n, r >= 1 and t, K > 0")
    V = make_window("V_bump")
    h, dh, d2h = nu_phase(p, n, r, t, K)
    interp_error = 0.0
    if N is None:
        g = V
    else:
        weights, interp_error = _weight_interpolant(p, n, r, t, K, N, a, k, mode, V.support)

        def g(nu):
            nu = np.asarray(nu, dtype=float)
            return V(nu) * weights(nu)

    I = OscillatoryIntegral(g, h, V.support, dh=dh, d2h=d2h, X=1.0, Y=K, Z=1.0)
    oracle = integrate_oracle(I, tol)
    nu0 = nu_stationary_point(p, n, r, t, K)
    h1 = abs(float(dh(nu0)))
    h0 = abs(float(h(nu0)) - (-K * nu0 - t * math.log(t + K * nu0)))
    lo, hi = V.support
    if not lo < nu0 < hi:
        x = np.linspace(lo, hi, 2001)
        return NuIntegralReport(oracle, None, nu0, h1, h0, K, interp_error, float(np.min(np.abs(dh(x)))))
    try:
        sp = stationary_phase(I)
    except NoStationaryPoint:
        return NuIntegralReport(oracle, None, nu0, h1, h0, K, interp_error)
    return NuIntegralReport(oracle, sp.main, nu0, h1, h0, K, interp_error)


# J-integral ----------------------------------------------------------------------


def J_phase(p1: int, p2: int, n: int, r1: int, r2: int, params: PipelineParams):
    """2 pi H(w) with analytic H', H'' (radians)."""
    P, K, N, t = params.P, params.K, params.N, params.t
    A1 = math.sqrt(2 * P * P * K * K * t / (math.pi * N * p1 * r1))
    A2 = math.sqrt(2 * P * P * K * K * t / (math.pi * N * p2 * r2))
    B = P * P * K * K / (2 * N) * (1 / (p2 * r2) - 1 / (p1 * r1)) - n * P * P * K * K / (p1 * p2 * N)
    two_pi = 2 * math.pi

    def H(w):
        w = np.asarray(w, dtype=float)
        return two_pi * ((A2 - A1) * np.sqrt(w) + B * w)

    def dH(w):
        w = np.asarray(w, dtype=float)
        return two_pi * ((A2 - A1) / (2 * np.sqrt(w)) + B)

    def d2H(w):
        w = np.asarray(w, dtype=float)
        return two_pi * (A1 - A2) / (4 * w**1.5)

    return H, dH, d2H


def J_second_derivative_display(p1: int, p2: int, r1: int, r2: int, params: PipelineParams, w):
    """H''(w) in the product form P K sqrt(t/(8 pi N p1 p2 r1 r2 w^3)) (p2r2 - p1r1)/(sqrt(p1r1) + sqrt(p2r2))."""
    P, K, N, t = params.P, params.K, params.N, params.t
    w = np.asarray(w, dtype=float)
    a, b = p1 * r1, p2 * r2
    return P * K * np.sqrt(t / (8 * math.pi * N * a * b * w**3)) * (b - a) / (math.sqrt(a) + math.sqrt(b))


def J_bound_shape(D: int, params: PipelineParams) -> float:
    """min{1, sqrt(P^2 t/(N K D))} t^eps."""
    P, K, N, t = params.P, params.K, params.N, params.t
    core = 1.0 if D == 0 else min(1.0, math.sqrt(P * P * t / (N * K * D)))
    return core * params.t_eps


@dataclass(frozen=True)
class JReport:
    value: complex
    D: int
    bound: float
    constant: float

    @property
    def passed(self) -> bool:
        return abs(self.value) <= self.bound


def J_integral(
    p1: int,
    p2: int,
    n: int,
    r1: int,
    r2: int,
    params: PipelineParams,
    tol: float = 1e-10,
    constant: float | None = None,
) -> JReport:
    """J = int V_eps(w) e(H(w)) dw against C min{1, sqrt(P^2 t/(NK|p2r2 - p1r1|))} t^eps.

    The weights W_p1, W_p2 are bounded t^eps-inert factors whose flat part is
    not given in closed form; they are taken as 1 here.
    """
    if min(p1, p2, r1, r2) < 1:
        raise PreconditionError("need p1, p2, r1, r2 >= 1")
    C = constants.J_BOUND_C if constant is None else constant
    window = make_window("V_eps", t=params.t, eps=params.eps)
    H, dH, d2H = J_phase(p1, p2, n, r1, r2, params)
    I = OscillatoryIntegral(window, H, window.support, dh=dH, d2h=d2H)
    value = integrate_oracle(I, tol)
    D = abs(p2 * r2 - p1 * r1)
    return JReport(complex(value), D, C * J_bound_shape(D, params), C)


def calibrate_J_constant(p1: int, p2: int, r1: int, r2: int, params: PipelineParams, margin: float = 1.5) -> float:
    """|J| / (min{...} t^eps) on one reference instance with n = 0, times ``margin``."""
    value = J_integral(p1, p2, 0, r1, r2, params, constant=1.0)
    return margin * abs(value.value) / J_bound_shape(value.D, params)
