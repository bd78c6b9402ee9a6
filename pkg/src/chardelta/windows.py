"""Smooth compactly supported weights V, U and V_eps.

Values and derivatives come from truncated Taylor arithmetic ("jets"):
each window is a composition of exp, reciprocal and products, so pushing
the jet of x through the same composition yields every derivative up to
the requested order exactly up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NumericError, PreconditionError

MAX_ORDER = 12
BUMP_RAW_INTEGRAL = 0.007029858406609657  # integral of exp(-1/((x-1)(2-x))) over (1, 2)
_EXP_CUTOFF = 700.0


# --- truncated Taylor series along the last-but-one axis: c[k] = f^(k)(x)/k! ---

def jet_var(x: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros((order + 1,) + x.shape)
    out[0] = x
    if order:
        out[1] = 1.0
    return out


def jet_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    for k in range(a.shape[0]):
        out[k] = np.einsum("i...,i...->...", a[: k + 1], b[k::-1])
    return out


def jet_exp(a: np.ndarray) -> np.ndarray:
    # f = exp(a): k f_k = sum_{j=1..k} j a_j f_{k-j}
    out = np.zeros_like(a)
    out[0] = np.exp(a[0])
    for k in range(1, a.shape[0]):
        out[k] = sum(j * a[j] * out[k - j] for j in range(1, k + 1)) / k
    return out


def jet_recip(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    out[0] = 1.0 / a[0]
    for k in range(1, a.shape[0]):
        out[k] = -sum(a[j] * out[k - j] for j in range(1, k + 1)) * out[0]
    return out


def jet_log(a: np.ndarray) -> np.ndarray:
    # f = log(a): a_0 k f_k = k a_k - sum_{j=1..k-1} j f_j a_{k-j}
    out = np.zeros_like(a)
    out[0] = np.log(a[0])
    for k in range(1, a.shape[0]):
        acc = k * a[k] - sum(j * out[j] * a[k - j] for j in range(1, k))
        out[k] = acc / (k * a[0])
    return out


def jet_affine(a: np.ndarray, scale: float, shift: float) -> np.ndarray:
    out = a * scale
    out[0] += shift
    return out


def jet_to_derivatives(a: np.ndarray) -> np.ndarray:
    fact = np.array([math.factorial(k) for k in range(a.shape[0])], dtype=float)
    return a * fact.reshape((-1,) + (1,) * (a.ndim - 1))


def _step_jet(y: np.ndarray) -> np.ndarray:
    """Jet of s(y) = B(y)/(B(y)+B(1-y)) with B(y) = exp(-1/y), at points 0 < y < 1."""
    # s = logistic(h) with h = 1/(1-y) - 1/y
    one_minus = jet_affine(y, -1.0, 1.0)
    h = jet_recip(one_minus) - jet_recip(y)
    pos = h[0] >= 0
    sign = np.where(pos, -1.0, 1.0)
    e = jet_exp(h * sign)  # exp(-|h|)
    one_plus = jet_affine(e, 1.0, 1.0)
    inv = jet_recip(one_plus)
    return np.where(pos, inv, jet_mul(e, inv))


def smooth_step(y, order: int = 0) -> np.ndarray:
    """s(y) and its derivatives: 0 for y <= 0, 1 for y >= 1."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.zeros((order + 1,) + y.shape)
    out[0][y >= 1] = 1.0
    inner = (y > 0) & (y < 1)
    # beyond the cutoff B underflows relative to its partner; the step is flat
    flat_lo = inner & (1 / np.where(inner, y, 1) - 1 / np.where(inner, 1 - y, 1) > _EXP_CUTOFF)
    flat_hi = inner & (1 / np.where(inner, 1 - y, 1) - 1 / np.where(inner, y, 1) > _EXP_CUTOFF)
    out[0][flat_hi] = 1.0
    live = inner & ~flat_lo & ~flat_hi
    if np.any(live):
        jet = _step_jet(jet_var(y[live], order))
        out[:, live] = jet_to_derivatives(jet)
    return out


@dataclass(frozen=True)
class SmoothWindow:
    """A compactly supported smooth weight with derivative evaluators.

    ``kind`` is one of "V_bump", "U_plateau", "V_eps" or "custom".
    """

    kind: str
    support: tuple[float, float]
    normalization: float = 1.0
    params: dict = field(default_factory=dict, compare=False)
    custom: Callable | None = field(default=None, compare=False, repr=False)

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        out = self.derivatives(x, 0)[0]
        return float(out[0]) if scalar else out

    def derivative(self, x, j: int):
        scalar = np.ndim(x) == 0
        out = self.derivatives(x, j)[j]
        return float(out[0]) if scalar else out

    def derivatives(self, x, order: int) -> np.ndarray:
        """Array of shape (order+1, len(x)) with w^(j)(x) for j = 0..order."""
        if not 0 <= order <= MAX_ORDER:
            raise PreconditionError(f"derivative order must lie in [0, {MAX_ORDER}]")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros((order + 1,) + x.shape)
        lo, hi = self.support
        inside = (x > lo) & (x < hi)
        if np.any(inside):
            out[:, inside] = self._inside(x[inside], order)
        return out * self.normalization

    def _inside(self, x: np.ndarray, order: int) -> np.ndarray:
        if self.kind == "V_bump":
            q = (x - 1.0) * (2.0 - x)
            live = 1.0 / q < _EXP_CUTOFF
            out = np.zeros((order + 1,) + x.shape)
            if np.any(live):
                xj = jet_var(x[live], order)
                qj = jet_mul(jet_affine(xj, 1.0, -1.0), jet_affine(xj, -1.0, 2.0))
                out[:, live] = jet_to_derivatives(jet_exp(-jet_recip(qj)))
            return out
        if self.kind == "U_plateau":
            a = smooth_step(2.0 * (x - 0.5), order) * (2.0 ** np.arange(order + 1))[:, None]
            b = smooth_step(2.0 * (2.5 - x), order) * ((-2.0) ** np.arange(order + 1))[:, None]
            return _leibniz(a, b)
        if self.kind == "V_eps":
            width = self.params["eps"] * math.log(self.params["t"])
            return self._v_eps(x, order, width)
        if self.kind == "custom":
            return _finite_differences(self.custom, x, order, self.support)
        raise PreconditionError(f"unknown window kind {self.kind!r}")

    @staticmethod
    def _v_eps(x: np.ndarray, order: int, width: float) -> np.ndarray:
        # s(2 - u) s(2 + u) with u = log(x)/width, differentiated in x via jets
        xj = jet_var(x, order)
        u = jet_log(xj) / width
        out = np.ones((order + 1,) + x.shape)
        out[1:] = 0.0
        for sign in (-1.0, 1.0):
            arg = jet_affine(u, sign, 2.0)
            y0 = arg[0]
            part = np.zeros_like(arg)
            part[0][y0 >= 1] = 1.0
            live = (y0 > 0) & (y0 < 1)
            if np.any(live):
                val = smooth_step(y0[live], 0)[0]
                core = (val > 0) & (val < 1)
                idx = np.flatnonzero(live)[core]
                part[:, idx] = _step_jet(arg[:, idx]) if idx.size else part[:, idx]
                part[0, np.flatnonzero(live)[val >= 1]] = 1.0
            out = jet_mul(out, part)
        return jet_to_derivatives(out)

    def integral(self) -> float:
        """Integral over the support (trapezoid on a fine grid; the ends are flat)."""
        lo, hi = self.support
        x = np.linspace(lo, hi, 20001)
        return float(np.trapezoid(self(x), x))


def _leibniz(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    order = a.shape[0] - 1
    out = np.zeros_like(a)
    for j in range(order + 1):
        out[j] = sum(math.comb(j, i) * a[i] * b[j - i] for i in range(j + 1))
    return out


def _finite_differences(fn: Callable, x: np.ndarray, order: int, support) -> np.ndarray:
    out = np.zeros((order + 1,) + x.shape)
    out[0] = fn(x)
    if order:
        h = 1e-2 * (support[1] - support[0])
        for j in range(1, order + 1):
            # central difference of order j on a 2j+1 stencil, step scaled for accuracy
            step = h * 0.5
            acc = np.zeros_like(x)
            for i in range(j + 1):
                acc += (-1) ** i * math.comb(j, i) * fn(x + (j / 2 - i) * step)
            out[j] = acc / step**j
    return out


def make_window(kind: str, normalize: bool = True, **params) -> SmoothWindow:
    """Build one of the standard windows.

    V_bump: c exp(-1/((x-1)(2-x))) on (1, 2), with c giving integral 1 when normalized.
    U_plateau: 1 on [1, 2], supported in (1/2, 5/2).
    V_eps: 1 on [t^-eps, t^eps], supported in (t^-2eps, t^2eps); needs t > 1, eps > 0.
    custom: pass fn=callable and support=(lo, hi); derivatives by finite differences.
    """
    if kind == "V_bump":
        return SmoothWindow("V_bump", (1.0, 2.0), 1.0 / BUMP_RAW_INTEGRAL if normalize else 1.0)
    if kind == "U_plateau":
        return SmoothWindow("U_plateau", (0.5, 2.5))
    if kind == "V_eps":
        t, eps = params.get("t"), params.get("eps", 0.05)
        if t is None or t <= 1 or eps <= 0:
            raise PreconditionError("V_eps needs t > 1 and eps > 0")
        lo, hi = t ** (-2 * eps), t ** (2 * eps)
        return SmoothWindow("V_eps", (lo, hi), params={"t": float(t), "eps": float(eps)})
    if kind == "custom":
        fn, support = params.get("fn"), params.get("support")
        if fn is None or support is None or not support[0] < support[1]:
            raise PreconditionError("custom windows need fn and an interval support=(lo, hi)")
        return SmoothWindow("custom", tuple(map(float, support)), custom=fn)
    raise PreconditionError(f"unknown window kind {kind!r}")


@dataclass(frozen=True)
class InertnessReport:
    X: float
    by_order: tuple[float, ...]  # max |x^j w^(j)(x)| / X^j for j = 0..j_max

    @property
    def worst(self) -> float:
        return max(self.by_order)


def inertness_check(w: SmoothWindow, X: float, j_max: int, samples: int = 4001) -> InertnessReport:
    if not 0 <= j_max <= 8:
        raise PreconditionError("j_max must lie in [0, 8]")
    lo, hi = w.support
    x = np.linspace(lo, hi, samples)[1:-1]
    ders = w.derivatives(x, j_max)
    vals = tuple(float(np.max(np.abs(x**j * ders[j]))) / X**j for j in range(j_max + 1))
    return InertnessReport(float(X), vals)


def _log_samples(w: SmoothWindow, sigma: complex, n: int) -> tuple[np.ndarray, np.ndarray, float]:
    lo, hi = w.support
    y0, y1 = math.log(lo), math.log(hi)
    y = np.linspace(y0, y1, n + 1)
    g = w(np.exp(y)) * np.exp(sigma * y)
    return y, g, (y1 - y0) / n


def mellin_transform(w: SmoothWindow, s: complex, tol: float = 1e-12) -> complex:
    """Integral of w(x) x^(s-1) dx, by trapezoid refinement in y = log x.

    The integrand vanishes to infinite order at both ends, so the trapezoid
    rule converges faster than any power once the oscillation is resolved.
    """
    s = complex(s)
    if not -5 <= s.real <= 5:
        raise PreconditionError("mellin_transform needs -5 <= Re(s) <= 5")
    if w.support[0] <= 0:
        raise PreconditionError("window support must lie in (0, inf)")
    width = math.log(w.support[1] / w.support[0])
    n = max(64, 2 ** math.ceil(math.log2(4 * abs(s.imag) * width / math.pi + 1)))
    prev = None
    while n <= 2**22:
        _, g, dy = _log_samples(w, s, n)
        val = complex(np.sum(g) * dy)
        if prev is not None and abs(val - prev) <= tol:
            return val
        prev = val
        n *= 2
    raise NumericError("Mellin quadrature did not converge", s=s, last=prev)


def mellin_line(w: SmoothWindow, sigma: float, tau_max: float, d_tau: float, nyquist: float | None = None):
    """Mellin transform on sigma + i tau for tau = k d_tau, |tau| <= tau_max, via one FFT.

    Returns (tau, values).  The trapezoid nodes have spacing pi/nyquist, so
    aliasing brings in the transform at |tau| >= 2 nyquist - tau_max only.
    """
    lo, hi = w.support
    nyquist = nyquist or 2.0 * tau_max
    # at least 8192 nodes across the support keeps the sharp steps resolved
    dy = min(math.pi / nyquist, math.log(hi / lo) / 8192)
    span = 2 * math.pi / d_tau
    if span < math.log(hi / lo):
        raise PreconditionError("d_tau too coarse for the window's log-support")
    m = int(round(span / dy))
    dy = span / m
    y0 = math.log(lo)
    y = y0 + dy * np.arange(m)
    x = np.exp(y)
    g = np.where(x < hi, w(np.minimum(x, hi)) * np.exp(sigma * y), 0.0)
    spectrum = np.fft.ifft(g) * m * dy  # sum_k g_k e^{+2 pi i jk/m} dy
    k = int(math.floor(tau_max / d_tau + 1e-9))
    idx = np.r_[np.arange(m - k, m), np.arange(0, k + 1)]
    tau = np.r_[np.arange(-k, 0), np.arange(0, k + 1)] * d_tau
    return tau, spectrum[idx] * np.exp(1j * tau * y0)


def mellin_decay_check(w: SmoothWindow, sigma: float, taus, j: int, scale: float = 1.0) -> np.ndarray:
    """Ratios |W(sigma + i tau)| / (scale/(1+|tau|))^j; bounded ratios certify the decay."""
    taus = np.asarray(taus, dtype=float)
    vals = np.array([abs(mellin_transform(w, sigma + 1j * tau)) for tau in taus])
    return vals / (scale / (1 + np.abs(taus))) ** j
