"""Oscillatory integrals int g(x) exp(i h(x)) dx: oracle quadrature,
stationary phase, decay and second-derivative checks, Poisson summation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import constants
from .errors import NoStationaryPoint, NumericError, PreconditionError
from .summation import ksum

EVAL_BUDGET = 2_000_000
MAX_PHASE_VARIATION = 1e7
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


@dataclass
class OscillatoryIntegral:
    """Amplitude g and real phase h (radians) on a finite support.

    ``dh``/``d2h`` are optional analytic derivatives; missing ones fall back
    to central differences.  ``X, Y, Z`` are the scales of the stationary
    phase lemma: g is X-inert at scale Z and h^(j) is about Y/Z^j.
    """

    g: Callable
    h: Callable
    support: tuple[float, float]
    dh: Callable | None = None
    d2h: Callable | None = None
    X: float = 1.0
    Y: float | None = None
    Z: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        a, b = self.support
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise PreconditionError("support must be a finite interval a < b")

    @property
    def R(self) -> float:
        if self.Y is None:
            raise PreconditionError("scale Y not set")
        return self.Y / self.X**2

    def phase_derivative(self, x):
        if self.dh is not None:
            return self.dh(x)
        step = 1e-6 * (self.support[1] - self.support[0])
        return (self.h(x + step) - self.h(x - step)) / (2 * step)

    def phase_second_derivative(self, x):
        if self.d2h is not None:
            return self.d2h(x)
        step = 1e-4 * (self.support[1] - self.support[0])
        return (self.h(x + step) - 2 * self.h(x) + self.h(x - step)) / step**2

    def conjugate(self) -> "OscillatoryIntegral":
        """The integral of conj(g) exp(-i h), whose value is the conjugate."""
        neg = lambda f: None if f is None else (lambda x: -f(x))
        return OscillatoryIntegral(
            lambda x: np.conj(self.g(x)), neg(self.h), self.support, neg(self.dh), neg(self.d2h), self.X, self.Y, self.Z
        )


def _gl(I: OscillatoryIntegral, lo: np.ndarray, hi: np.ndarray):
    half = 0.5 * (hi - lo)
    x = 0.5 * (lo + hi)[:, None] + half[:, None] * _GL_X[None, :]
    amp = I.g(x)
    vals = amp * np.exp(1j * I.h(x))
    return (vals * _GL_W).sum(axis=1) * half, x, (np.abs(amp) * _GL_W).sum(axis=1) * np.abs(half)


def _panel_rule(I: OscillatoryIntegral, a: np.ndarray, b: np.ndarray):
    """GL8 on each panel and on its halves, plus the phase variation over each half."""
    mid = 0.5 * (a + b)
    coarse, _, _ = _gl(I, a, b)
    left, x_left, mass_left = _gl(I, a, mid)
    right, x_right, mass_right = _gl(I, mid, b)
    var = np.zeros_like(a)
    for lo, x, hi in ((a, x_left, mid), (mid, x_right, b)):
        pts = np.concatenate([lo[:, None], x, hi[:, None]], axis=1)
        var = np.maximum(var, np.abs(np.diff(I.h(pts), axis=1)).sum(axis=1))
    return coarse, left + right, var, mass_left + mass_right, 24


def _initial_panels(I: OscillatoryIntegral) -> np.ndarray:
    """Panel edges placed so the phase varies by about 0.45 pi per panel.

    The phase is sampled on a grid refined until each step varies by at most
    pi/16; edges go where the cumulative variation crosses multiples of
    0.45 pi, so both GL halves of a panel usually meet the pi/4 rule at once.
    """
    a, b = I.support
    m = 4096
    while True:
        x = np.linspace(a, b, m + 1)
        steps = np.abs(np.diff(I.h(x)))
        if steps.max(initial=0.0) <= math.pi / 16 or m >= 2**24:
            break
        m *= 4
    total = float(steps.sum())
    if total > MAX_PHASE_VARIATION:
        raise NumericError("phase variation exceeds the runtime guard", variation=total)
    cum = np.concatenate([[0.0], np.cumsum(steps)])
    spacing = 0.45 * math.pi
    marks = np.arange(1, int(total / spacing) + 1) * spacing
    inner = x[np.minimum(np.searchsorted(cum, marks), m)]
    return np.unique(np.concatenate([np.linspace(a, b, 17), inner]))


def _adaptive(I: OscillatoryIntegral, edges: np.ndarray, tol: float, budget: int):
    """Returns (value, evaluations, accepted panel edges)."""
    a0, b0 = I.support
    length = b0 - a0
    todo_a, todo_b = edges[:-1], edges[1:]
    done_a, done_v = [], []
    evals = 0
    while todo_a.size:
        coarse, fine, var, mass, cost = _panel_rule(I, todo_a, todo_b)
        evals += cost * todo_a.size
        if evals > budget:
            raise NumericError(
                "oscillatory quadrature exceeded its evaluation budget",
                evaluations=evals,
                open_panels=int(todo_a.size),
                support=I.support,
            )
        # rounding floor: no rule resolves a panel below a few ulps of its mass
        target = np.maximum(tol * (todo_b - todo_a) / length, 50 * np.finfo(float).eps * mass)
        ok = (np.abs(fine - coarse) <= target) & (var <= math.pi / 4)
        done_a.append(todo_a[ok])
        done_v.append(fine[ok])
        split_a, split_b = todo_a[~ok], todo_b[~ok]
        mid = 0.5 * (split_a + split_b)
        if np.any(mid <= split_a) or np.any(mid >= split_b):
            raise NumericError("panel width underflow in oscillatory quadrature", support=I.support)
        todo_a = np.concatenate([split_a, mid])
        todo_b = np.concatenate([mid, split_b])
    starts = np.concatenate(done_a)
    vals = np.concatenate(done_v)
    order = np.argsort(starts, kind="stable")
    final_edges = np.append(starts[order], b0)
    return ksum(vals[order]), evals, final_edges


def integrate_oracle(I: OscillatoryIntegral, tol: float = 1e-10) -> complex:
    """Adaptive Gauss-Legendre panels with absolute error tol, cross-checked at tol/2.

    Evaluations of g exp(ih) are capped at EVAL_BUDGET over both passes.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    edges = _initial_panels(I)
    first, used, edges = _adaptive(I, edges, tol, EVAL_BUDGET)
    # the cross-check pass starts from the accepted panels of the first
    second, _, _ = _adaptive(I, edges, tol / 2, EVAL_BUDGET - used)
    if abs(first - second) > tol:
        raise NumericError("quadrature cross-check failed", first=first, second=second, tol=tol)
    return second


def find_stationary_point(I: OscillatoryIntegral, samples: int = 2001) -> float:
    a, b = I.support
    x = np.linspace(a, b, samples)
    d = I.phase_derivative(x)
    sign = np.sign(d)
    changes = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    exact = np.flatnonzero(d == 0)
    roots = []
    for i in changes:
        roots.append(brentq(lambda u: float(I.phase_derivative(np.array([u]))[0]), x[i], x[i + 1], xtol=1e-15, rtol=1e-15))
    for i in exact:
        roots.append(float(x[i]))
    roots = sorted(set(roots))
    if not roots:
        raise NoStationaryPoint(f"phase has no stationary point on {I.support}")
    if len(roots) > 1:
        raise PreconditionError(f"multiple stationary points {roots[:4]} are not supported")
    t0 = roots[0]
    # Newton polish
    for _ in range(3):
        d1 = float(I.phase_derivative(np.array([t0]))[0])
        d2 = float(I.phase_second_derivative(np.array([t0]))[0])
        if d2 == 0:
            break
        step = d1 / d2
        if abs(step) > 1e-6 * (b - a):
            break
        t0 -= step
    return t0


@dataclass(frozen=True)
class StationaryPhaseResult:
    main: complex
    certified_rel_error: float
    t0: float
    h2: float


def stationary_phase(I: OscillatoryIntegral) -> StationaryPhaseResult:
    """Leading-order stationary phase with a calibrated O(1/R) relative error."""
    t0 = find_stationary_point(I)
    h2 = float(I.phase_second_derivative(np.array([t0]))[0])
    if h2 == 0:
        raise PreconditionError("degenerate stationary point (h'' = 0)")
    h0 = float(I.h(np.array([t0]))[0])
    g0 = complex(np.asarray(I.g(np.array([t0])))[0])
    main = np.exp(1j * h0) * g0 * math.sqrt(2 * math.pi / abs(h2)) * np.exp(1j * math.copysign(math.pi / 4, h2))
    R = I.R if I.Y is not None else abs(h2) * I.X**2
    return StationaryPhaseResult(complex(main), constants.STATIONARY_PHASE_C / R, t0, h2)


@dataclass(frozen=True)
class DecayReport:
    observed: float
    predicted: float
    R: float

    @property
    def passed(self) -> bool:
        return self.observed <= 10 * self.predicted


def decay_check(I: OscillatoryIntegral, j: int, tol: float = 1e-14) -> DecayReport:
    """|I| against Z R^-j when |h'| >= Y/Z on the support (no stationary point)."""
    if I.Y is None or I.Z is None:
        raise PreconditionError("decay_check needs the scales Y and Z")
    x = np.linspace(*I.support, 2001)
    slope = np.abs(I.phase_derivative(x))
    if I.Y <= 0 or np.min(slope) < I.Y / I.Z * (1 - 1e-9):
        raise PreconditionError("decay_check needs |h'| >= Y/Z > 0 on the support")
    observed = abs(integrate_oracle(I, tol))
    return DecayReport(observed, I.Z * I.R ** (-j), I.R)


def second_derivative_estimate(I: OscillatoryIntegral, r: float, tol: float = 1e-12) -> float:
    """|I| for phases with |h''| >= r on the support; callers compare with C/sqrt(r)."""
    if r <= 0:
        raise PreconditionError("r must be positive")
    x = np.linspace(*I.support, 4001)
    if np.min(np.abs(I.phase_second_derivative(x))) < r * (1 - 1e-9):
        raise PreconditionError("|h''| drops below r on the support")
    return abs(integrate_oracle(I, tol))


def second_derivative_bound(r: float, t_eps: float = 1.0) -> float:
    return constants.SECOND_DERIVATIVE_C * t_eps / math.sqrt(r)


@dataclass(frozen=True)
class PoissonReport:
    lhs: complex
    rhs: complex
    frequencies: tuple[int, int]
    terms: int

    @property
    def difference(self) -> float:
        return abs(self.lhs - self.rhs)


def fourier_transform(amplitude: Callable, phase: Callable, support, xi: float, tol: float = 1e-12) -> complex:
    """F^(xi) = int F(x) e(-x xi) dx for F = amplitude * exp(i phase)."""
    I = OscillatoryIntegral(amplitude, lambda x: phase(x) - 2 * math.pi * xi * x, support)
    return integrate_oracle(I, tol)


def poisson_verify(
    amplitude: Callable,
    phase: Callable,
    support: tuple[float, float],
    m: int,
    gamma: int,
    tol: float = 1e-8,
    max_terms: int = 4000,
) -> PoissonReport:
    """Compare sum_n F(n) e(gamma n/m) with sum_j F^(j - gamma/m).

    F = amplitude * exp(i phase) must vanish outside ``support``.  The dual
    sum starts at the frequencies where the phase is stationary and extends
    both ways until five consecutive terms fall below tol/100.
    """
    if m < 1:
        raise PreconditionError("modulus m must be >= 1")
    lo, hi = support
    n = np.arange(math.ceil(lo), math.floor(hi) + 1)
    lhs = ksum(amplitude(n) * np.exp(1j * phase(n)) * np.exp(2j * math.pi * gamma * n / m)) if n.size else 0j

    x = np.linspace(lo, hi, 4001)
    freq = np.gradient(phase(x), x) / (2 * math.pi)
    shift = gamma / m
    j_lo = math.floor(freq.min() + shift) - 1
    j_hi = math.ceil(freq.max() + shift) + 1
    terms: dict[int, complex] = {}
    quad_tol = tol / 100
    for j in range(j_lo, j_hi + 1):
        terms[j] = fourier_transform(amplitude, phase, support, j - shift, quad_tol)
    for direction, start in ((1, j_hi + 1), (-1, j_lo - 1)):
        j, small = start, 0
        while small < 5:
            if len(terms) > max_terms:
                raise NumericError("dual Poisson sum did not reach the tolerance", terms=len(terms))
            val = fourier_transform(amplitude, phase, support, j - shift, quad_tol)
            terms[j] = val
            small = small + 1 if abs(val) < quad_tol else 0
            j += direction
    keys = sorted(terms)
    rhs = ksum(np.array([terms[k] for k in keys]))
    return PoissonReport(complex(lhs), complex(rhs), (keys[0], keys[-1]), len(keys))
