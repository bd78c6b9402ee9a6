"""The smoothed sum S(N) evaluated term by term."""

from __future__ import annotations

import numpy as np

from ..errors import PreconditionError
from ..params import PipelineParams
from ..summation import ksum
from ..windows import SmoothWindow, make_window

N_DIRECT_MAX = 10**6


def twist(n: np.ndarray, t: float) -> np.ndarray:
    """n^(-it) as exp(-i t log n) with a real log."""
    return np.exp(-1j * t * np.log(n))


def S_direct(params: PipelineParams, V: SmoothWindow | None = None) -> complex:
    """sum_n lambda(n) n^(-it) V(n/N), compensated and order independent."""
    N = params.N
    if N > N_DIRECT_MAX:
        raise PreconditionError(f"N must be at most {N_DIRECT_MAX}")
    V = V or make_window("V_bump")
    lo, hi = V.support
    n = np.arange(max(1, int(np.floor(lo * N)) + 1), int(np.ceil(hi * N)))
    if n.size == 0:
        return 0j
    lam = params.form.window(int(n[0]), int(n[-1]))
    return complex(ksum(lam * twist(n, params.t) * V(n / N)))


def S_abs_bound(params: PipelineParams, V: SmoothWindow | None = None) -> float:
    """sum_n |lambda(n)| V(n/N), the triangle-inequality ceiling for |S(N)|."""
    N = params.N
    V = V or make_window("V_bump")
    lo, hi = V.support
    n = np.arange(max(1, int(np.floor(lo * N)) + 1), int(np.ceil(hi * N)))
    if n.size == 0:
        return 0.0
    return float(ksum(np.abs(params.form.window(int(n[0]), int(n[-1]))) * V(n / N)))
