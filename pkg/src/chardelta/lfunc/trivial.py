"""The trivial-character term T(N) left over after adding back chi_0."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import PreconditionError
from ..params import PipelineParams
from ..summation import ksum
from ..windows import make_window
from .dual import _n_kernel, _r_kernel

T_SMALL_RATIO = 1e-8
_NODES = (128, 256)  # Gauss-Legendre nodes on supp V; the change is reported


@dataclass(frozen=True)
class TEstimate:
    T: complex
    Sstar: complex | None
    dual_length: float
    constraint: bool
    quadrature_change: float
    notes: str = ""

    @property
    def ratio(self) -> float | None:
        if self.Sstar is None or self.Sstar == 0:
            return None
        return abs(self.T) / abs(self.Sstar)

    @property
    def passed(self) -> bool | None:
        """None when P^2 > N t^eps fails and no smallness is claimed."""
        if not self.constraint or self.ratio is None:
            return None
        return self.ratio < T_SMALL_RATIO


def _T_value(params: PipelineParams, nodes: int, mode: str) -> complex:
    """(N/P*) sum_p 1/phi(p) int V(nu) R_p(nu) A_p(nu) d nu with chi_0 on both dual sums."""
    V = make_window("V_bump")
    x, w = np.polynomial.legendre.leggauss(nodes)
    lo, hi = V.support
    nus = (hi - lo) / 2 * x + (hi + lo) / 2
    weights = (hi - lo) / 2 * w * V(nus)
    t, K, N, eps = float(params.t), float(params.K), params.N, float(params.eps)
    form = params.form
    total = []
    for p in params.primes:
        per_nu = []
        for nu, wt in zip(nus.tolist(), weights.tolist()):
            r, r_kernel, _ = _r_kernel(p, 0, t + K * nu, N, t, eps, mode, "V_eps_strict")
            n, n_kernel, _ = _n_kernel(p, form.form.weight, K, nu, N, t, eps, mode, "V_eps_strict")
            if n[-1] > form.n_max:
                raise PreconditionError(f"T(N) needs coefficients up to {n[-1]}")
            # the sums run over all r and n, as in the displayed T(N)
            R = ksum(r_kernel)
            A = ksum(np.conj(form.lam[n]) * n_kernel)
            per_nu.append(wt * R * A)
        total.append(ksum(per_nu) / (p - 1))
    return complex(N * params.form.form.root_number * ksum(total) / params.P_star)


def T_N_estimate(params: PipelineParams, Sstar: complex | None = None, mode: str = "lemma") -> TEstimate:
    """Evaluate T(N) directly and compare it with S*(N).

    The n-sum in T(N) has conductor (K nu)^2 and length P^2 K^2/N, so its
    functional-equation dual has length N t^eps/P^2; when that is below 1
    the term is negligible.  Both dual sums use the plain V_eps window.
    ``Sstar`` defaults to the exact value from ``decompose_S``.
    """
    from ..delta import decompose_S

    dual_length = params.N * params.t_eps / params.P**2
    coarse = _T_value(params, _NODES[0], mode)
    fine = _T_value(params, _NODES[1], mode)
    if Sstar is None and params.pk_large:
        Sstar = decompose_S(params).Sstar
    notes = "" if params.p_squared_large else "P^2 <= N t^eps: diagnostic only, no smallness claimed"
    return TEstimate(fine, Sstar, dual_length, params.p_squared_large, abs(fine - coarse), notes)
