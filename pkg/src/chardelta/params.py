"""Parameters of one delta-method run."""

from __future__ import annotations

from dataclasses import dataclass, field

from .arithmetic import sieve_primes
from .errors import PreconditionError
from .modforms import HeckeCoefficients, delta_coefficients


@dataclass(frozen=True)
class PipelineParams:
    """(t, N, P, K, eps) plus the prime set in [P, 2P] and the form.

    ``form`` defaults to the coefficients of Delta, long enough for the
    r-range of the plateau window U (r < 5N/2).
    """

    t: float
    N: int
    P: int
    K: float
    eps: float = 0.05
    form: HeckeCoefficients | None = field(default=None, repr=False, compare=False)
    primes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.t <= 0 or self.N < 1 or self.P < 2 or self.K <= 0 or self.eps <= 0:
            raise PreconditionError("need t > 0, N >= 1, P >= 2, K > 0, eps > 0")
        object.__setattr__(self, "primes", tuple(sieve_primes(self.P, 2 * self.P)))
        if not self.primes:
            raise PreconditionError(f"no primes in [{self.P}, {2 * self.P}]")
        if self.form is None:
            object.__setattr__(self, "form", delta_coefficients(max(3 * self.N, 16)))

    @property
    def P_star(self) -> int:
        return len(self.primes)

    @property
    def t_eps(self) -> float:
        return self.t**self.eps

    @property
    def pk_large(self) -> bool:
        """PK > N^(1+eps): the congruence forced by the delta lemma is an equality."""
        return self.P * self.K > self.N ** (1 + self.eps)

    @property
    def p_squared_large(self) -> bool:
        """P^2 > N t^eps: the trivial-character term T(N) is negligible."""
        return self.P**2 > self.N * self.t_eps

    @property
    def k_below_two_thirds(self) -> bool:
        return self.K < self.t ** (2 / 3 - self.eps)

    @property
    def k_below_n(self) -> bool:
        return self.K < self.N / self.t_eps

    def constraint_flags(self) -> dict[str, bool]:
        return {
            "PK > N^(1+eps)": self.pk_large,
            "P^2 > N t^eps": self.p_squared_large,
            "K < t^(2/3-eps)": self.k_below_two_thirds,
            "K < N t^-eps": self.k_below_n,
        }

    def snapshot(self) -> dict:
        return {"t": self.t, "N": self.N, "P": self.P, "K": self.K, "eps": self.eps, "P_star": self.P_star}
