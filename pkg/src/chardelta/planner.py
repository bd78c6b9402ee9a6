"""Exponent bookkeeping for the final bound and its parameter optimization.

With N = t^nu, P = t^pi and K = t^kappa every bound term is t to an affine
function of (nu, pi, kappa).  Exponent arithmetic is exact; epsilons are
dropped while the strict constraints stay strict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import InfeasibleError, InvariantError, PreconditionError

F = Fraction


@dataclass(frozen=True)
class ExponentTerm:
    """exponent = c0 + c_nu nu + c_pi pi + c_kappa kappa."""

    label: str
    c0: Fraction
    c_nu: Fraction
    c_pi: Fraction
    c_kappa: Fraction

    def at(self, nu, pi, kappa) -> Fraction:
        return self.c0 + self.c_nu * F(nu) + self.c_pi * F(pi) + self.c_kappa * F(kappa)

    def affine(self, nu) -> tuple[Fraction, Fraction, Fraction]:
        """(constant, pi coefficient, kappa coefficient) at fixed nu."""
        return self.c0 + self.c_nu * F(nu), self.c_pi, self.c_kappa


TERMS: tuple[ExponentTerm, ...] = (
    ExponentTerm("N/P", F(0), F(1), F(-1), F(0)),
    ExponentTerm("N^2/(PK)", F(0), F(2), F(-1), F(-1)),
    ExponentTerm("sqrt(NK)", F(0), F(1, 2), F(0), F(1, 2)),
    ExponentTerm("K^(1/4) sqrt(t)", F(1, 2), F(0), F(0), F(1, 4)),
    ExponentTerm("sqrt(Nt)/K^(1/4)", F(1, 2), F(1, 2), F(0), F(-1, 4)),
    ExponentTerm("P^(3/2) sqrt(N)/K", F(0), F(1, 2), F(3, 2), F(-1)),
    ExponentTerm("sqrt(PN)/t", F(-1), F(1, 2), F(1, 2), F(0)),
)


@dataclass(frozen=True)
class ConstraintSet:
    """Strict constraints pi + kappa > nu, 2 pi > nu, kappa < kappa_max, kappa < nu; pi, kappa >= 0.

    ``kappa_max=None`` drops the kappa < 2/3 constraint.  ``extra`` holds
    further strict constraints (a, b, c) meaning a pi + b kappa < c.
    """

    kappa_max: Fraction | None = F(2, 3)
    kappa_below_nu: bool = True
    extra: tuple[tuple[Fraction, Fraction, Fraction], ...] = ()

    def strict(self, nu) -> list[tuple[str, Fraction, Fraction, Fraction]]:
        """Constraints as (label, a, b, c) meaning a pi + b kappa < c."""
        nu = F(nu)
        rows = [("PK > N", F(-1), F(-1), -nu), ("P^2 > N", F(-2), F(0), -nu)]
        if self.kappa_max is not None:
            rows.append(("K < t^(2/3)", F(0), F(1), F(self.kappa_max)))
        if self.kappa_below_nu:
            rows.append(("K < N", F(0), F(1), nu))
        rows += [(f"extra {i}", F(a), F(b), F(c)) for i, (a, b, c) in enumerate(self.extra)]
        return rows

    def closed(self, nu) -> list[tuple[str, Fraction, Fraction, Fraction]]:
        """Strict rows plus the sign conditions, all read as a pi + b kappa <= c."""
        return self.strict(nu) + [("pi >= 0", F(-1), F(0), F(0)), ("kappa >= 0", F(0), F(-1), F(0))]


def term_table(nu) -> list[tuple[str, tuple[Fraction, Fraction, Fraction]]]:
    """The seven terms at fixed nu as (label, (constant, c_pi, c_kappa))."""
    nu = F(nu)
    if nu < 0:
        raise PreconditionError("nu must be non-negative")
    return [(term.label, term.affine(nu)) for term in TERMS]


def objective(nu, pi, kappa) -> Fraction:
    return max(term.at(nu, pi, kappa) for term in TERMS)


@dataclass(frozen=True)
class PlanResult:
    nu: Fraction
    pi: Fraction
    kappa: Fraction
    objective: Fraction
    binding_terms: tuple[str, ...]
    active_constraints: tuple[str, ...]
    grid_objective: Fraction | None
    grid_step: Fraction
    exponents: dict = field(default_factory=dict)

    @property
    def attained_strictly(self) -> bool:
        """False when the optimum sits on a strict constraint (approached as eps -> 0)."""
        return not self.active_constraints


_BOX = F(2)  # pi, kappa <= 2 bounds the search; no optimum lies beyond it


def _intersection(l1, l2):
    (a1, b1, c1), (a2, b2, c2) = l1, l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return (c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det


def _vertices(nu, constraints: ConstraintSet) -> list[tuple[Fraction, Fraction]]:
    """Feasible intersections of all constraint lines and all term-equality lines."""
    rows = constraints.closed(nu) + [("box pi", F(1), F(0), _BOX), ("box kappa", F(0), F(1), _BOX)]
    lines = [(a, b, c) for _, a, b, c in rows]
    affine = [term.affine(nu) for term in TERMS]
    for (c0, p0, k0), (c1, p1, k1) in combinations(affine, 2):
        # c0 + p0 pi + k0 kappa = c1 + p1 pi + k1 kappa
        if (p0, k0) != (p1, k1):
            lines.append((p0 - p1, k0 - k1, c1 - c0))
    points = set()
    for l1, l2 in combinations(lines, 2):
        pt = _intersection(l1, l2)
        if pt is not None and all(a * pt[0] + b * pt[1] <= c for _, a, b, c in rows):
            points.add(pt)
    return sorted(points)


def _strictly_feasible(nu, constraints: ConstraintSet, corners) -> bool:
    """The closed polygon has interior exactly when the centroid of its corners is strictly inside."""
    if not corners:
        return False
    cx = sum(p for p, _ in corners) / len(corners)
    cy = sum(k for _, k in corners) / len(corners)
    return all(a * cx + b * cy < c for _, a, b, c in constraints.strict(nu))


def _grid_search(nu, step: Fraction, constraints: ConstraintSet):
    """Best strictly feasible grid point, in exact scaled-integer arithmetic."""
    affine = [term.affine(nu) for term in TERMS]
    rows = [(a, b, c) for _, a, b, c in constraints.strict(nu)]
    numbers = [x for c, p, k in affine for x in (c, p * step, k * step)]
    numbers += [x for a, b, c in rows for x in (a * step, b * step, c)]
    scale = math.lcm(*(x.denominator for x in numbers))
    as_int = lambda x: int(x * scale)
    i = np.arange(int(_BOX / step) + 1, dtype=np.int64)
    a_idx, b_idx = np.meshgrid(i, i, indexing="ij")
    best = np.max([as_int(c) + as_int(p * step) * a_idx + as_int(k * step) * b_idx for c, p, k in affine], axis=0)
    ok = np.ones(best.shape, dtype=bool)
    for a, b, c in rows:
        ok &= as_int(a * step) * a_idx + as_int(b * step) * b_idx < as_int(c)
    if not ok.any():
        return None
    masked = np.where(ok, best, np.iinfo(np.int64).max)
    flat = int(np.argmin(masked))  # first minimum: smallest pi, then smallest kappa
    a, b = np.unravel_index(flat, masked.shape)
    return F(int(masked.flat[flat]), scale), int(a) * step, int(b) * step


def optimize(nu, grid_step=F(1, 96), constraints: ConstraintSet | None = None) -> PlanResult:
    """Minimize the largest term exponent over the constraint region.

    The grid pass is exact on strictly feasible points; vertex enumeration of
    the closed region then gives the infimum, which the grid can only
    approach.  Ties go to the smallest pi, then the smallest kappa.
    """
    nu, step = F(nu), F(grid_step)
    constraints = constraints or ConstraintSet()
    if step <= 0 or step > F(1, 96):
        raise PreconditionError("grid_step must lie in (0, 1/96]")
    if (_BOX / step).denominator != 1:
        raise PreconditionError("grid_step must divide 2")
    corners = _vertices(nu, constraints)
    if not _strictly_feasible(nu, constraints, corners):
        raise InfeasibleError(f"no (pi, kappa) satisfies the strict constraints at nu = {nu}")
    grid = _grid_search(nu, step, constraints)
    scored = sorted(corners, key=lambda pt: (objective(nu, *pt), pt[0], pt[1]))
    pi, kappa = scored[0]
    best = objective(nu, pi, kappa)
    if grid is not None and grid[0] < best:  # cannot happen: the closure contains the grid points
        raise InvariantError("grid search beat the vertex optimum")
    exps = {term.label: term.at(nu, pi, kappa) for term in TERMS}
    binding = tuple(label for label, v in exps.items() if v == best)
    active = tuple(label for label, a, b, c in constraints.strict(nu) if a * pi + b * kappa == c)
    return PlanResult(nu, pi, kappa, best, binding, active, None if grid is None else grid[0], step, exps)
