import time
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chardelta import planner
from chardelta.errors import InfeasibleError, PreconditionError


def test_seven_terms_exact():
    table = dict(planner.term_table(1))
    assert len(table) == 7
    coeffs = {t.label: (t.c0, t.c_nu, t.c_pi, t.c_kappa) for t in planner.TERMS}
    assert coeffs["N/P"] == (0, 1, -1, 0)
    assert coeffs["N^2/(PK)"] == (0, 2, -1, -1)
    assert coeffs["sqrt(NK)"] == (0, F(1, 2), 0, F(1, 2))
    assert coeffs["K^(1/4) sqrt(t)"] == (F(1, 2), 0, 0, F(1, 4))
    assert coeffs["sqrt(Nt)/K^(1/4)"] == (F(1, 2), F(1, 2), 0, F(-1, 4))
    assert coeffs["P^(3/2) sqrt(N)/K"] == (0, F(1, 2), F(3, 2), -1)
    assert coeffs["sqrt(PN)/t"] == (-1, F(1, 2), F(1, 2), 0)


def test_exponents_at_the_stated_optimum():
    values = [t.at(1, F(1, 2), F(2, 3)) for t in planner.TERMS]
    assert values == [F(1, 2), F(5, 6), F(5, 6), F(2, 3), F(5, 6), F(7, 12), F(-1, 4)]
    assert max(values) == F(5, 6)


def test_nu_zero_first_term():
    const, c_pi, c_kappa = dict(planner.term_table(0))["N/P"]
    assert const == 0 and c_pi == -1 and c_kappa == 0


def test_optimize_nu_one_exact_and_fast():
    start = time.perf_counter()
    result = planner.optimize(1)
    assert time.perf_counter() - start < 1
    assert (result.pi, result.kappa, result.objective) == (F(1, 2), F(2, 3), F(5, 6))
    assert all(isinstance(x, F) for x in (result.pi, result.kappa, result.objective))
    assert len(result.binding_terms) >= 2
    # the optimum is an infimum on the strict boundary, reached as eps -> 0
    assert set(result.active_constraints) == {"P^2 > N", "K < t^(2/3)"}
    assert result.grid_objective > result.objective


def test_threshold_nu_two_thirds():
    result = planner.optimize(F(2, 3))
    assert result.objective >= F(2, 3)


def test_nu_four_fifths_beats_trivial():
    assert planner.optimize(F(4, 5)).objective < F(4, 5)


def test_relaxing_kappa_does_not_help():
    relaxed = planner.optimize(1, constraints=planner.ConstraintSet(kappa_max=None))
    assert relaxed.objective == F(5, 6)


@settings(max_examples=20, deadline=None)
@given(st.fractions(F(1, 10), F(1)))
def test_refinement_monotone(nu):
    coarse = planner.optimize(nu, F(1, 96)).objective
    fine = planner.optimize(nu, F(1, 192)).objective
    assert fine <= coarse


@settings(max_examples=20, deadline=None)
@given(st.fractions(F(1, 10), F(1)), st.integers(0, 192), st.integers(0, 192))
def test_no_strict_grid_point_beats_the_optimum(nu, i, j):
    pi, kappa = F(i, 96), F(j, 96)
    rows = planner.ConstraintSet().strict(nu)
    if all(a * pi + b * kappa < c for _, a, b, c in rows):
        assert planner.objective(nu, pi, kappa) >= planner.optimize(nu).objective


def test_infeasible_reports():
    with pytest.raises(InfeasibleError):
        planner.optimize(0)
    with pytest.raises(InfeasibleError):
        planner.optimize(1, constraints=planner.ConstraintSet(extra=((F(1), F(0), F(0)),)))


def test_grid_step_precondition():
    with pytest.raises(PreconditionError):
        planner.optimize(1, F(1, 50))
