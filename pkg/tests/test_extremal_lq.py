"""Shooting construction of L^q maximizers: window, profile, diagnostics."""

import math

import numpy as np
import pytest

from specdet.errors import DomainError, RangeError
from specdet.extremal_lq import (ExtremalSolution, ShootingProblem, c_of,
                                 endpoint_exponent, h_of, phase_polynomial,
                                 psi_shoot, solve_extremal)
from specdet.potential import lq_norm


def test_window_floor_closed_form():
    # q = 2 collapses to 9 A^2 / 2
    for A in (0.5, 1.0, 2.0):
        assert c_of(A, 2.0) == pytest.approx(4.5 * A * A, rel=1e-14)
    assert c_of(1.0, 2.0) == pytest.approx(4.5, rel=1e-14)


def test_window_floor_small_q_limit():
    # as q -> 1+ the floor tends to A
    for A in (1.0, 2.0):
        assert c_of(A, 1.0 + 1e-9) == pytest.approx(A, rel=1e-6)


def test_window_floor_overflow_guard():
    with pytest.raises(RangeError):
        c_of(1e200, 5.0)


def test_window_ceiling_properties():
    for A, q in [(0.5, 1.25), (1.0, 1.5), (1.0, 2.0), (4.0, 3.0),
                 (2.0, 5.0)]:
        c = c_of(A, q)
        h = h_of(A, q)
        alpha = q / (q - 1.0)
        assert h > c
        # defining residual vanishes at the returned root
        g = (h - c) ** 2 - (2 * alpha / (alpha + 1)) * (2 * h) ** (
            1 + 1 / alpha)
        scale = (h - c) ** 2
        assert abs(g) <= 1e-10 * scale
        # and is negative at the floor
        gc = -(2 * alpha / (alpha + 1)) * (2 * c) ** (1 + 1 / alpha)
        assert gc < 0.0


def test_window_ceiling_matches_quartic_cubic_relation_at_q2():
    # squaring g = 0 at q = 2 gives 128 h^3 = 9 (h - 9A^2/2)^4
    for A in (0.5, 1.0, 2.0):
        h = h_of(A, 2.0)
        c = 4.5 * A * A
        assert 128.0 * h ** 3 == pytest.approx(9.0 * (h - c) ** 4,
                                               rel=1e-10)


def test_shooting_problem_build_validates():
    with pytest.raises(DomainError):
        ShootingProblem.build(1.0, 1.0)
    with pytest.raises(DomainError):
        ShootingProblem.build(-1.0, 2.0)
    with pytest.raises(DomainError):
        ShootingProblem.build(1.0, 2.0, grid_n=16)
    prob = ShootingProblem.build(1.0, 2.0)
    assert prob.alpha == 2.0
    assert prob.c < prob.h


def test_shoot_rejects_h_outside_window():
    prob = ShootingProblem.build(1.0, 2.0)
    with pytest.raises(DomainError):
        psi_shoot(prob.c, prob)
    with pytest.raises(DomainError):
        psi_shoot(prob.h * 1.01, prob)


@pytest.mark.parametrize("A,q", [(1.0, 2.0), (1.0, 1.5), (1.0, 3.0)])
def test_terminal_defect_increases_with_h(A, q):
    # the defect dips in the lowest quarter of the window, where the
    # trajectory spends most of its time negative; from there on up it
    # rises monotonically through its single zero
    prob = ShootingProblem.build(A, q)
    hs = prob.c + (prob.h - prob.c) * np.linspace(0.3, 0.95, 10)
    misses = [psi_shoot(float(H), prob, dense=False)[2] for H in hs]
    assert all(b > a for a, b in zip(misses, misses[1:]))
    assert misses[0] < 0.0 < misses[-1]


@pytest.mark.parametrize("A,q", [(0.5, 1.25), (1.0, 2.0), (4.0, 5.0)])
def test_terminal_defect_changes_sign_once(A, q):
    prob = ShootingProblem.build(A, q)
    fr = np.arange(1, 65) / 65.0
    misses = np.array([psi_shoot(float(prob.c + f * (prob.h - prob.c)),
                                 prob, dense=False)[2] for f in fr])
    signs = np.sign(misses)
    assert int(np.sum(signs[:-1] != signs[1:])) <= 1


def test_first_integral_constant_along_trajectories():
    prob = ShootingProblem.build(1.0, 2.0)
    for frac in (0.3, 0.6, 0.9):
        H = prob.c + frac * (prob.h - prob.c)
        psi, dpsi, _ = psi_shoot(H, prob)
        e0 = 0.5 * (H - prob.c) ** 2
        energy = (0.5 * dpsi ** 2
                  - np.abs(psi) ** (1 + prob.alpha) * np.sign(psi)
                  / (1 + prob.alpha) + 2 * H * psi)
        assert np.max(np.abs(energy - e0)) <= 1e-9


def test_solution_matches_reference_h():
    sol = solve_extremal(1.0, 2.0)
    assert sol.H == pytest.approx(22.274659878, abs=1e-8)
    assert c_of(1.0, 2.0) < sol.H < h_of(1.0, 2.0)


def test_solution_profile_structure():
    sol = solve_extremal(1.0, 2.0)
    assert sol.psi[0] == 0.0
    assert abs(sol.miss) <= 1e-10
    assert sol.dpsi[0] == pytest.approx(sol.H - c_of(1.0, 2.0), rel=1e-12)
    assert sol.dpsi[0] > 0.0
    assert np.min(sol.psi) >= -1e-12
    mid = sol.psi.shape[0] // 2
    assert np.all(np.diff(sol.psi[: mid + 1]) > 0.0)
    assert sol.symmetry_defect <= 1e-9
    assert sol.first_integral_drift <= 1e-9
    assert sol.norm_residual <= 1e-6


def test_solution_sits_on_phase_curve():
    for A, q in [(1.0, 2.0), (0.5, 1.5)]:
        sol = solve_extremal(A, q)
        prob = ShootingProblem.build(A, q)
        f = phase_polynomial(prob, sol.H)
        gap = np.max(np.abs(sol.dpsi ** 2 - f(sol.psi)))
        assert gap <= 1e-8


def test_constraint_saturation():
    for A, q in [(0.5, 1.5), (1.0, 2.0), (1.0, 3.0)]:
        sol = solve_extremal(A, q)
        assert sol.norm_residual <= 1e-6 * A
        # the norm computed from the emitted potential agrees too
        norm = lq_norm(sol.potential(), q).value
        assert norm == pytest.approx(A, rel=1e-5)


def test_potential_round_trip_keeps_samples():
    sol = solve_extremal(1.0, 2.0, grid_n=257)
    pot = sol.potential()
    assert pot.q == 2.0 and pot.A == 1.0
    assert len(pot.psi) == 257
    assert pot.psi[0] == 0.0


def test_determinant_decreases_with_q():
    ds = [solve_extremal(1.0, q).det for q in (1.25, 2.0, 5.0)]
    assert ds[0] > ds[1] > ds[2] > 2.0


def test_stiff_exponent_returns_best_effort():
    # q = 1.05 gives alpha = 21; the defect floor sits above shoot_tol
    # because H is only representable to one ulp, so the solver must
    # return its best midpoint instead of raising
    sol = solve_extremal(1.0, 1.05)
    assert abs(sol.miss) <= 1e-9
    assert sol.det > 2.0


@pytest.mark.parametrize("q,want", [(1.5, 2.0), (2.0, 1.0), (3.0, 0.5)])
def test_endpoint_exponent_classification(q, want):
    sol = solve_extremal(1.0, q)
    assert endpoint_exponent(sol) == pytest.approx(want, abs=0.05)


def test_endpoint_exponent_window_validation():
    sol = solve_extremal(1.0, 2.0, grid_n=129)
    with pytest.raises(DomainError):
        endpoint_exponent(sol)  # 129 points leave too few in the window
    with pytest.raises(DomainError):
        endpoint_exponent(sol, window=(0.5, 0.1))


def test_solve_validates_inputs():
    with pytest.raises(DomainError):
        solve_extremal(1.0, 0.9)
    with pytest.raises(DomainError):
        solve_extremal(0.0, 2.0)
    with pytest.raises(DomainError):
        solve_extremal(1.0, 2.0, shoot_tol=1e-3)
    with pytest.raises(DomainError):
        solve_extremal(1.0, 2.0, shoot_tol=1e-14)
