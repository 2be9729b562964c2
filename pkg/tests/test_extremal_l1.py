"""Closed-form pulse optimum versus direct propagation and brute force."""

import math

import numpy as np
import pytest

from specdet.errors import DomainError, RangeError
from specdet.extremal_l1 import (GridSearchResult, grid_oracle, optimal_pulse,
                                 pulse_objective, small_mass_expansion,
                                 support_fraction)
from specdet.gy import propagate
from specdet.potential import lq_norm


def test_support_fraction_closed_form():
    assert support_fraction(3.0) == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert support_fraction(16.0) == pytest.approx(
        16.0 / (1.0 + math.sqrt(17.0)) ** 2, rel=1e-15)


def test_support_fraction_satisfies_stationarity_identity():
    # ell(A) is the root of A(1 - ell)^2 = 4 ell in (0, 1)
    for A in (0.05, 0.25, 1.0, 3.0, 16.0, 64.0, 400.0):
        ell = support_fraction(A)
        assert 0.0 < ell < 1.0
        assert A * (1.0 - ell) ** 2 == pytest.approx(4.0 * ell, rel=1e-13)


def test_optimal_pulse_benchmark_mass_three():
    o = optimal_pulse(3.0)
    assert o.ell == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert o.height == pytest.approx(9.0, rel=1e-15)
    assert o.det_max == pytest.approx(4.0 * math.e / 3.0, rel=1e-14)
    assert o.D_max == o.det_max / 2.0
    assert o.s == 0.5


def test_optimal_pulse_agrees_with_propagation():
    for A in (0.25, 1.0, 3.0, 16.0, 64.0):
        o = optimal_pulse(A)
        r = propagate(o.potential())
        assert r.det == pytest.approx(o.det_max, rel=1e-12)


def test_vanishing_mass_limit():
    o = optimal_pulse(1e-8)
    assert o.det_max == pytest.approx(2.0, rel=1e-8)
    assert o.ell == pytest.approx(0.25e-8, rel=1e-4)


def test_mass_constraint_is_active():
    for A in (0.25, 1.0, 3.0, 16.0):
        o = optimal_pulse(A)
        assert lq_norm(o.potential(), 1).value == pytest.approx(A, rel=1e-14)


def test_objective_matches_determinant_off_optimum():
    rng = np.random.default_rng(8128)
    from specdet.gy import pulse_det_closed_form
    for _ in range(50):
        s = float(rng.uniform(0.15, 0.85))
        cap = 2.0 * min(s, 1.0 - s)
        ell = float(rng.uniform(0.05, 1.0)) * cap
        A = float(rng.uniform(0.05, 12.0))
        y = pulse_objective(s, ell, A)
        det = pulse_det_closed_form(s - ell / 2.0, s + ell / 2.0, A / ell)
        assert y == pytest.approx(det / 2.0, rel=1e-12)


def test_objective_small_support_limit():
    # y(1/2, ell) = 1 + A/4 + A^2 ell / 24 + O(ell^2)
    A = 2.0
    for ell in (1e-4, 1e-5):
        y = pulse_objective(0.5, ell, A)
        assert y == pytest.approx(1.0 + A / 4.0 + A * A * ell / 24.0,
                                  abs=ell * ell)


def test_objective_is_stationary_at_closed_form_length():
    for A in (0.5, 3.0, 16.0):
        ell = support_fraction(A)
        d = 1e-6 * ell
        hi = pulse_objective(0.5, ell + d, A)
        lo = pulse_objective(0.5, ell - d, A)
        slope = (hi - lo) / (2.0 * d)
        curve = (hi + lo - 2.0 * pulse_objective(0.5, ell, A)) / d ** 2
        assert abs(slope) <= 1e-5 * abs(curve) * ell + 1e-9
        assert curve < 0.0  # a maximum, not a saddle


def test_objective_rejects_infeasible_geometry():
    with pytest.raises(DomainError):
        pulse_objective(0.5, 1.2, 1.0)
    with pytest.raises(DomainError):
        pulse_objective(0.1, 0.5, 1.0)
    with pytest.raises(DomainError):
        pulse_objective(0.5, 0.0, 1.0)
    with pytest.raises(DomainError):
        pulse_objective(0.5, 0.5, -1.0)


def test_objective_vectorizes():
    s = np.array([0.5, 0.4, 0.6])
    ell = np.array([0.2, 0.3, 0.1])
    out = pulse_objective(s, ell, 2.0)
    assert out.shape == (3,)
    assert out[0] == pytest.approx(pulse_objective(0.5, 0.2, 2.0), rel=1e-15)


@pytest.mark.parametrize("A", [0.25, 1.0, 3.0, 16.0, 64.0])
def test_grid_oracle_recovers_closed_form(A):
    g = grid_oracle(A, grid_n=256)
    o = optimal_pulse(A)
    assert isinstance(g, GridSearchResult)
    assert abs(g.s - 0.5) <= 1e-3
    assert abs(g.ell - o.ell) <= 1e-3
    assert g.value <= o.D_max + 1e-12
    assert g.value == pytest.approx(o.D_max, abs=1e-6)


def test_grid_oracle_lattice_stage_alone_is_coarser():
    g = grid_oracle(3.0, grid_n=64, polish=False)
    assert abs(g.ell - 1.0 / 3.0) <= 1.0 / 64.0
    assert g.s == g.s_grid and g.ell == g.ell_grid


def test_grid_oracle_validates_resolution():
    with pytest.raises(DomainError):
        grid_oracle(1.0, grid_n=16)


def test_small_mass_expansion_remainder_is_fourth_order():
    # one K must bound the remainder of the cubic model across the range
    K = 1.0 / 256.0
    for A in np.geomspace(1e-3, 1e-1, 13):
        res = abs(optimal_pulse(A).D_max
                  - (1.0 + A / 4.0 + A ** 3 / 192.0))
        assert res <= K * A ** 4
    assert small_mass_expansion(0.01) == pytest.approx(
        optimal_pulse(0.01).D_max, abs=1e-12)


def test_dominates_dirac_value():
    for A in np.geomspace(1e-3, 1e2, 21):
        assert optimal_pulse(A).D_max > 1.0 + A / 4.0


def test_mass_must_be_positive():
    with pytest.raises(DomainError):
        optimal_pulse(0.0)
    with pytest.raises(DomainError):
        support_fraction(-2.0)
    with pytest.raises(DomainError):
        optimal_pulse(math.nan)


def test_huge_mass_overflows_cleanly():
    with pytest.raises(RangeError):
        optimal_pulse(1e12)
