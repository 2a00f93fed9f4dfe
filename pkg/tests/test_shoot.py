"""Shooting: bracket discovery, bisection convergence, and solution posts."""
from fractions import Fraction as F

import numpy as np
import pytest

from hext import coeffs_from_C, residual_check, shoot
from hext.errors import NoBracket


def test_m1_solution(shot_m1):
    res = shot_m1
    assert 2 < res.c_star < 22 / 3
    assert abs(res.defect) < 1e-8
    assert abs(res.trajectory.v[-1] - 8.0) < 1e-8
    assert res.iterations <= 60
    assert res.trajectory.interior_positive()
    # Neumann condition comes for free once the Dirichlet target is met
    assert abs(res.trajectory.phi[-1]) < 1e-8
    assert abs(res.phi_prime_end + 1.0) < 1e-5
    assert residual_check(res.trajectory) < 1e-6


def test_m1_not_hcsck_witness(shot_m1):
    res = shot_m1
    assert abs(res.a_slope) > 1e-3
    assert res.not_hcsck
    # slope agrees with the exact affine map at C*
    exact = float(coeffs_from_C(1, F(res.c_star)).A)
    assert res.a_slope == exact


def test_m1_bracket_edges(shot_m1):
    lo, hi = shot_m1.bracket
    assert -50 <= lo < hi
    assert lo < shot_m1.c_star < hi


def test_interior_positivity_equivalence(shot_m1):
    t = shot_m1.trajectory
    g = t.grid[1:-1]
    assert np.all(t.phi[1:-1] > 0)
    assert np.all(t.v[1:-1] > 2.0 * g * g)


@pytest.mark.parametrize("m", [2, 3])
def test_higher_m_roots_found(m):
    res = shoot(m)
    assert abs(res.defect) < 1e-8
    assert res.trajectory.interior_positive()
    assert abs(res.phi_prime_end + 1.0) < 1e-5
    assert abs(res.a_slope) > 1e-3  # still not hcscK


def test_no_bracket_raises_with_scan():
    # restrict the window to the all-negative-defect side
    with pytest.raises(NoBracket) as info:
        shoot(1, c_min=7.8, c_max=8.0)
    assert info.value.scan is not None
    assert all(p.defect is None or p.defect < 0 for p in info.value.scan.points)
