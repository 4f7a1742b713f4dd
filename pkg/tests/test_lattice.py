import math

import numpy as np
import pytest

from arithwaves import lattice


def test_r2_small_values():
    # 5 = 1+4 has 8 representations, 25 has 12, primes 3 mod 4 have none
    assert lattice.r2(1) == 4
    assert lattice.r2(2) == 4
    assert lattice.r2(5) == 8
    assert lattice.r2(25) == 12
    assert lattice.r2(3) == 0
    assert lattice.r2(21) == 0


@pytest.mark.parametrize("n", [1, 2, 5, 13, 25, 65, 325, 1105])
def test_eigenspace_structure(n):
    space = lattice.eigenspace(n)
    assert space.multiplicity == lattice.r2(n)
    assert len(space.half_set) * 2 == space.multiplicity
    pts = space.as_array()
    assert np.all(pts[:, 0] ** 2 + pts[:, 1] ** 2 == n)
    # closed under negation
    as_set = {tuple(p) for p in pts}
    assert {(-a, -b) for a, b in as_set} == as_set
    assert space.eigenvalue == pytest.approx(4 * math.pi**2 * n)


def test_eigenspace_raises_for_non_sums():
    with pytest.raises(lattice.NotSumOfTwoSquaresError):
        lattice.eigenspace(3)


def test_sum_two_squares_up_to():
    members = lattice.sum_two_squares_up_to(50)
    assert members[:10] == [1, 2, 4, 5, 8, 9, 10, 13, 16, 17]
    assert 3 not in members and 21 not in members


def test_r2_tables_agree_small():
    X = 300
    table = lattice.r2_table(X)
    formula = lattice.r2_formula_table(X)
    brute = np.array([0] + [lattice.r2_bruteforce(n) for n in range(1, X + 1)])
    assert np.array_equal(table, brute)
    assert np.array_equal(formula, brute)


def test_tau_hat_values():
    # n=5: angles atan2(+-1, +-2) and atan2(+-2, +-1); fourth coefficient -0.28
    assert lattice.tau_hat(5, 4) == pytest.approx(-0.28, abs=1e-12)
    # n=1: four axis points, tau_hat(4) = 1
    assert lattice.tau_hat(1, 4) == pytest.approx(1.0, abs=1e-12)
    # second coefficient vanishes: angles come in quadruples theta, -theta,
    # pi/2 - theta, pi/2 + theta, and cos(2 .) cancels over each quadruple
    assert lattice.tau_hat(5, 2) == pytest.approx(0.0, abs=1e-12)


def test_tau_hat_in_unit_interval():
    for n in (65, 325, 1105):
        assert abs(lattice.tau_hat(n, 4)) <= 1.0


def test_big_omega():
    assert lattice.big_omega(1) == 0
    assert lattice.big_omega(60) == 4  # 2*2*3*5
    assert lattice.big_omega(65) == 2


def test_half_set_convention():
    space = lattice.eigenspace(5)
    for p in space.half_set:
        assert p.a > 0 or (p.a == 0 and p.b > 0)
