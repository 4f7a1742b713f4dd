import math

import numpy as np
import pytest

from arithwaves import lattice, sectors


def test_sector_validation():
    with pytest.raises(ValueError):
        sectors.Sector(R=1.0, alpha=0.5, beta=0.4)
    with pytest.raises(ValueError):
        sectors.Sector(R=-1.0, alpha=0.1, beta=0.4)


def test_gaussian_primes_in_sector():
    got = sectors.gaussian_primes_in_sector(sectors.Sector(3, 0.4, 0.8))
    assert got == [(2, 1)]
    # wider sector picks up both split primes of norm 5
    got = sectors.gaussian_primes_in_sector(sectors.Sector(3, 0.1, 1.5))
    assert got == [(2, 1), (1, 2)]
    # inert primes (norm 9 = 3^2 etc.) never appear
    got = sectors.gaussian_primes_in_sector(sectors.Sector(10, 0.01, 1.56))
    norms = {a * a + b * b for a, b in got}
    assert all(q % 4 == 1 and q > 1 for q in norms)


def test_smallest_prime_in_interval():
    p = sectors.smallest_prime_in_interval(0.4, 0.8, norm_cap=100)
    assert p == (2, 1)
    # empty when the cap is too small
    assert sectors.smallest_prime_in_interval(0.05, 0.06, norm_cap=3) is None


def test_nu_intervals_structure():
    iv = sectors.nu_s_intervals(0.5, 3)
    assert len(iv) == 3
    widths = [b - a for a, b in iv]
    assert all(w > 0 for w in widths)
    assert iv[0][0] == pytest.approx(0.5 / 8)
    with pytest.raises(ValueError):
        sectors.nu_s_intervals(1.0, 2)  # s > pi/4


def test_sumset_separation():
    iv = sectors.nu_s_intervals(0.5, 2)
    thetas = [(a + b) / 2 for a, b in iv]
    assert sectors.sumset_separation_check(thetas, 0.5, 2)
    with pytest.raises(ValueError):
        sectors.sumset_separation_check([0.9, 0.9], 0.5, 2)


@pytest.mark.parametrize("s", [0.1, 0.4, math.pi / 4])
def test_nu_fourier_closed_form(s):
    closed, quad = sectors.nu_s_fourier(s, 4)
    assert closed == pytest.approx(math.sin(4 * s) / (4 * s), abs=1e-14)
    assert quad == pytest.approx(closed, abs=1e-10)
    # indices not divisible by 4 vanish by quarter-turn symmetry
    for k in (1, 2, 3, 5, 6):
        c, q = sectors.nu_s_fourier(s, k)
        assert c == 0.0
        assert abs(q) < 1e-10


def test_nu_mass():
    for s in (0.1, 0.5):
        assert sectors.nu_s_mass(s) == pytest.approx(1.0, abs=1e-10)


def test_construct_frozen():
    b = sectors.construct_nu_target(0.5, 2, 1e6)
    assert b.n == 9169
    assert b.primes == [(13, 2), (7, 2)]
    assert lattice.eigenspace(b.n).multiplicity == 16


def test_construct_empty_sector():
    with pytest.raises(sectors.SectorEmptyError):
        sectors.construct_nu_target(0.5, 2, R=5.0)


def test_wasserstein_to_nu_sanity():
    # a dense uniform sample of the four arcs should be close to nu_s
    s = 0.5
    rng = np.random.default_rng(0)
    arcs = rng.integers(0, 4, size=200_000) * math.pi / 2
    angles = arcs + rng.uniform(-s, s, size=200_000)
    assert sectors.wasserstein_to_nu(angles, s) < 0.01
    # a point mass is far from it
    assert sectors.wasserstein_to_nu(np.zeros(100), s) > 0.3
