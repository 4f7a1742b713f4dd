import math

import pytest

from arithwaves import correlations, lattice


def test_spectral_counts_frozen():
    # exhaustive enumeration oracles, frozen
    assert correlations.spectral_correlations(5, 2).count_S == 8
    assert correlations.spectral_correlations(5, 4).count_S == 168
    assert correlations.spectral_correlations(5, 6).count_S == 5840
    assert correlations.spectral_correlations(25, 4).count_S == 396


def test_pair_count_equals_multiplicity():
    # 2-tuples summing to zero are exactly the antipodal pairs
    for n in (1, 2, 5, 13, 65):
        N = lattice.eigenspace(n).multiplicity
        assert correlations.spectral_correlations(n, 2).count_S == N


@pytest.mark.parametrize("n", [5, 13, 25, 65])
def test_zygmund_identity(n):
    N = lattice.eigenspace(n).multiplicity
    S4 = correlations.spectral_correlations(n, 4).count_S
    D4 = correlations.diagonal_correlations(n, 4).count_D
    assert S4 == D4 == 3 * N * N - 3 * N


def test_quasi_counts_frozen():
    assert correlations.quasi_count(5, 4, 1.0) == 0
    assert correlations.quasi_count(5, 2, 3.0) == 16
    # threshold just below the max pair-sum norm catches everything except
    # the N cancelling pairs and the N doubled pairs (norm exactly 2 sqrt(n))
    N = lattice.eigenspace(5).multiplicity
    full = correlations.quasi_count(5, 2, 2 * math.sqrt(5) - 1e-9)
    assert full == N * N - 2 * N
    assert correlations.quasi_count(5, 2, 2 * math.sqrt(5) + 1e-9) == N * N - N


def test_threshold_rules():
    assert correlations.separatedness_threshold(100, 0.2) == pytest.approx(
        100 ** 0.3
    )
    assert correlations.separatedness_threshold(
        100, 0.2, rule="n^((1-delta)/2)"
    ) == pytest.approx(100 ** 0.4)
    with pytest.raises(ValueError):
        correlations.separatedness_threshold(100, 0.2, rule="bogus")


def test_separated_and_lemma():
    # n = 5 has the nonzero pair sum (1, 2) + (-2, -1) of norm sqrt(2) below
    # the threshold 5^0.3; n = 29 has no pair sum below 29^0.3
    assert not correlations.separated(5, 2, 0.2)
    assert correlations.separated(29, 2, 0.2)
    v = correlations.check_two_implies_four(65, 0.2)
    assert set(v) >= {"holds2", "holds4", "lemma_respected"}
    assert v["lemma_respected"]


def test_work_limit():
    with pytest.raises(correlations.WorkLimitExceeded):
        correlations.spectral_correlations(325, 6, work_limit=10)


def test_scan_exceptional_shape():
    rep = correlations.scan_exceptional(64, 2, 0.3)
    assert rep.range == (64, 128)
    assert 0.0 <= rep.fraction <= 1.0
    assert all(64 <= n <= 128 for n in rep.scanned)
    assert set(rep.exceptional) <= set(rep.scanned)


def test_gaussian_count_frozen():
    # single Gaussian integer, |a| in [3, 6], cos(pi/2 + theta) in (0, 3^-0.5)
    count = correlations.gaussian_count_S_pm(
        3.0, 1, 1, [[1]], [1], [1], "+", 0.5
    )
    assert count == 36
    with pytest.raises(correlations.WorkLimitExceeded):
        correlations.gaussian_count_S_pm(300.0, 2, 1, [[1, 1]], [1], [0], "+", 0.5)
