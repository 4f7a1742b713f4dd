"""Gaussian primes in narrow sectors and the four-arc limit measures.

The construction here multiplies one split Gaussian prime per dyadic
subinterval of [0, s]; the angle set of the resulting circle of lattice points
is the signed sumset of the prime angles, rotated over quarter turns, and its
atomic measure approximates the four-arc uniform measure as the number of
factors grows.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import sympy
from scipy.integrate import quad

from .lattice import eigenspace


@dataclass(frozen=True)
class Sector:
    """First-quadrant angular sector of radius R."""

    R: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.R > 0 and 0 <= self.alpha < self.beta <= math.pi / 2):
            raise ValueError("require R > 0 and 0 <= alpha < beta <= pi/2")


@dataclass
class NuConstruction:
    s: float
    k: int
    intervals: list[tuple[float, float]]
    primes: list[tuple[int, int]]
    n: int
    angles: list[float]


class SectorEmptyError(RuntimeError):
    def __init__(self, j: int, interval: tuple[float, float], R: float):
        super().__init__(
            f"no Gaussian prime with angle in [{interval[0]:.6g}, "
            f"{interval[1]:.6g}] within radius {R:.6g} (sector index {j})"
        )
        self.j = j


def _is_split_norm(q: int) -> bool:
    """Norms of split Gaussian primes: rational primes = 1 mod 4.

    The ramified prime of norm 2 sits at a quarter-turn-symmetric angle and
    carries no angular freedom, so it is excluded along with the inert primes.
    """
    return q % 4 == 1 and sympy.isprime(q)


def gaussian_primes_in_sector(sec: Sector, radius_cap: float = 1e5) -> list[tuple[int, int]]:
    """All Gaussian primes a+bi (a, b >= 0, angle-carrying) in the sector.

    Inert rational primes q = 3 mod 4 are excluded: they sit on the real axis
    with squared norms and carry no angular freedom.
    """
    if sec.R > radius_cap:
        raise ValueError(f"R={sec.R} exceeds desk-scale bound {radius_cap}")
    out: list[tuple[int, int]] = []
    amax = math.floor(sec.R)
    R2 = sec.R * sec.R
    for a in range(0, amax + 1):
        bmax = math.floor(math.sqrt(max(R2 - a * a, 0.0)))
        for b in range(0, bmax + 1):
            if a == 0 and b == 0:
                continue
            if not sec.alpha < math.atan2(b, a) < sec.beta:
                continue
            if _is_split_norm(a * a + b * b):
                out.append((a, b))
    out.sort(key=lambda p: (p[0] ** 2 + p[1] ** 2, math.atan2(p[1], p[0])))
    return out


def smallest_prime_in_interval(
    alpha: float, beta: float, norm_cap: float
) -> tuple[int, int] | None:
    """Smallest-norm Gaussian prime with angle in [alpha, beta]; ties broken by
    smaller angle.  Incremental search over the real part, pruned once the real
    part alone exceeds the best norm found."""
    best: tuple[int, tuple[int, int]] | None = None
    a = 1
    while a * a <= norm_cap * norm_cap:
        if best is not None and a * a > best[0]:
            break
        lo = math.floor(a * math.tan(alpha))
        hi = math.ceil(a * math.tan(beta)) if beta < math.pi / 2 - 1e-12 else 10**9
        hi = min(hi, math.floor(math.sqrt(max(norm_cap * norm_cap - a * a, 0.0))))
        for b in range(max(lo, 0), hi + 1):
            if not alpha <= math.atan2(b, a) <= beta:
                continue
            q = a * a + b * b
            if q > norm_cap * norm_cap:
                continue
            if _is_split_norm(q) and (best is None or q < best[0]):
                best = (q, (a, b))
        a += 1
    return best[1] if best else None


def nu_s_intervals(s: float, k: int) -> list[tuple[float, float]]:
    """Dyadic subintervals [s*2^j/2^k, s*2^j/2^k * (1 + 1/k^2)], j = 0..k-1."""
    if not 0 < s <= math.pi / 4:
        raise ValueError("s must be in (0, pi/4]")
    if k < 1:
        raise ValueError("k must be >= 1")
    out = []
    for j in range(k):
        a = s * 2**j / 2**k
        out.append((a, a * (1.0 + 1.0 / k**2)))
    # disjointness and containment are structural; assert them
    for (a1, b1), (a2, b2) in zip(out, out[1:]):
        assert b1 < a2, "dyadic subintervals must be pairwise disjoint"
    assert out[-1][1] <= s * (1.0 + 1.0 / k**2) + 1e-15
    return out


def sumset_separation_check(thetas: list[float], s: float, k: int) -> bool:
    """All 2^k signed sums of the angles must be pairwise (s/2^k)-separated."""
    intervals = nu_s_intervals(s, k)
    if len(thetas) != k:
        raise ValueError("need one angle per subinterval")
    for th, (a, b) in zip(thetas, intervals):
        if not a <= th <= b:
            raise ValueError(f"angle {th} outside its subinterval [{a}, {b}]")
    sums = sorted(
        sum(e * t for e, t in zip(signs, thetas))
        for signs in itertools.product((-1, 1), repeat=k)
    )
    gap = s / 2**k
    return all(b - a >= gap - 1e-12 for a, b in zip(sums, sums[1:]))


def construct_nu_target(s: float, k: int, R: float) -> NuConstruction:
    """Pick the smallest-norm Gaussian prime per dyadic subinterval and form
    n as the squared norm of their product; verifies that the angle multiset of
    the resulting circle is the quarter-turn orbit of the signed angle sumset.
    """
    intervals = nu_s_intervals(s, k)
    primes: list[tuple[int, int]] = []
    for j, (a, b) in enumerate(intervals):
        p = smallest_prime_in_interval(a, b, norm_cap=R)
        if p is None:
            raise SectorEmptyError(j, (a, b), R)
        primes.append(p)
    norms = [p[0] ** 2 + p[1] ** 2 for p in primes]
    n = math.prod(norms)
    if math.sqrt(n) > R + 1e-9:
        raise SectorEmptyError(-1, (0.0, 0.0), R)
    thetas = [math.atan2(b, a) for (a, b) in primes]

    # expected angle multiset: quarter turns of the signed sumset
    expected = []
    for signs in itertools.product((-1, 1), repeat=k):
        base = sum(e * t for e, t in zip(signs, thetas))
        for j in range(4):
            expected.append((base + j * math.pi / 2) % (2 * math.pi))
    actual = sorted(a % (2 * math.pi) for a in eigenspace(n).angles())
    expected = sorted(expected)
    if len(actual) != len(expected) or any(
        min(abs(x - y), 2 * math.pi - abs(x - y)) > 1e-9
        for x, y in zip(actual, expected)
    ):
        raise AssertionError(
            f"angle multiset of the circle for n={n} does not match the "
            "signed-sumset structure (non-distinct or non-split factors?)"
        )
    return NuConstruction(
        s=s, k=k, intervals=intervals, primes=primes, n=n, angles=thetas
    )


def nu_s_fourier(s: float, k: int) -> tuple[float, float]:
    """k-th Fourier coefficient of the four-arc measure: closed form and
    adaptive quadrature of the defining integral.  Returns (closed, quad)."""
    if s == 0:
        return (1.0 if k % 4 == 0 else 0.0,) * 2
    if not 0 < s <= math.pi / 4:
        raise ValueError("s must be in [0, pi/4]")
    if k % 4 != 0:
        closed = 0.0
    elif k == 0:
        closed = 1.0
    else:
        closed = math.sin(k * s) / (k * s)
    total = 0.0
    for j in range(4):
        val, _ = quad(
            lambda th: math.cos(k * th),
            -s + j * math.pi / 2,
            s + j * math.pi / 2,
            epsabs=1e-12,
            epsrel=1e-12,
        )
        total += val
    return closed, total / (8.0 * s)


def nu_s_mass(s: float) -> float:
    """Quadrature total mass of the four-arc measure (sanity check: 1)."""
    total = 0.0
    for j in range(4):
        val, _ = quad(lambda th: 1.0, -s + j * math.pi / 2, s + j * math.pi / 2)
        total += val
    return total / (8.0 * s)


def _bin_masses_nu(s: float, edges: np.ndarray) -> np.ndarray:
    """Mass of the four-arc measure in each bin [edges[i], edges[i+1])."""
    arcs = [(-s + j * math.pi / 2, s + j * math.pi / 2) for j in range(4)]
    masses = np.zeros(len(edges) - 1)
    for lo, hi in arcs:
        for shift in (0.0, 2 * math.pi):
            a, b = lo + shift, hi + shift
            left = np.clip(a, edges[:-1], edges[1:])
            right = np.clip(b, edges[:-1], edges[1:])
            masses += np.maximum(right - left, 0.0) / (8.0 * s)
    return masses


def wasserstein_to_nu(angles: np.ndarray, s: float, bins: int = 4096) -> float:
    """W1 distance on the circle between the uniform atomic measure on the
    given angles and the four-arc measure.  Computed on a fine grid via the
    circular CDF-median formula."""
    edges = np.linspace(0.0, 2 * math.pi, bins + 1)
    atom_mass, _ = np.histogram(np.mod(angles, 2 * math.pi), bins=edges)
    atom_mass = atom_mass / atom_mass.sum()
    nu_mass = _bin_masses_nu(s, edges)
    diff = np.cumsum(atom_mass - nu_mass)
    c = np.median(diff)
    width = 2 * math.pi / bins
    return float(np.sum(np.abs(diff - c)) * width)
