"""Exact integer arithmetic for sums of two squares and lattice points on circles.

Everything here is deterministic and exact: lattice points are enumerated by
brute force over integer coordinates, and representation counts are
cross-checked against the multiplicative formula for r_2(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import sympy


class NotSumOfTwoSquaresError(ValueError):
    """Raised when an operation requires a nonempty circle of lattice points."""

    def __init__(self, n: int):
        super().__init__(f"n={n} is not a sum of two squares (r_2(n) = 0)")
        self.n = n


@dataclass(frozen=True, order=True)
class LatticePoint:
    """Integer vector (a, b) with squared norm a^2 + b^2."""

    a: int
    b: int

    @property
    def norm_sq(self) -> int:
        return self.a * self.a + self.b * self.b

    @property
    def angle(self) -> float:
        return math.atan2(self.b, self.a)

    def __neg__(self) -> "LatticePoint":
        return LatticePoint(-self.a, -self.b)


@dataclass(frozen=True)
class Eigenspace:
    """All lattice points on the circle of squared radius n, with metadata.

    half_set keeps one representative per +/- pair (a > 0, or a = 0 and b > 0),
    which is the storage convention for random coefficients downstream.
    """

    n: int
    points: tuple[LatticePoint, ...]
    half_set: tuple[LatticePoint, ...] = field(init=False)

    def __post_init__(self):
        half = tuple(
            p for p in self.points if p.a > 0 or (p.a == 0 and p.b > 0)
        )
        object.__setattr__(self, "half_set", half)

    @property
    def multiplicity(self) -> int:
        return len(self.points)

    @property
    def eigenvalue(self) -> float:
        return 4.0 * math.pi**2 * self.n

    def as_array(self) -> np.ndarray:
        """Points as an (N, 2) integer array."""
        return np.array([(p.a, p.b) for p in self.points], dtype=np.int64)

    def half_array(self) -> np.ndarray:
        return np.array([(p.a, p.b) for p in self.half_set], dtype=np.int64)

    def angles(self) -> np.ndarray:
        return np.array([p.angle for p in self.points])


@dataclass(frozen=True)
class AngularMeasure:
    """Probability measure on the unit circle: either the atomic angle measure
    of an eigenspace or the four-arc uniform measure nu_s (see sectors module
    for nu_s integration)."""

    kind: str  # "atomic" or "nu"
    atoms: tuple[float, ...] = ()
    s: float = 0.0

    def total_mass(self) -> float:
        if self.kind == "atomic":
            return 1.0 if self.atoms else 0.0
        return 1.0

    @staticmethod
    def atomic(space: Eigenspace) -> "AngularMeasure":
        return AngularMeasure(kind="atomic", atoms=tuple(space.angles()))

    @staticmethod
    def nu(s: float) -> "AngularMeasure":
        return AngularMeasure(kind="nu", s=s)


def sum_two_squares_up_to(X: int) -> list[int]:
    """All n in [1, X] expressible as a^2 + b^2, ascending."""
    if X < 1:
        raise ValueError("X must be >= 1")
    hit = np.zeros(X + 1, dtype=bool)
    amax = math.isqrt(X)
    for a in range(amax + 1):
        bmax = math.isqrt(X - a * a)
        b2 = np.arange(bmax + 1, dtype=np.int64) ** 2
        hit[a * a + b2] = True
    hit[0] = False
    return np.flatnonzero(hit).tolist()


def lattice_points(n: int) -> Eigenspace:
    """Enumerate all (a, b) with a^2 + b^2 = n by brute force."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pts: list[LatticePoint] = []
    amax = math.isqrt(n)
    for a in range(-amax, amax + 1):
        rem = n - a * a
        b = math.isqrt(rem)
        if b * b == rem:
            pts.append(LatticePoint(a, b))
            if b > 0:
                pts.append(LatticePoint(a, -b))
    return Eigenspace(n=n, points=tuple(sorted(pts)))


@lru_cache(maxsize=4096)
def eigenspace(n: int) -> Eigenspace:
    """Cached lattice_points; raises if the circle is empty."""
    space = lattice_points(n)
    if space.multiplicity == 0:
        raise NotSumOfTwoSquaresError(n)
    return space


def r2_bruteforce(n: int) -> int:
    """Representation count by direct enumeration."""
    count = 0
    amax = math.isqrt(n)
    for a in range(-amax, amax + 1):
        rem = n - a * a
        b = math.isqrt(rem)
        if b * b == rem:
            count += 1 if b == 0 else 2
    return count


def r2_formula(n: int, factors: dict[int, int] | None = None) -> int:
    """Multiplicative formula: 4 * prod(e_p + 1) over p = 1 mod 4, zero when
    some p = 3 mod 4 divides n to an odd power."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if factors is None:
        factors = sympy.factorint(n)
    count = 4
    for p, e in factors.items():
        if p % 4 == 1:
            count *= e + 1
        elif p % 4 == 3 and e % 2 == 1:
            return 0
    return count


def r2(n: int) -> int:
    """Representation count, computed both ways; the two must agree."""
    brute = r2_bruteforce(n)
    formula = r2_formula(n)
    if brute != formula:
        raise AssertionError(
            f"r_2({n}): brute force {brute} != multiplicative formula {formula}"
        )
    return brute


def r2_table(X: int) -> np.ndarray:
    """r_2(n) for all n in [0, X] at once, via a lattice-point histogram."""
    amax = math.isqrt(X)
    counts = np.zeros(X + 1, dtype=np.int64)
    for a in range(-amax, amax + 1):
        bmax = math.isqrt(X - a * a)
        b = np.arange(-bmax, bmax + 1, dtype=np.int64)
        np.add.at(counts, a * a + b * b, 1)
    counts[0] = 0  # n = 0 excluded by convention
    return counts


def r2_formula_table(X: int) -> np.ndarray:
    """r_2(n) for all n in [0, X] from the multiplicative formula, using a
    smallest-prime-factor sieve."""
    spf = np.zeros(X + 1, dtype=np.int64)
    for p in range(2, X + 1):
        if spf[p] == 0:
            view = spf[p::p]
            view[view == 0] = p
    out = np.zeros(X + 1, dtype=np.int64)
    for n in range(1, X + 1):
        m = n
        val = 4
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if p % 4 == 1:
                val *= e + 1
            elif p % 4 == 3 and e % 2 == 1:
                val = 0
                break
        out[n] = val
    return out


def big_omega(n: int) -> int:
    """Number of prime divisors counted with multiplicity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum(sympy.factorint(n).values())


def tau_hat(n: int, k: int, tol: float = 1e-9) -> float:
    """k-th Fourier coefficient of the atomic angle measure of the circle.

    Returns the real part (1/N) * sum cos(k * theta); the imaginary part
    vanishes by the lambda -> -lambda symmetry and is asserted.
    """
    space = eigenspace(n)
    theta = space.angles()
    re = float(np.mean(np.cos(k * theta)))
    im = float(np.mean(np.sin(k * theta)))
    assert abs(im) < tol, f"tau_hat({n},{k}): imaginary part {im} not negligible"
    return re
