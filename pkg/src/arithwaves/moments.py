"""Restricted and full moments of the covariance and its derivative traces.

Double integrals over B(s) x B(s) of functions of the displacement reduce to
single integrals against the lens-area kernel gamma_s (area of the overlap of
two radius-s discs).  Two independent evaluation routes are kept for the
restricted moments: a Bessel-weighted sum over tuple-sum frequencies and a
direct polar quadrature against the lens kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.signal import fftconvolve
from scipy.special import j1

from .correlations import WorkLimitExceeded
from .field import covariance_arrays
from .lattice import eigenspace, tau_hat

TWO_PI = 2.0 * math.pi
SINGULAR_THRESHOLD = 7.0 / 8.0


@dataclass
class MomentReport:
    n: int
    s: float
    entries: list[dict] = field(default_factory=list)
    excluded_weight: float = 0.0
    method: str = "lens_quadrature"


@dataclass
class SingularPartition:
    n: int
    s: float
    c0: float
    F: int
    threshold: float
    singular_cubes: int
    covered_measure: float
    mc_estimate: float
    mc_se: float
    # arrays for downstream sampling: cell index window, position mask,
    # displacement offsets marked singular with their pair counts
    origin: tuple[int, int] = (0, 0)
    position_mask: np.ndarray | None = None
    singular_offsets: np.ndarray | None = None
    singular_pair_counts: np.ndarray | None = None

    @property
    def cube_side(self) -> float:
        return 1.0 / self.F


def disc_ft(xi: np.ndarray, s: float) -> np.ndarray:
    """Fourier transform of the indicator of a radius-s disc at frequency xi.

    Equals s * J1(2 pi s |xi|) / |xi| away from zero and pi s^2 at zero.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    rho = np.linalg.norm(xi, axis=-1)
    out = np.full(rho.shape, math.pi * s * s)
    nz = rho > 0
    out[nz] = s * j1(TWO_PI * s * rho[nz]) / rho[nz]
    return out


def lens_area(d: np.ndarray, s: float) -> np.ndarray:
    """Area of the intersection of two radius-s discs with centers d apart."""
    d = np.asarray(d, dtype=float)
    u = np.clip(d / (2.0 * s), 0.0, 1.0)
    return 2.0 * s * s * np.arccos(u) - (d / 2.0) * np.sqrt(
        np.maximum(4.0 * s * s - d * d, 0.0)
    )


def _point_indicator(n: int) -> tuple[np.ndarray, int]:
    """0/1 array over [-R, R]^2 marking the circle lattice points."""
    R = math.isqrt(n) + 1
    A = np.zeros((2 * R + 1, 2 * R + 1))
    for a, b in eigenspace(n).as_array():
        A[a + R, b + R] = 1.0
    return A, R


def tuple_sum_counts(n: int, l: int, work_limit: int = 10**9) -> tuple[np.ndarray, int]:
    """Counts of l-tuple sums of circle lattice points, as a dense array.

    Returns (counts, R) with counts[v + R] the number of ordered l-tuples
    summing to v; computed by repeated FFT self-convolution of the point
    indicator.
    """
    if not 2 <= l <= 6:
        raise ValueError("l must be in [2, 6]")
    A, R = _point_indicator(n)
    if (2 * l * R + 1) ** 2 > work_limit:
        raise WorkLimitExceeded((2 * l * R + 1) ** 2, work_limit)
    conv = A
    for _ in range(l - 1):
        conv = fftconvolve(conv, A)
    counts = np.rint(conv)
    counts[counts < 0] = 0
    return counts, l * R


def _sum_grid(R: int) -> np.ndarray:
    """(2R+1, 2R+1, 2) array of integer frequency vectors."""
    ax = np.arange(-R, R + 1)
    return np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).astype(float)


def full_moment(n: int, l: int) -> dict[str, float]:
    """Integral of r^l over the torus, both ways.

    The tuple count |S_n(l)| / N^l and exact quadrature on a uniform grid
    finer than the bandwidth of r^l; returns both, asserting agreement.
    """
    from .correlations import spectral_correlations

    N = eigenspace(n).multiplicity
    enum = spectral_correlations(n, l).count_S / N**l
    G = int(2 * l * math.sqrt(n)) + 3
    spec = np.zeros((G, G), dtype=complex)
    for a, b in eigenspace(n).as_array():
        spec[a % G, b % G] += 1.0 / N
    r = (np.fft.ifft2(spec) * G * G).real
    quad = float(np.mean(r**l))
    if abs(enum - quad) > 1e-10 * max(1.0, abs(enum)):
        raise AssertionError(
            f"full moment mismatch n={n} l={l}: {enum} vs {quad}"
        )
    return {"enumeration": enum, "quadrature": quad}


def polar_lens_nodes(
    n: int, s: float, l: int = 2, rho_min: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes z and weights w with sum(w f(z)) ~ integral of
    f(z) gamma_s(|z|) dz over rho_min < |z| < 2s.

    Node counts scale with the oscillation budget l * s * sqrt(n).
    """
    budget = l * 2.0 * s * math.sqrt(n)
    nr = int(2 * math.pi * budget) + 64
    nphi = int(8 * math.pi * budget) + 64
    x, wx = leggauss(nr)
    rho = rho_min + (2.0 * s - rho_min) * (x + 1.0) / 2.0
    wr = wx * (2.0 * s - rho_min) / 2.0
    phi = np.arange(nphi) * TWO_PI / nphi
    wphi = TWO_PI / nphi
    Z = np.stack(
        [np.outer(rho, np.cos(phi)), np.outer(rho, np.sin(phi))], axis=-1
    ).reshape(-1, 2)
    W = np.outer(wr * rho * lens_area(rho, s), np.full(nphi, wphi)).reshape(-1)
    return Z, W


def restricted_moment(n: int, l: int, s: float, method: str = "bessel_sum") -> float:
    """Integral of r(x - y)^l over B(s) x B(s)."""
    if not 0 < s < 0.5:
        raise ValueError("s must be in (0, 1/2)")
    N = eigenspace(n).multiplicity
    if method == "bessel_sum":
        counts, R = tuple_sum_counts(n, l)
        nz = counts > 0
        freqs = _sum_grid(R)[nz]
        return float(np.sum(counts[nz] * disc_ft(freqs, s) ** 2)) / N**l
    if method == "lens_quadrature":
        Z, W = polar_lens_nodes(n, s, l=l)
        r = covariance_arrays(n, Z)["r"]
        return float(np.sum(W * r**l))
    raise ValueError(f"unknown method {method!r}")


def oscillatory_sum(n: int, l: int, s: float, K: float) -> dict[str, float]:
    """Off-diagonal Bessel-weighted sum and its frequency-count bound.

    lhs sums |disc_ft|^2 over all l-tuples with nonzero sum (independent of
    K); bound = s^4 (|C_n(l; K)| + N^l / (K s)^3).
    """
    if l not in (2, 4, 6):
        raise ValueError("l must be 2, 4 or 6")
    N = eigenspace(n).multiplicity
    counts, R = tuple_sum_counts(n, l)
    counts[R, R] = 0.0  # drop the cancelling tuples
    nz = counts > 0
    freqs = _sum_grid(R)[nz]
    lhs = float(np.sum(counts[nz] * disc_ft(freqs, s) ** 2))
    norms = np.linalg.norm(freqs, axis=-1)
    quasi = float(np.sum(counts[nz][norms <= K]))
    bound = s**4 * (quasi + N**l / (K * s) ** 3)
    return {"lhs": lhs, "bound": bound, "quasi_count": quasi}


_LEADING_NAMES = [
    "r2", "r4", "r6", "trX", "trY2", "trXY2", "trX2", "trY4",
    "trY2_sq", "trX_trY2", "r2trX", "r2trY2", "trX3", "trY6",
]


def _leading_terms(n: int, s: float) -> dict[str, float]:
    N = eigenspace(n).multiplicity
    t4 = tau_hat(n, 4)
    A = (math.pi * s * s) ** 2
    return {
        "r2": A / N,
        "r4": 3.0 * A / N**2,
        "r6": 0.0,
        "trX": A * (-2.0 / N - 2.0 / N**2),
        "trY2": A * (4.0 / N - 4.0 / N**2),
        "trXY2": -4.0 * A / N**2,
        "trX2": 8.0 * A / N**2,
        "trY4": 2.0 * (11.0 + t4 * t4) * A / N**2,
        "trY2_sq": 4.0 * (7.0 + t4 * t4) * A / N**2,
        "trX_trY2": -8.0 * A / N**2,
        "r2trX": -2.0 * A / N**2,
        "r2trY2": 8.0 * A / N**2,
        "trX3": 0.0,
        "trY6": 0.0,
    }


def moment_suite(
    n: int, s: float, threshold: float = SINGULAR_THRESHOLD
) -> MomentReport:
    """The 14 trace-moment integrals over B(s) x B(s) plus the restricted
    moments R(l; s) for l in {2, 4, 6}, with their predicted leading terms.

    Displacements where |r| exceeds the singular threshold are excluded from
    the quadrature; the excluded lens-kernel weight is reported.
    """
    if not 0 < s < 0.5:
        raise ValueError("s must be in (0, 1/2)")
    Z, W = polar_lens_nodes(n, s, l=6)
    cov = covariance_arrays(n, Z)
    r, D, H = cov["r"], cov["D"], cov["H"]
    mask = np.abs(r) <= threshold
    excluded = float(np.sum(W[~mask]))
    r, D, H, W = r[mask], D[mask], H[mask], W[mask]
    E = eigenspace(n).eigenvalue
    one_minus = 1.0 - r**2
    DtD = np.einsum("mi,mj->mij", D, D)
    X = -2.0 / (E * one_minus)[:, None, None] * DtD
    Y = -2.0 / E * (H + (r / one_minus)[:, None, None] * DtD)
    trX = np.trace(X, axis1=-2, axis2=-1)
    Y2 = Y @ Y
    trY2 = np.trace(Y2, axis1=-2, axis2=-1)
    kernels = {
        "r2": r**2,
        "r4": r**4,
        "r6": r**6,
        "trX": trX,
        "trY2": trY2,
        "trXY2": np.trace(X @ Y2, axis1=-2, axis2=-1),
        "trX2": np.trace(X @ X, axis1=-2, axis2=-1),
        "trY4": np.trace(Y2 @ Y2, axis1=-2, axis2=-1),
        "trY2_sq": trY2**2,
        "trX_trY2": trX * trY2,
        "r2trX": r**2 * trX,
        "r2trY2": r**2 * trY2,
        "trX3": np.trace(X @ X @ X, axis1=-2, axis2=-1),
        "trY6": np.trace(Y2 @ Y2 @ Y2, axis1=-2, axis2=-1),
    }
    pred = _leading_terms(n, s)
    report = MomentReport(n=n, s=s, excluded_weight=excluded)
    for name in _LEADING_NAMES:
        numeric = float(np.sum(W * kernels[name]))
        p = pred[name]
        rel = abs(numeric - p) / abs(p) if p != 0.0 else float("nan")
        report.entries.append(
            {"name": name, "numeric": numeric, "predicted_leading": p, "rel_dev": rel}
        )
    from .correlations import spectral_correlations

    N = eigenspace(n).multiplicity
    A = (math.pi * s * s) ** 2
    for l in (2, 4, 6):
        numeric = restricted_moment(n, l, s, method="bessel_sum")
        p = A * spectral_correlations(n, l).count_S / N**l
        rel = abs(numeric - p) / abs(p)
        report.entries.append(
            {
                "name": f"R({l};s)",
                "numeric": numeric,
                "predicted_leading": p,
                "rel_dev": rel,
            }
        )
    return report


def singular_partition(
    n: int,
    s: float,
    c0: float = 0.1,
    threshold: float = SINGULAR_THRESHOLD,
    subgrid: int = 4,
    mc_draws: int = 100_000,
    seed: int = 0,
) -> SingularPartition:
    """Cover B(s) x B(s) by 4-d cubes of side c0/sqrt(n) and count the cubes
    that can meet the singular set |r| > threshold.

    A cube is classified by its displacement cell: the displacement between
    its two position cells ranges over a square of side 2/F, which is sampled
    on a subgrid with a Lipschitz safety margin (|grad r| <= 2 pi sqrt(n)), so
    the classification is conservative.  Cube pair counts per displacement are
    obtained from the autocorrelation of the position-cell mask.
    """
    if not 0 < c0 <= 1:
        raise ValueError("c0 must be in (0, 1]")
    if not 0 < s < 0.5:
        raise ValueError("s must be in (0, 1/2)")
    F = math.ceil(math.sqrt(n) / c0)
    half_diag = math.sqrt(2.0) / (2.0 * F)

    i_lo = math.floor((0.5 - s) * F) - 1
    i_hi = math.ceil((0.5 + s) * F) + 1
    idx = np.arange(i_lo, i_hi + 1)
    centers = (idx + 0.5) / F
    cx, cy = np.meshgrid(centers, centers, indexing="ij")
    dist = np.hypot(cx - 0.5, cy - 0.5)
    P = dist <= s + half_diag  # cells that can meet the ball
    if np.any(dist[P] > 2.0 * s):
        raise AssertionError("cube center strayed outside B(2s)")

    # pair counts per integer displacement offset via autocorrelation
    m = P.shape[0]
    pad = 2 * m
    Fh = np.fft.rfft2(P.astype(float), s=(pad, pad))
    corr = np.fft.irfft2(Fh * np.conj(Fh), s=(pad, pad))
    corr = np.rint(np.fft.fftshift(corr))
    off_ax = np.arange(-pad // 2, pad // 2)
    keep = np.abs(off_ax) <= m - 1
    corr = corr[np.ix_(keep, keep)]
    off_ax = off_ax[keep]
    ox, oy = np.meshgrid(off_ax, off_ax, indexing="ij")
    has_pairs = corr > 0

    # classify displacement cells: sample |r| over the side-2/F square
    offs = np.stack([ox[has_pairs], oy[has_pairs]], axis=-1).astype(float) / F
    step = 2.0 / (F * subgrid)
    sub = -1.0 / F + step * (np.arange(subgrid) + 0.5)
    sx, sy = np.meshgrid(sub, sub, indexing="ij")
    shifts = np.stack([sx.ravel(), sy.ravel()], axis=-1)  # (subgrid^2, 2)
    safety = TWO_PI * math.sqrt(n) * step * math.sqrt(2.0) / 2.0
    max_abs_r = np.zeros(len(offs))
    chunk = max(1, 10**7 // (len(shifts) * eigenspace(n).multiplicity))
    for i in range(0, len(offs), chunk):
        pts = (offs[i : i + chunk, None, :] + shifts[None, :, :]).reshape(-1, 2)
        rv = covariance_arrays(n, pts)["r"].reshape(-1, len(shifts))
        max_abs_r[i : i + chunk] = np.abs(rv).max(axis=1)
    singular = max_abs_r > threshold - safety

    pair_counts = corr[has_pairs]
    n_singular = int(np.sum(pair_counts[singular]))
    covered = n_singular / float(F) ** 4

    # Monte Carlo cross-check of the actual singular measure
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 0], dtype=np.uint64)))
    u = rng.random((mc_draws, 4))
    rad = s * np.sqrt(u[:, [0, 2]])
    ang = TWO_PI * u[:, [1, 3]]
    x = rad[:, 0:1] * np.stack([np.cos(ang[:, 0]), np.sin(ang[:, 0])], axis=-1)
    y = rad[:, 1:2] * np.stack([np.cos(ang[:, 1]), np.sin(ang[:, 1])], axis=-1)
    rv = covariance_arrays(n, x - y)["r"]
    frac = float(np.mean(np.abs(rv) > threshold))
    area = (math.pi * s * s) ** 2
    mc_est = area * frac
    mc_se = area * math.sqrt(max(frac * (1 - frac), 1e-12) / mc_draws)

    sing_offsets = np.stack(
        [ox[has_pairs][singular], oy[has_pairs][singular]], axis=-1
    )
    return SingularPartition(
        n=n,
        s=s,
        c0=c0,
        F=F,
        threshold=threshold,
        singular_cubes=n_singular,
        covered_measure=covered,
        mc_estimate=mc_est,
        mc_se=mc_se,
        origin=(i_lo, i_lo),
        position_mask=P,
        singular_offsets=sing_offsets,
        singular_pair_counts=pair_counts[singular],
    )
