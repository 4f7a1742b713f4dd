"""Gaussian random eigenfunction sampler and exact covariance machinery.

The random field is a trigonometric polynomial with frequencies on a circle of
integer squared radius; coefficients are stored on one representative per
+/- frequency pair with the conjugate pair implied (real-valued field).  The
covariance function, its gradient and Hessian are exact finite sums; the
normalised gradient blocks and the two-point function of the zero set are
built from them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import Eigenspace, eigenspace

TWO_PI = 2.0 * math.pi
DEFAULT_SINGULAR_FLOOR = 1e-12


class SingularDisplacementError(ValueError):
    """1 - r^2 below the configured floor: conditioned blocks undefined."""


class AliasingError(ValueError):
    """Grid too coarse for exact synthesis of the band-limited field."""


@dataclass(frozen=True)
class WaveSample:
    """One Gaussian draw of coefficients, stored on the half set."""

    space: Eigenspace
    coeffs: np.ndarray  # complex, aligned with space.half_set
    seed: int
    trial: int


def sample_wave(n: int, seed: int, trial: int = 0) -> WaveSample:
    """Draw coefficients from a counter-based stream keyed by (seed, trial).

    Real and imaginary parts are independent standard normals, so with the
    1/sqrt(2 N) synthesis prefactor the field has unit variance.
    """
    space = eigenspace(n)
    key = np.array([seed % 2**64, trial % 2**64], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    half = len(space.half_set)
    z = rng.standard_normal((half, 2))
    coeffs = z[:, 0] + 1j * z[:, 1]
    return WaveSample(space=space, coeffs=coeffs, seed=seed, trial=trial)


def evaluate_points(w: WaveSample, pts: np.ndarray) -> np.ndarray:
    """Direct per-point trigonometric sum; pts has shape (M, 2)."""
    lam = w.space.half_array()  # (H, 2)
    phases = TWO_PI * pts @ lam.T  # (M, H)
    n_pts = w.space.multiplicity
    # T = (1/sqrt(2N)) sum_all a e(...) = sqrt(2/N) sum_half Re(a e(...))
    vals = np.cos(phases) @ w.coeffs.real - np.sin(phases) @ w.coeffs.imag
    return math.sqrt(2.0 / n_pts) * vals


def evaluate_grid(w: WaveSample, G: int) -> np.ndarray:
    """Field values at (j/G, k/G) via inverse FFT; exact for G > 2*sqrt(n)."""
    n = w.space.n
    if G <= 2 * math.sqrt(n):
        raise AliasingError(f"grid G={G} too coarse for n={n} (need G > 2 sqrt n)")
    spec = np.zeros((G, G), dtype=complex)
    lam = w.space.half_array()
    n_pts = w.space.multiplicity
    scale = 1.0 / math.sqrt(2.0 * n_pts)
    for (a, b), c in zip(lam, w.coeffs):
        spec[a % G, b % G] += scale * c
        spec[(-a) % G, (-b) % G] += scale * np.conj(c)
    vals = np.fft.ifft2(spec) * G * G
    return np.ascontiguousarray(vals.real)


def covariance_arrays(n: int, pts: np.ndarray) -> dict[str, np.ndarray]:
    """Exact covariance r, gradient D and Hessian H at displacements pts.

    Shapes: r (M,), D (M, 2), H (M, 2, 2).
    """
    space = eigenspace(n)
    lam = space.as_array().astype(float)  # (N, 2)
    pts = np.atleast_2d(pts)
    phases = TWO_PI * pts @ lam.T  # (M, N)
    c = np.cos(phases)
    s = np.sin(phases)
    N = space.multiplicity
    r = c.mean(axis=1)
    D = -(TWO_PI / N) * s @ lam  # (M, 2)
    outer = np.einsum("ni,nj->nij", lam, lam)  # (N, 2, 2)
    H = -(TWO_PI**2 / N) * np.einsum("mn,nij->mij", c, outer)
    return {"r": r, "D": D, "H": H}


def xy_blocks(
    n: int, pts: np.ndarray, floor: float = DEFAULT_SINGULAR_FLOOR
) -> dict[str, np.ndarray]:
    """Normalised conditioned-gradient blocks X, Y at nonsingular displacements."""
    cov = covariance_arrays(n, pts)
    r, D, H = cov["r"], cov["D"], cov["H"]
    E = eigenspace(n).eigenvalue
    one_minus = 1.0 - r**2
    if np.any(one_minus < floor):
        raise SingularDisplacementError(
            f"1 - r^2 below floor {floor} at some displacement"
        )
    DtD = np.einsum("mi,mj->mij", D, D)
    X = -2.0 / (E * one_minus)[:, None, None] * DtD
    Y = -2.0 / E * (H + (r / one_minus)[:, None, None] * DtD)
    cov.update({"X": X, "Y": Y})
    return cov


@dataclass(frozen=True)
class KernelValues:
    r: float
    D: np.ndarray
    H: np.ndarray
    X: np.ndarray | None
    Y: np.ndarray | None
    Omega: np.ndarray | None


def kernel_at(
    n: int, x: tuple[float, float], floor: float = DEFAULT_SINGULAR_FLOOR
) -> KernelValues:
    """Covariance kernel and derived blocks at a single displacement.

    X, Y, Omega are None (and flagged singular) when 1 - r^2 is below floor.
    """
    pts = np.array([x], dtype=float)
    cov = covariance_arrays(n, pts)
    r = float(cov["r"][0])
    if 1.0 - r * r < floor:
        return KernelValues(r=r, D=cov["D"][0], H=cov["H"][0], X=None, Y=None, Omega=None)
    blocks = xy_blocks(n, pts, floor=floor)
    X, Y = blocks["X"][0], blocks["Y"][0]
    Omega = np.eye(4)
    Omega[:2, :2] += X
    Omega[2:, 2:] += X
    Omega[:2, 2:] += Y
    Omega[2:, :2] += Y
    return KernelValues(r=r, D=cov["D"][0], H=cov["H"][0], X=X, Y=Y, Omega=Omega)


def l2_expansion(r: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Degree-4 polynomial approximation of the two-point function minus 1/4.

    Eleven terms in r and the invariant traces of the X, Y blocks; valid where
    |r| is bounded away from 1 (used below 1/4).
    """
    trX = np.trace(X, axis1=-2, axis2=-1)
    Y2 = Y @ Y
    trY2 = np.trace(Y2, axis1=-2, axis2=-1)
    trXY2 = np.trace(X @ Y2, axis1=-2, axis2=-1)
    trX2 = np.trace(X @ X, axis1=-2, axis2=-1)
    trY4 = np.trace(Y2 @ Y2, axis1=-2, axis2=-1)
    return (
        r**2
        + trX
        + trY2 / 4.0
        + 0.75 * r**4
        - trXY2 / 8.0
        - trX2 / 16.0
        + trY4 / 128.0
        + trY2**2 / 256.0
        - trX * trY2 / 16.0
        + 0.5 * r**2 * trX
        + 0.125 * r**2 * trY2
    ) / 8.0


def _symmetric_sqrt(Omega: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(Omega)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.T


def two_point_k2(
    n: int,
    z: tuple[float, float],
    method: str = "taylor",
    mc_samples: int = 100_000,
    seed: int = 0,
    kernel: KernelValues | None = None,
) -> tuple[float, float]:
    """Normalised two-point function of the zero set at displacement z.

    Returns (value, error_estimate).  'taylor' evaluates 1/4 plus the
    polynomial expansion (requires |r| < 1/4, error estimate from the dropped
    order); 'gaussian_mc' averages ||V1|| * ||V2|| over draws of the 4-variate
    conditioned-gradient Gaussian (returns the Monte Carlo standard error).
    """
    k = kernel if kernel is not None else kernel_at(n, z)
    if k.X is None:
        raise SingularDisplacementError(f"displacement {z} is singular")
    if method == "taylor":
        if abs(k.r) >= 0.25:
            raise ValueError(f"taylor expansion requires |r| < 1/4, got {k.r}")
        l2 = float(l2_expansion(np.array(k.r), k.X, k.Y))
        err = abs(k.r) ** 6 + abs(np.trace(np.linalg.matrix_power(k.X, 3)))
        err += abs(np.trace(np.linalg.matrix_power(k.Y, 6)))
        return 0.25 + l2, err
    if method == "gaussian_mc":
        root = _symmetric_sqrt(k.Omega)
        rng = np.random.Generator(np.random.Philox(key=np.array([seed, 0], dtype=np.uint64)))
        Z = rng.standard_normal((mc_samples, 4)) @ root.T
        prod = np.linalg.norm(Z[:, :2], axis=1) * np.linalg.norm(Z[:, 2:], axis=1)
        pref = 1.0 / (TWO_PI * math.sqrt(1.0 - k.r**2))
        val = pref * float(prod.mean())
        se = pref * float(prod.std(ddof=1)) / math.sqrt(mc_samples)
        return val, se
    raise ValueError(f"unknown method {method!r}")
