"""Spectral correlations, diagonal correlations, and quasi-correlations.

All tuple counts are for ORDERED tuples.  Counting is done by meeting in the
middle: partial sums of ceil(l/2)-tuples are tallied in a dictionary, and for
quasi-correlations a spatial hash over integer cells locates near-cancelling
partners.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

from .lattice import eigenspace

DEFAULT_WORK_LIMIT = 10**8


class WorkLimitExceeded(RuntimeError):
    def __init__(self, estimated: int, limit: int):
        super().__init__(
            f"estimated cost {estimated} exceeds work limit {limit}"
        )
        self.estimated = estimated
        self.limit = limit


@dataclass
class CorrelationReport:
    n: int
    l: int
    count_S: int | None = None
    count_D: int | None = None
    quasi: list[tuple[float, int]] = field(default_factory=list)
    tuples: list[tuple] | None = None


@dataclass
class ScanReport:
    range: tuple[int, int]
    l: int
    delta: float
    exceptional: list[int]
    fraction: float
    threshold_rule: str
    scanned: list[int] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)


def _points(n: int) -> list[tuple[int, int]]:
    return [(p.a, p.b) for p in eigenspace(n).points]


def _half_sums(pts: list[tuple[int, int]], half: int) -> Counter:
    """Counter of sums of ordered half-tuples of lattice points."""
    sums = Counter({(0, 0): 1})
    for _ in range(half):
        nxt: Counter = Counter()
        for (sx, sy), c in sums.items():
            for (a, b) in pts:
                nxt[(sx + a, sy + b)] += c
        sums = nxt
    return sums


def _check_work(n: int, l: int, work_limit: int) -> list[tuple[int, int]]:
    pts = _points(n)
    est = len(pts) ** math.ceil(l / 2)
    if est > work_limit:
        raise WorkLimitExceeded(est, work_limit)
    return pts


def spectral_correlations(
    n: int, l: int, work_limit: int = DEFAULT_WORK_LIMIT
) -> CorrelationReport:
    """Exact count of ordered l-tuples of lattice points summing to zero."""
    if not 2 <= l <= 6:
        raise ValueError("l must be in [2, 6]")
    pts = _check_work(n, l, work_limit)
    a = _half_sums(pts, l // 2)
    b = a if l % 2 == 0 else _half_sums(pts, l - l // 2)
    count = sum(c * b.get((-sx, -sy), 0) for (sx, sy), c in a.items())
    return CorrelationReport(n=n, l=l, count_S=count)


def diagonal_correlations(
    n: int, l: int, work_limit: int = DEFAULT_WORK_LIMIT
) -> CorrelationReport:
    """Exact count of distinct ordered l-tuples that are permutations of
    cancelling-pair tuples (lam_1, -lam_1, ..., lam_k, -lam_k)."""
    if l % 2 != 0:
        raise ValueError("diagonal correlations require even l")
    pts = _check_work(n, l, work_limit)
    k = l // 2
    seen: set[tuple] = set()
    for lams in itertools.product(pts, repeat=k):
        base = []
        for (a, b) in lams:
            base.append((a, b))
            base.append((-a, -b))
        for perm in itertools.permutations(base):
            seen.add(perm)
    return CorrelationReport(n=n, l=l, count_D=len(seen))


def _cells_within(K: float) -> list[tuple[int, int]]:
    """Integer cell offsets whose cell could contain a point within distance K
    of the base cell (cell side = ceil(K))."""
    side = max(1, math.ceil(K))
    reach = math.ceil(K / side) + 1
    return [
        (dx, dy)
        for dx in range(-reach, reach + 1)
        for dy in range(-reach, reach + 1)
    ]


def quasi_correlations(
    n: int,
    l: int,
    K: float,
    work_limit: int = DEFAULT_WORK_LIMIT,
    collect_tuples: bool = False,
    tuple_cap: int = 1000,
) -> CorrelationReport:
    """Exact count of ordered l-tuples whose sum is nonzero with norm <= K.

    Half-tuple sums are bucketed on an integer grid of cell side ceil(K); for
    each left half only the buckets near the reflected sum are scanned.
    """
    if not 2 <= l <= 6:
        raise ValueError("l must be in [2, 6]")
    if K <= 0:
        raise ValueError("K must be positive")
    pts = _check_work(n, l, work_limit)
    a = _half_sums(pts, l // 2)
    b = a if l % 2 == 0 else _half_sums(pts, l - l // 2)

    side = max(1, math.ceil(K))
    buckets: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    for (sx, sy), c in b.items():
        buckets.setdefault((sx // side, sy // side), []).append((sx, sy, c))

    offsets = _cells_within(K)
    K2 = K * K
    count = 0
    examples: list[tuple] = []
    for (sx, sy), c in a.items():
        cx, cy = (-sx) // side, (-sy) // side
        for dx, dy in offsets:
            for tx, ty, c2 in buckets.get((cx + dx, cy + dy), ()):
                vx, vy = sx + tx, sy + ty
                q = vx * vx + vy * vy
                if 0 < q <= K2:
                    count += c * c2
                    if collect_tuples and len(examples) < tuple_cap:
                        examples.append(((sx, sy), (tx, ty)))
    rep = CorrelationReport(n=n, l=l, quasi=[(K, count)])
    if collect_tuples:
        rep.tuples = examples
    return rep


def quasi_count(n: int, l: int, K: float, work_limit: int = DEFAULT_WORK_LIMIT) -> int:
    return quasi_correlations(n, l, K, work_limit=work_limit).quasi[0][1]


def separatedness_threshold(n: int, delta: float, rule: str = "n^(1/2-delta)") -> float:
    """Quasi-correlation threshold under either parametrization in use."""
    if rule == "n^(1/2-delta)":
        return n ** (0.5 - delta)
    if rule == "n^((1-delta)/2)":
        return n ** ((1.0 - delta) / 2.0)
    raise ValueError(f"unknown threshold rule {rule!r}")


def separated(
    n: int,
    l: int,
    delta: float,
    work_limit: int = DEFAULT_WORK_LIMIT,
    rule: str = "n^(1/2-delta)",
) -> bool:
    """Separatedness hypothesis: no nonzero l-tuple sum of norm below the
    delta-dependent threshold."""
    if not 0 < delta < 0.5:
        raise ValueError("delta must be in (0, 1/2)")
    K = separatedness_threshold(n, delta, rule)
    if K >= l * math.sqrt(n):
        K = l * math.sqrt(n) - 1e-9
    return quasi_count(n, l, K, work_limit=work_limit) == 0


def scan_exceptional(
    N: int,
    l: int,
    delta: float,
    work_limit: int = DEFAULT_WORK_LIMIT,
    rule: str = "n^(1/2-delta)",
) -> ScanReport:
    """Scan all sums of two squares in [N, 2N] for failures of separatedness."""
    if N < 2:
        raise ValueError("N must be >= 2")
    from .lattice import sum_two_squares_up_to

    members = [m for m in sum_two_squares_up_to(2 * N) if m >= N]
    exceptional: list[int] = []
    skipped: list[int] = []
    for n in members:
        try:
            if not separated(n, l, delta, work_limit=work_limit, rule=rule):
                exceptional.append(n)
        except WorkLimitExceeded:
            skipped.append(n)
    scanned = [m for m in members if m not in skipped]
    fraction = len(exceptional) / len(scanned) if scanned else 0.0
    return ScanReport(
        range=(N, 2 * N),
        l=l,
        delta=delta,
        exceptional=exceptional,
        fraction=fraction,
        threshold_rule=rule,
        scanned=scanned,
        skipped=skipped,
    )


def check_two_implies_four(
    n: int, delta: float, work_limit: int = DEFAULT_WORK_LIMIT
) -> dict:
    """Pair-separatedness at exponent delta should force 4-tuple separatedness
    at exponent 2*delta; returns both verdicts and whether the implication is
    respected."""
    if not 0 < delta < 0.25:
        raise ValueError("delta must be in (0, 1/4)")
    holds2 = separated(n, 2, delta, work_limit=work_limit)
    holds4 = separated(n, 4, 2 * delta, work_limit=work_limit)
    return {
        "n": n,
        "delta": delta,
        "holds2": holds2,
        "holds4": holds4,
        "lemma_respected": (not holds2) or holds4,
    }


def gaussian_count_S_pm(
    y: float,
    k: int,
    l: int,
    eps_matrix: list[list[int]],
    eta: list[int],
    nu: list[int],
    sign: str,
    delta: float,
    work_limit: int = DEFAULT_WORK_LIMIT,
) -> int:
    """Count k-tuples of nonzero Gaussian integers with product norm in
    [y, 2y] whose l-term cosine (sign '+') or sine (sign '-') combination of
    angles lands in (0, y^(-delta)).

    eps_matrix is l rows by k columns of +/-1; eta is l signs; nu is l
    quarter-turn indices.
    """
    if k > 4:
        raise ValueError("k <= 4 at desk scale")
    if y > 200:
        raise WorkLimitExceeded(int(y**2) ** k, work_limit)
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    trig = math.cos if sign == "+" else math.sin
    thresh = y ** (-delta)
    rmax = 2.0 * y

    # nonzero Gaussian integers with |a| <= 2y, precomputed with angle and norm
    cands: list[tuple[float, float]] = []  # (norm, angle)
    m = math.floor(rmax)
    for a in range(-m, m + 1):
        for b in range(-m, m + 1):
            if a == 0 and b == 0:
                continue
            r = math.hypot(a, b)
            if r <= rmax:
                cands.append((r, math.atan2(b, a)))
    cands.sort()
    est = len(cands) ** k
    if est > work_limit:
        raise WorkLimitExceeded(est, work_limit)

    count = 0

    def rec(j: int, prod: float, angles: list[float]):
        nonlocal count
        if prod * 1.0 > 2.0 * y:
            return
        if j == k:
            if not (y <= prod <= 2.0 * y):
                return
            total = 0.0
            for r_idx in range(l):
                phase = nu[r_idx] * math.pi / 2.0 + sum(
                    eps_matrix[r_idx][jj] * angles[jj] for jj in range(k)
                )
                total += eta[r_idx] * trig(phase)
            if 0.0 < abs(total) < thresh:
                count += 1
            return
        # cands sorted by norm; every factor has norm >= 1, so prune and break
        for r, th in cands:
            if prod * r > 2.0 * y:
                break
            rec(j + 1, prod * r, angles + [th])

    rec(0, 1.0, [])
    return count
