"""Integers whose prime factors all lie in (z, y], counted exactly and estimated.

Theta(x, y, z; q, a) counts n <= x, n = a mod q, with p | n => z < p <= y
(optionally also p in an allowed prime set). n = 1 always qualifies.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .arith import require_prime, sieve_primes
from .errors import DomainError, SizeError

X_LIMIT = 10**8
EQUI_CSV_FIELDS = ("a", "count")
SAIAS_CSV_FIELDS = ("x", "y", "z", "alpha", "residual", "brute", "estimate", "ratio")

Allowed = Callable[[int], bool] | Iterable[int] | None


@dataclass(frozen=True)
class FriableQuery:
    x: int
    y: int
    z: int
    q: int | None = None
    a: int | None = None

    def __post_init__(self):
        if not 1 <= self.z <= self.y <= self.x:
            raise DomainError(f"need 1 <= z <= y <= x, got x={self.x}, y={self.y}, z={self.z}")
        if self.q is not None and not 0 <= self.a < self.q:
            raise DomainError("residue a must lie in [0, q)")

    @property
    def u(self) -> float:
        return math.log(self.x) / math.log(self.y)

    @property
    def v(self) -> float:
        return math.log(self.x) / math.log(self.z) if self.z > 1 else math.inf

    @property
    def w(self) -> float | None:
        return math.log(self.x) / math.log(self.q) if self.q else None


def _allowed_mask(primes: np.ndarray, allowed: Allowed) -> np.ndarray:
    if allowed is None:
        return np.ones(len(primes), dtype=bool)
    if callable(allowed):
        return np.array([bool(allowed(int(p))) for p in primes], dtype=bool)
    keep = np.fromiter((int(p) for p in allowed), dtype=np.int64)
    return np.isin(primes, keep)


def friable_mask(x: int, y: int, z: int, allowed: Allowed = None) -> np.ndarray:
    """Boolean array good[0..x]: good[n] iff every prime factor of n is in (z, y] (and allowed)."""
    if x > X_LIMIT:
        raise SizeError(f"x={x} above sieve guard {X_LIMIT}")
    if x < 1:
        return np.zeros(max(x + 1, 1), dtype=bool)
    bad = np.zeros(x + 1, dtype=bool)
    bad[0] = True
    primes = sieve_primes(x).primes
    inside = (primes > z) & (primes <= y)
    inside[inside] = _allowed_mask(primes[inside], allowed)
    excluded = primes[~inside]
    root = math.isqrt(x)
    for p in excluded[excluded <= root]:
        bad[p::p] = True
    # primes above sqrt(x): strike k*p grouped by cofactor k, one vector op per k
    large = excluded[excluded > root]
    if len(large):
        for k in range(1, x // int(large[0]) + 1):
            hi = np.searchsorted(large, x // k, side="right")
            if hi == 0:
                break
            bad[k * large[:hi]] = True
    return ~bad


def _counts(good: np.ndarray, q: int | None, a: int | None) -> int:
    if q is None:
        return int(np.count_nonzero(good))
    return int(np.count_nonzero(good[a::q]))


def theta_count(fq: FriableQuery, allowed: Allowed = None) -> int:
    """Exact Theta(x, y, z[; q, a]) by sieving."""
    return _counts(friable_mask(fq.x, fq.y, fq.z, allowed), fq.q, fq.a)


def theta(x: int, y: int, z: int, q: int | None = None, a: int | None = None, allowed: Allowed = None) -> int:
    if x < 1:
        return 0
    y = min(y, x) if y > x else y
    z = min(z, y)
    return theta_count(FriableQuery(x, y, z, q, a), allowed)


def psi_count(x: int, y: int) -> int:
    """Psi(x, y) = Theta(x, y, 1)."""
    return theta(x, min(y, x), 1)


def residue_counts(x: int, y: int, z: int, q: int, allowed: Allowed = None) -> np.ndarray:
    """counts[a] = Theta(x, y, z; q, a) for a = 0..q-1."""
    good = friable_mask(x, y, z, allowed)
    n = np.flatnonzero(good)
    return np.bincount(n % q, minlength=q)


def restricted_lower_bound(x: int, y: int, z: int, q: int, a: int, allowed) -> tuple[int, int]:
    """(restricted count, Theta(x,y,z;q,a) - sum over excluded p of Theta(x/p,y,z;q,a/p)).

    The first value is always >= the second.
    """
    require_prime(q)
    restricted = theta(x, y, z, q, a, allowed)
    base_good = friable_mask(x, y, z)
    total = _counts(base_good, q, a)
    ps = sieve_primes(y).primes
    ps = ps[ps > z]
    drop = ps[~_allowed_mask(ps, allowed)]
    for p in drop:
        p = int(p)
        if p % q == 0:
            continue
        b = a * pow(p, -1, q) % q
        total -= _counts(base_good[: x // p + 1], q, b)
    return restricted, total


@dataclass(frozen=True)
class SaddlePoint:
    alpha: float
    residual: float
    iterations: int


def _prime_logs(y: int, z: int) -> np.ndarray:
    ps = sieve_primes(y).primes
    return np.log(ps[ps > z].astype(np.float64))


def saddle_sum(sigma: float, logs: np.ndarray) -> float:
    """sum log p / (p^sigma - 1)."""
    return float(np.sum(logs / np.expm1(sigma * logs)))


def _saddle_slope(sigma: float, logs: np.ndarray) -> float:
    e = np.expm1(sigma * logs)
    return float(-np.sum(logs * logs * (e + 1) / (e * e)))


def solve_alpha(x: float, y: int, z: int, lo: float = 0.05, hi: float = 1.5) -> SaddlePoint:
    """Solve sum_{z<p<=y} log p/(p^alpha - 1) = log x: bisection to 1e-6, then Newton.

    The left side is strictly decreasing in alpha. The bracket is widened
    downwards if needed; a root above ``hi`` is a domain error.
    """
    logs = _prime_logs(y, z)
    if len(logs) == 0:
        raise DomainError(f"no primes in ({z}, {y}]")
    if x <= 1:
        raise DomainError("x must exceed 1")
    target = math.log(x)
    g = lambda s: saddle_sum(s, logs) - target  # noqa: E731
    if g(hi) > 0:
        raise DomainError(f"alpha exceeds {hi}: x too small for the prime range")
    while g(lo) < 0:
        lo /= 2
        if lo < 1e-12:
            raise DomainError("saddle point below 1e-12")
    its = 0
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
        its += 1
    s = 0.5 * (lo + hi)
    for _ in range(50):
        its += 1
        step = g(s) / _saddle_slope(s, logs)
        s_new = min(max(s - step, lo), hi)
        if abs(s_new - s) <= 1e-12 * s:
            s = s_new
            break
        s = s_new
    return SaddlePoint(s, abs(g(s)), its)


def zeta_partial(sigma: float, y: int, z: int) -> float:
    """prod_{z<p<=y} (1 - p^-sigma)^-1, accumulated in ascending p."""
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    ps = sieve_primes(y).primes
    ps = ps[ps > z].astype(np.float64)
    return float(math.exp(-math.fsum(np.log1p(-ps ** (-sigma)))))


def saias_estimate(x: float, y: int, z: int, alpha: float | None = None) -> float:
    """x^alpha zeta(alpha, y, z) / sqrt(log x log y)."""
    if alpha is None:
        alpha = solve_alpha(x, y, z).alpha
    return math.exp(alpha * math.log(x)) * zeta_partial(alpha, y, z) / math.sqrt(math.log(x) * math.log(y))


@dataclass(frozen=True)
class SaiasComparison:
    x: int
    y: int
    z: int
    alpha: float
    residual: float
    brute: int
    estimate: float
    ratio: float

    def row(self) -> list:
        return [self.x, self.y, self.z, repr(self.alpha), repr(self.residual), self.brute,
                repr(self.estimate), repr(self.ratio)]


def saias_compare(x: int, y: int, z: int) -> SaiasComparison:
    brute = theta(x, y, z)
    try:
        sp = solve_alpha(x, y, z)
    except DomainError:
        # empty prime interval: only n = 1 survives, nothing to estimate
        return SaiasComparison(x, y, z, math.nan, math.nan, brute, math.nan, math.nan)
    est = saias_estimate(x, y, z, sp.alpha)
    return SaiasComparison(x, y, z, sp.alpha, sp.residual, brute, est, brute / est)


@dataclass
class EquidistributionReport:
    x: int
    y: int
    z: int
    q: int
    counts: np.ndarray  # index a = 0..q-1
    total: int
    flagged: bool  # q <= y: the a = 0 bucket can be non-empty

    @property
    def unit_counts(self) -> np.ndarray:
        return self.counts[1:]

    @property
    def minimum(self) -> int:
        return int(self.unit_counts.min())

    @property
    def maximum(self) -> int:
        return int(self.unit_counts.max())

    @property
    def mean(self) -> float:
        return float(self.unit_counts.mean())

    @property
    def relative_spread(self) -> float:
        return (self.maximum - self.minimum) / self.mean if self.mean else math.inf

    @property
    def partition_holds(self) -> bool:
        return int(self.counts.sum()) == self.total

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(EQUI_CSV_FIELDS)
        start = 0 if self.flagged else 1
        for a in range(start, self.q):
            w.writerow([a, int(self.counts[a])])
        return buf.getvalue()


def equidistribution_report(x: int, y: int, z: int, q: int) -> EquidistributionReport:
    """Per-residue counts of Theta(x, y, z; q, a) and their spread over a = 1..q-1."""
    require_prime(q)
    FriableQuery(x, y, z)
    good = friable_mask(x, y, z)
    n = np.flatnonzero(good)
    counts = np.bincount(n % q, minlength=q)
    return EquidistributionReport(x, y, z, q, counts, len(n), q <= y)


def saias_csv(rows: Iterable[SaiasComparison]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SAIAS_CSV_FIELDS)
    for r in rows:
        w.writerow(r.row())
    return buf.getvalue()
