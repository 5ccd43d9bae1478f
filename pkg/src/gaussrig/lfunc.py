"""Real-axis diagnostics for L(s, chi_N), chi_N the Legendre symbol mod N."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .arith import MultiplicativeFunctionSpec, mf_table, require_prime, residue_characters, sieve_primes
from .errors import DomainError

S_MIN = 0.05
CSV_FIELDS = (
    "N",
    "lambda_chi_mean",
    "chi_prime_sum",
    "L1_direct",
    "L1_euler",
    "num_real_zeros",
    "min_one_minus_beta_log_N",
)


@dataclass(frozen=True)
class CharSumTable:
    N: int
    partial: np.ndarray  # T(X) for X = 1..N-1
    max_abs: int
    burgess_delta: float
    burgess_ratio: float

    def T(self, X: int) -> int:
        """T(X) for any X >= 0, using periodicity and T(N-1) = 0."""
        r = X % self.N
        return 0 if r == 0 else int(self.partial[r - 1])


def char_partial_sums(N: int, delta: float = 0.1) -> CharSumTable:
    """T(X) = sum_{n<=X} chi_N(n), max |T|, and max_{X >= N^(1/4+delta)} |T(X)| / (X N^(-delta^2/2))."""
    require_prime(N, odd=True)
    chi = residue_characters(N).astype(np.int64)
    T = np.cumsum(chi[1:])
    X = np.arange(1, N, dtype=np.float64)
    start = int(math.ceil(N ** (0.25 + delta)))
    sel = X >= start
    ratio = float(np.max(np.abs(T[sel]) / (X[sel] * N ** (-delta * delta / 2)))) if sel.any() else 0.0
    return CharSumTable(N, T, int(np.max(np.abs(T))), delta, ratio)


class DirichletL:
    """L(s, chi_N) for real s > 0.05.

    The first ``periods`` full periods are summed by partial summation
    against T(n); since T vanishes at every multiple of N there is no
    boundary term. The remaining tail over k >= periods is

        N^-s sum_{j>=1} binom(-s, j) B_j zeta(s + j, periods),
        B_j = sum_{a<N} chi(a) (a/N)^j,

    (the j = 0 term vanishes because chi sums to zero over a period),
    truncated once the next term is provably below ``tol``.
    """

    def __init__(self, N: int, periods: int = 8, tol: float = 1e-13, max_terms: int = 200):
        require_prime(N, odd=True)
        self.N = N
        self.periods = periods
        self.tol = tol
        self.max_terms = max_terms
        chi = residue_characters(N).astype(np.float64)
        self.chi = chi
        self.T = np.cumsum(chi)  # T[n] = sum_{m <= n}, T[0] = 0
        self.max_abs_T = float(np.max(np.abs(self.T)))
        self._ratio = np.arange(N, dtype=np.float64) / N
        self._power = np.ones(N)
        self.moments: list[float] = []

    def moment(self, j: int) -> float:
        """B_j, extended lazily."""
        while len(self.moments) < j:
            self._power *= self._ratio
            self.moments.append(float(np.dot(self.chi, self._power)))
        return self.moments[j - 1]

    def head(self, s: float) -> float:
        N = self.N
        total = 0.0
        Tp = self.T[1:]  # T(n), n = 1..N-1 within each period
        base = np.arange(1, N, dtype=np.float64)
        for k in range(self.periods):
            n = base + k * N
            # n^-s - (n+1)^-s computed without cancellation
            diff = -np.exp(-s * np.log(n)) * np.expm1(-s * np.log1p(1.0 / n))
            total += float(np.dot(Tp, diff))
        return total

    def tail(self, s: float) -> tuple[float, float]:
        """(tail value, bound on the neglected remainder).

        With |B_j| <= N, successive terms shrink at least by the factor
        max((s+j)/((j+1)K), 1/K), which bounds the remainder geometrically.
        """
        N, K = self.N, self.periods
        total = 0.0
        c = 1.0
        bound = math.inf
        for j in range(1, self.max_terms + 1):
            c *= -(s + j - 1) / j
            total += c * self.moment(j) * float(hurwitz_zeta(s + j, K))
            c_next = abs(c) * (s + j) / (j + 1)
            rho = max((s + j + 1) / ((j + 2) * K), 1.0 / K)
            if rho < 1:
                bound = c_next * N * float(hurwitz_zeta(s + j + 1, K)) / (1 - rho)
                if bound * N ** (-s) < self.tol:
                    break
        return total * N ** (-s), bound * N ** (-s)

    def __call__(self, s: float) -> float:
        if s <= S_MIN:
            raise DomainError(f"s must exceed {S_MIN}")
        return self.head(s) + self.tail(s)[0]


def l_value(N: int, s: float, periods: int = 8, tol: float = 1e-13) -> float:
    """L(s, (./N))."""
    return DirichletL(N, periods, tol)(s)


@dataclass(frozen=True)
class RealZero:
    beta: float
    width: float
    scaled: float  # (1 - beta) log N


def real_zero_scan(N: int, sigma_min: float = 0.5, step: float = 1e-3, width: float = 1e-8,
                   L: DirichletL | None = None) -> list[RealZero]:
    """Sign changes of L(s, chi_N) on a grid over [sigma_min, 1], refined by bisection."""
    if not 0.5 <= sigma_min <= 1:
        raise DomainError("sigma_min must lie in [0.5, 1)")
    L = L or DirichletL(N)
    n = max(1, int(math.ceil((1 - sigma_min) / step)))
    grid = np.linspace(sigma_min, 1.0, n + 1)
    vals = [L(float(s)) for s in grid]
    zeros = []
    for i in range(n):
        a, b = float(grid[i]), float(grid[i + 1])
        fa, fb = vals[i], vals[i + 1]
        if fa == 0:
            zeros.append(RealZero(a, 0.0, (1 - a) * math.log(N)))
            continue
        if fa * fb > 0:
            continue
        while b - a > width:
            m = 0.5 * (a + b)
            fm = L(m)
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        beta = 0.5 * (a + b)
        zeros.append(RealZero(beta, b - a, (1 - beta) * math.log(N)))
    return zeros


@dataclass(frozen=True)
class PrimeSumResult:
    N: int
    sum: float
    euler_L1: float
    direct_L1: float


def chi_prime_sum(N: int, L: DirichletL | None = None) -> PrimeSumResult:
    """sum_{p<N} chi(p)/p, the truncated Euler product at s = 1, and L(1, chi) itself."""
    require_prime(N, odd=True)
    chi = residue_characters(N)
    ps = sieve_primes(N - 1).primes
    x = chi[ps].astype(np.float64) / ps
    s = math.fsum(x)
    euler = math.exp(-math.fsum(np.log1p(-x)))
    direct = (L or DirichletL(N))(1.0)
    return PrimeSumResult(N, s, euler, direct)


@dataclass(frozen=True)
class CorollaryRow:
    N: int
    lambda_chi_mean: float
    chi_prime_sum: float
    L1_direct: float
    L1_euler: float
    num_real_zeros: int
    min_one_minus_beta_log_N: float | None

    @property
    def shifted_prime_sum(self) -> float:
        """sum chi(p)/p + log log N."""
        return self.chi_prime_sum + math.log(math.log(self.N))

    @property
    def log_L1_log_N(self) -> float:
        return math.log(self.L1_direct * math.log(self.N))

    def row(self) -> list:
        m = self.min_one_minus_beta_log_N
        return [self.N, repr(self.lambda_chi_mean), repr(self.chi_prime_sum), repr(self.L1_direct),
                repr(self.L1_euler), self.num_real_zeros, "" if m is None else repr(m)]


def corollary_row(N: int, sigma_min: float = 0.5, step: float = 1e-3) -> CorollaryRow:
    """One line of the Liouville/L-function pipeline for modulus N."""
    lam = mf_table(MultiplicativeFunctionSpec.liouville(), N)
    chi = mf_table(MultiplicativeFunctionSpec.legendre(N), N)
    mean = float(np.dot(lam.values.astype(np.int64), chi.values.astype(np.int64))) / N
    L = DirichletL(N)
    ps = chi_prime_sum(N, L)
    zeros = real_zero_scan(N, sigma_min, step, L=L)
    return CorollaryRow(
        N, mean, ps.sum, ps.direct_L1, ps.euler_L1, len(zeros),
        min((z.scaled for z in zeros), default=None),
    )


def corollary_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow(r.row())
    return buf.getvalue()
