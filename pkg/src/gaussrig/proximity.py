"""Closeness of two +-1 functions on [1, N-1]: pointwise distance, prime sums, mean values."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .arith import MultiplicativeFunctionSpec, ValueTable, mf_table, require_prime, sieve_primes
from .errors import DomainError, UsageError

DELTA1 = -2 / 3
CSV_FIELDS = ("N", "function", "psi", "distance", "mean", "prime_distance", "ht_bound")


@dataclass(frozen=True)
class ProximityConfig:
    # kappa has no published value; it only scales the reported HT diagnostic
    kappa: float = 0.1
    delta1_threshold: float = DELTA1

    def __post_init__(self):
        if self.kappa <= 0:
            raise DomainError("kappa must be positive")


@dataclass(frozen=True)
class DistanceReport:
    N: int
    function: str
    psi: str
    distance: int
    mean: float
    prime_distance: float
    ht_bound: float

    def row(self) -> list:
        return [self.N, self.function, self.psi, self.distance, repr(self.mean),
                repr(self.prime_distance), repr(self.ht_bound)]


def _same_modulus(f: ValueTable, psi: ValueTable) -> None:
    if f.N != psi.N:
        raise UsageError(f"moduli differ: {f.N} vs {psi.N}")


def distance_count(f: ValueTable, psi: ValueTable) -> int:
    """|{1 <= n < N : f(n) != psi(n)}|."""
    _same_modulus(f, psi)
    return int(np.count_nonzero(f.values != psi.values))


def inner_product(f: ValueTable, psi: ValueTable) -> int:
    _same_modulus(f, psi)
    return int(np.dot(f.values.astype(np.int64), psi.values.astype(np.int64)))


def prime_distance(f: ValueTable, psi: ValueTable, cfg: ProximityConfig | None = None) -> DistanceReport:
    cfg = cfg or ProximityConfig()
    _same_modulus(f, psi)
    N = f.N
    require_prime(N)
    ps = sieve_primes(N - 1).primes
    fp = f.values[ps - 1].astype(np.int64)
    pp = psi.values[ps - 1].astype(np.int64)
    recip = 1.0 / ps
    pd = math.fsum(recip[fp != pp])
    ht_sum = math.fsum((1 - fp * pp) * recip)
    d = distance_count(f, psi)
    return DistanceReport(
        N=N,
        function=f.name,
        psi=psi.name,
        distance=d,
        mean=inner_product(f, psi) / (N - 1),
        prime_distance=pd,
        ht_bound=N * math.exp(-cfg.kappa * ht_sum),
    )


def mean_value(f: ValueTable) -> float:
    """(1/N) sum_{n<N} f(n)."""
    return float(np.sum(f.values, dtype=np.int64)) / f.N


def below_spectrum_threshold(f: ValueTable, cfg: ProximityConfig | None = None) -> bool:
    """Informational flag: mean value below the -2/3 spectrum bound."""
    cfg = cfg or ProximityConfig()
    return mean_value(f) < cfg.delta1_threshold


def best_real_character(f: ValueTable) -> tuple[str, float]:
    """The real character mod N (principal or Legendre) maximising (1/N) sum f*psi.

    Ties go to the principal character.
    """
    N = f.N
    require_prime(N, odd=True)
    principal = mf_table(MultiplicativeFunctionSpec.principal(), N)
    legendre = mf_table(MultiplicativeFunctionSpec.legendre(N), N)
    a = inner_product(f, principal) / N
    b = inner_product(f, legendre) / N
    return ("legendre", b) if b > a else ("principal", a)


def reports_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()
