"""Dilation deficit of S_f and scans of it over small primes.

For a prime p not divisible by N and a sign g,

    D_f(p; g) = (1/N) sum_{a mod N} |S_f(ap) - g S_f(a)|^2
              = 2(N-1) - 2 g C_f(p),   C_f(p) = sum_{m<N} f(m) f(mp mod N),

so the spectral and correlation backends must agree.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .arith import (
    MultiplicativeFunctionSpec,
    ValueTable,
    mf_table,
    require_prime,
    residue_characters,
    sieve_primes,
)
from .errors import DomainError, UsageError
from .expsum import ExpSumTable, exp_sums

G_MODES = ("match_f", "legendre", "best")
CSV_FIELDS = ("p", "C", "deficit", "g", "deficit_over_N")
BACKEND_ALIASES = {"corr": "correlation", "spectral": "fft", "fast": "fft"}


def correlation(v: ValueTable, p: int) -> int:
    """C_f(p) = sum_{m=1}^{N-1} f(m) f(mp mod N), exact integer."""
    N = v.N
    if p % N == 0:
        raise DomainError(f"p={p} is divisible by N={N}")
    m = np.arange(1, N, dtype=np.int64)
    f = v.padded.astype(np.int64)
    return int(np.dot(f[1:], f[(m * (p % N)) % N]))


def deficit_spectral(S: ExpSumTable, p: int, gp: int, order: np.ndarray | None = None) -> float:
    N = S.N
    if p % N == 0:
        raise DomainError(f"p={p} is divisible by N={N}")
    a = np.arange(N, dtype=np.int64) if order is None else np.asarray(order, dtype=np.int64)
    diff = S.entries[(a * (p % N)) % N] - gp * S.entries[a]
    return float(np.sum(diff.real**2 + diff.imag**2)) / N


def deficit_correlation(v: ValueTable, p: int, gp: int) -> float:
    return float(2 * (v.N - 1) - 2 * gp * correlation(v, p))


def deficit_bruteforce(v: ValueTable, p: int, gp: int) -> float:
    """O(N^2) oracle: build S_f(a) and S_f(ap) by direct summation, no tables shared."""
    N = v.N
    n = np.arange(1, N)
    f = v.values.astype(np.float64)
    total = 0.0
    for a in range(N):
        s_a = np.sum(f * np.exp(2j * np.pi * ((a * n) % N) / N))
        s_ap = np.sum(f * np.exp(2j * np.pi * ((a * p * n) % N) / N))
        total += abs(s_ap - gp * s_a) ** 2
    return total / N


def deficit(p: int, gp: int, data, backend: str = "correlation") -> float:
    """Deficit at prime p with sign gp from an ExpSumTable (spectral) or ValueTable (correlation)."""
    if gp not in (-1, 1):
        raise DomainError("g(p) must be +-1")
    backend = {"corr": "correlation"}.get(backend, backend)
    if backend == "spectral":
        if not isinstance(data, ExpSumTable):
            raise UsageError("spectral backend needs an ExpSumTable")
        return deficit_spectral(data, p, gp)
    if backend == "correlation":
        if not isinstance(data, ValueTable):
            raise UsageError("correlation backend needs a ValueTable")
        return deficit_correlation(data, p, gp)
    raise UsageError(f"unknown backend {backend!r}")


@dataclass
class PrimeRecord:
    p: int
    C: int
    deficit: float
    g: int
    f_p: int


@dataclass
class RigidityReport:
    N: int
    c: float
    function: str
    g_mode: str
    backend: str
    records: list[PrimeRecord] = field(default_factory=list)

    @property
    def max_deficit(self) -> float:
        return max((r.deficit for r in self.records), default=0.0)

    @property
    def argmax_prime(self) -> int | None:
        if not self.records:
            return None
        return max(self.records, key=lambda r: (r.deficit, -r.p)).p

    @property
    def M(self) -> float:
        """N / max deficit; infinite (reported as ">= N") when the deficit is below 1."""
        d = self.max_deficit
        return math.inf if d < 1 else self.N / d

    @property
    def M_capped(self) -> bool:
        return self.max_deficit < 1

    @property
    def sign_mismatches(self) -> int:
        return sum(1 for r in self.records if r.g != r.f_p)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in self.records:
            w.writerow([r.p, r.C, repr(r.deficit), r.g, repr(r.deficit / self.N)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "c": self.c,
            "function": self.function,
            "g_mode": self.g_mode,
            "backend": self.backend,
            "records": [asdict(r) for r in self.records],
            "max_deficit": self.max_deficit,
            "argmax_prime": self.argmax_prime,
            "M": None if self.M_capped else self.M,
            "M_capped": self.M_capped,
            "sign_mismatches": self.sign_mismatches,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def primes_up_to_power(N: int, c: float) -> np.ndarray:
    """Primes p <= N^c."""
    return sieve_primes(int(math.floor(N**c * (1 + 1e-12)))).primes


def _choose_g(mode: str, C: int, fp: int, chi_p: int) -> int:
    if mode == "match_f":
        return fp
    if mode == "legendre":
        return chi_p
    # sign(C) minimises 2(N-1) - 2gC; ties keep f(p)
    return fp if C == 0 else (1 if C > 0 else -1)


def rigidity_scan(
    spec: MultiplicativeFunctionSpec | ValueTable,
    N: int,
    c: float,
    g_mode: str = "best",
    backend: str = "correlation",
    threads: int = 1,
) -> RigidityReport:
    """Deficit at every prime p <= N^c with g(p) chosen per ``g_mode``."""
    if not 0 < c < 1:
        raise DomainError("c must lie in (0, 1)")
    if g_mode not in G_MODES:
        raise UsageError(f"g_mode must be one of {G_MODES}")
    require_prime(N, odd=True)
    v = spec if isinstance(spec, ValueTable) else mf_table(spec, N)
    if v.N != N:
        raise UsageError("value table modulus differs from N")
    backend = BACKEND_ALIASES.get(backend, backend)
    if backend not in ("correlation", "fft", "naive"):
        raise UsageError(f"unknown backend {backend!r}")
    S = None if backend == "correlation" else exp_sums(v, backend)
    chi = residue_characters(N)
    primes = [int(p) for p in primes_up_to_power(N, c)]

    def one(p: int) -> PrimeRecord:
        C = correlation(v, p)
        fp = v[p]
        g = _choose_g(g_mode, C, fp, int(chi[p % N]))
        D = deficit_spectral(S, p, g) if S is not None else float(2 * (N - 1) - 2 * g * C)
        return PrimeRecord(p, C, D, g, fp)

    if threads > 1 and len(primes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(one, primes))
    else:
        records = [one(p) for p in primes]
    return RigidityReport(N, c, v.name, g_mode, backend, records)
