"""Primes, smallest-prime-factor tables and +-1 completely multiplicative functions.

Functions are described by a :class:`MultiplicativeFunctionSpec` (a rule for
the values at primes) and tabulated on ``[1, N-1]`` as a :class:`ValueTable`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from sympy import factorint, isprime

from .errors import DomainError, UsageError

KINDS = ("liouville", "legendre", "principal", "flip", "table")


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __len__(self):
        return len(self.primes)

    def upto(self, bound: float) -> np.ndarray:
        """Primes p <= bound."""
        return self.primes[: np.searchsorted(self.primes, bound, side="right")]


@dataclass(frozen=True)
class FactorTable:
    limit: int
    spf: np.ndarray

    def omega(self) -> np.ndarray:
        """Omega(n) (prime factors with multiplicity) for 0 <= n <= limit; Omega(0) = 0."""
        out = np.zeros(self.limit + 1, dtype=np.int16)
        for lo, hi in _dyadic_blocks(self.limit):
            n = np.arange(lo, hi, dtype=np.int64)
            out[lo:hi] = out[n // self.spf[lo:hi]] + 1
        return out


def _is_prime_array(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def sieve_primes(limit: int) -> PrimeTable:
    """All primes <= limit (Eratosthenes)."""
    if limit < 0:
        raise DomainError("limit must be >= 0")
    if limit < 2:
        return PrimeTable(limit, np.zeros(0, dtype=np.int64))
    return PrimeTable(limit, np.flatnonzero(_is_prime_array(limit)).astype(np.int64))


def factor_table(limit: int) -> FactorTable:
    """Smallest-prime-factor table with spf[1] = 1 (spf[0] = 0 is a placeholder)."""
    if limit < 1:
        raise DomainError("limit must be >= 1")
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            view = spf[p * p :: p]
            view[view == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[0] = 0
    spf[1] = 1
    return FactorTable(limit, spf)


def factorize(n: int, t: FactorTable) -> list[tuple[int, int]]:
    """Prime factorization of n as ascending (prime, exponent) pairs; [] for n = 1."""
    if not 1 <= n <= t.limit:
        raise DomainError(f"n={n} outside factor table range [1, {t.limit}]")
    out: list[tuple[int, int]] = []
    while n > 1:
        p = int(t.spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def largest_prime_factor(n: int, t: FactorTable) -> int:
    fs = factorize(n, t)
    return fs[-1][0] if fs else 1


def smallest_prime_factor(n: int, t: FactorTable) -> int:
    return int(t.spf[n]) if n > 1 else 1


def require_prime(N: int, odd: bool = False) -> None:
    if not isinstance(N, (int, np.integer)) or not isprime(int(N)) or (odd and N == 2):
        raise DomainError(f"{N} is not {'an odd' if odd else 'a'} prime")


def legendre_symbol(n: int, N: int) -> int:
    """(n/N) by the quadratic-reciprocity (Jacobi) reduction."""
    require_prime(N, odd=True)
    a = n % N
    m = N
    sign = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                sign = -sign
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            sign = -sign
        a %= m
    return sign if m == 1 else 0


def residue_characters(N: int) -> np.ndarray:
    """chi_N(r) for r = 0..N-1 as int8, computed by marking squares."""
    chi = -np.ones(N, dtype=np.int8)
    k = np.arange(1, N // 2 + 1, dtype=np.int64)
    chi[(k * k) % N] = 1
    chi[0] = 0
    return chi


@dataclass(frozen=True)
class MultiplicativeFunctionSpec:
    """Rule for a completely multiplicative f: N -> {-1, +1} via its prime values.

    ``legendre`` is taken as +1 at the modulus itself so that f stays
    non-vanishing; only the residues 1..N-1 enter the exponential sums.
    """

    kind: str
    modulus: int | None = None
    base: MultiplicativeFunctionSpec | None = None
    flips: frozenset = field(default_factory=frozenset)
    prime_values: Mapping[int, int] | None = None
    label: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown function kind {self.kind!r}")
        if self.kind == "legendre":
            require_prime(self.modulus, odd=True)
        if self.kind == "flip" and self.base is None:
            raise UsageError("flip needs a base spec")
        if self.kind == "table":
            if self.prime_values is None:
                raise UsageError("table needs prime values")
            bad = {v for v in self.prime_values.values() if v not in (-1, 1)}
            if bad:
                raise DomainError(f"table values must be +-1, got {sorted(bad)}")

    @classmethod
    def liouville(cls):
        return cls("liouville")

    @classmethod
    def principal(cls):
        return cls("principal")

    @classmethod
    def legendre(cls, N: int):
        return cls("legendre", modulus=N)

    @classmethod
    def flip(cls, base: MultiplicativeFunctionSpec, primes: Iterable[int]):
        return cls("flip", base=base, flips=frozenset(int(p) for p in primes))

    @classmethod
    def table(cls, values: Mapping[int, int] | Sequence[int]):
        if not isinstance(values, Mapping):
            ps = sieve_primes(_nth_prime_bound(len(values))).primes[: len(values)]
            values = {int(p): int(v) for p, v in zip(ps, values)}
        return cls("table", prime_values=dict(values))

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.kind == "legendre":
            return f"legendre({self.modulus})"
        if self.kind == "flip":
            return f"flip({self.base.name};{','.join(map(str, sorted(self.flips)))})"
        if self.kind == "table":
            return f"table[{len(self.prime_values)}]"
        return self.kind

    def prime_value(self, p: int) -> int:
        if self.kind == "liouville":
            return -1
        if self.kind == "principal":
            return 1
        if self.kind == "legendre":
            return legendre_symbol(p, self.modulus) or 1
        if self.kind == "flip":
            v = self.base.prime_value(p)
            return -v if p in self.flips else v
        try:
            return self.prime_values[p]
        except KeyError:
            raise DomainError(f"table has no value at prime {p}") from None

    def prime_value_array(self, limit: int) -> np.ndarray:
        """int8 array a with a[p] = f(p) for primes p <= limit (other entries 0)."""
        ps = sieve_primes(limit).primes
        out = np.zeros(limit + 1, dtype=np.int8)
        if self.kind == "liouville":
            out[ps] = -1
        elif self.kind == "principal":
            out[ps] = 1
        elif self.kind == "legendre":
            chi = residue_characters(self.modulus)
            vals = chi[ps % self.modulus]
            vals[vals == 0] = 1
            out[ps] = vals
        elif self.kind == "flip":
            out = self.base.prime_value_array(limit)
            fl = np.array([p for p in self.flips if p <= limit], dtype=np.int64)
            out[fl] = -out[fl]
        else:
            missing = [int(p) for p in ps if int(p) not in self.prime_values]
            if missing:
                raise DomainError(f"table has no value at primes {missing[:5]}...")
            out[ps] = [self.prime_values[int(p)] for p in ps]
        return out

    def __call__(self, n: int) -> int:
        if n < 1:
            raise DomainError("f is defined on positive integers")
        v = 1
        for p, e in factorint(n).items():
            if e % 2:
                v *= self.prime_value(p)
        return v


def _nth_prime_bound(k: int) -> int:
    if k < 6:
        return 13
    return int(k * (math.log(k) + math.log(math.log(k)))) + 1


def _dyadic_blocks(limit: int):
    lo = 2
    while lo <= limit:
        hi = min(2 * lo, limit + 1)
        yield lo, hi
        lo = hi


@dataclass(frozen=True)
class ValueTable:
    """f(1), ..., f(N-1) stored as int8; ``padded[n] = f(n)`` with padded[0] = 0."""

    N: int
    values: np.ndarray
    spec: MultiplicativeFunctionSpec | None = None

    def __post_init__(self):
        if len(self.values) != self.N - 1:
            raise UsageError("value table must have length N-1")

    @property
    def padded(self) -> np.ndarray:
        return np.concatenate(([0], self.values)).astype(np.int8)

    def __getitem__(self, n: int) -> int:
        return int(self.values[n - 1])

    @property
    def name(self) -> str:
        return self.spec.name if self.spec is not None else "custom"


def mf_table(spec: MultiplicativeFunctionSpec, N: int, factors: FactorTable | None = None) -> ValueTable:
    """Tabulate f on [1, N-1] through f(n) = f(spf(n)) * f(n / spf(n))."""
    require_prime(N)
    if spec.kind == "legendre" and spec.modulus != N:
        raise UsageError(f"legendre({spec.modulus}) used with modulus {N}")
    limit = N - 1
    full = np.zeros(limit + 1, dtype=np.int8)
    if limit >= 1:
        full[1] = 1
    if limit >= 2:
        t = factors if factors is not None and factors.limit >= limit else factor_table(limit)
        fp = spec.prime_value_array(limit)
        spf = t.spf
        for lo, hi in _dyadic_blocks(limit):
            n = np.arange(lo, hi, dtype=np.int64)
            s = spf[lo:hi]
            full[lo:hi] = fp[s] * full[n // s]
    return ValueTable(N, full[1:].copy(), spec)


def values_table(values: Sequence[int], N: int) -> ValueTable:
    """Wrap an arbitrary +-1 sequence f(1..N-1) (not necessarily multiplicative)."""
    arr = np.asarray(values, dtype=np.int8)
    if not np.all(np.abs(arr) == 1):
        raise DomainError("values must be +-1")
    return ValueTable(N, arr)


def parse_function_spec(text: str, N: int | None = None) -> MultiplicativeFunctionSpec:
    """Parse the CLI grammar: liouville | legendre | principal | flip:p1,p2,... | file:<path>.

    ``legendre`` and ``flip`` need the modulus N.
    """
    text = text.strip()
    if text in ("liouville", "lambda"):
        return MultiplicativeFunctionSpec.liouville()
    if text in ("principal", "one"):
        return MultiplicativeFunctionSpec.principal()
    if text in ("legendre", "chi"):
        if N is None:
            raise UsageError("legendre needs --n")
        return MultiplicativeFunctionSpec.legendre(N)
    if text.startswith("flip:"):
        if N is None:
            raise UsageError("flip needs --n")
        body = text[5:]
        primes = [int(s) for s in body.split(",") if s.strip()]
        for p in primes:
            require_prime(p)
        return MultiplicativeFunctionSpec.flip(MultiplicativeFunctionSpec.legendre(N), primes)
    if text.startswith("file:"):
        return load_prime_values(text[5:])
    raise UsageError(f"cannot parse function spec {text!r}")


def load_prime_values(path: str | Path) -> MultiplicativeFunctionSpec:
    """Read one +-1 per line; line i holds the value at the i-th prime. Blank and # lines skipped."""
    vals = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            vals.append(int(line))
    spec = MultiplicativeFunctionSpec.table(vals)
    return MultiplicativeFunctionSpec(
        "table", prime_values=spec.prime_values, label=f"file:{Path(path).name}"
    )
