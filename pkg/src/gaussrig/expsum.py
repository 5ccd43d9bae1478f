"""Twisted exponential sums S_f(a) = sum_{1<=n<N} f(n) e(an/N) for all a mod N."""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arith import ValueTable, require_prime
from .errors import InvariantError, SizeError

NAIVE_LIMIT = 2**16


@dataclass(frozen=True)
class ExpSumTable:
    N: int
    entries: np.ndarray  # complex128, length N
    backend: str
    source: str = "custom"

    def __getitem__(self, a: int) -> complex:
        return complex(self.entries[a % self.N])

    def check(self, rel_tol: float = 1e-9) -> None:
        """Raise InvariantError if Plancherel or the zero-sum identity fails."""
        N = self.N
        energy = float(np.sum(np.abs(self.entries) ** 2))
        if abs(energy - N * (N - 1)) > rel_tol * N * (N - 1):
            raise InvariantError(f"Plancherel failed: {energy} != {N * (N - 1)}")
        total = abs(complex(np.sum(self.entries)))
        if total > 1e-6 * N:
            raise InvariantError(f"sum over a of S_f(a) = {total}, expected 0")


def _roots(N: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(N) / N)


def dft_naive(v: ValueTable) -> ExpSumTable:
    """Direct O(N^2) summation; exact phases via (a*n mod N) lookup."""
    N = v.N
    if N > NAIVE_LIMIT:
        raise SizeError(f"naive DFT limited to N <= {NAIVE_LIMIT}, got {N}")
    w = _roots(N)
    f = v.values.astype(np.float64)
    n = np.arange(1, N, dtype=np.int64)
    out = np.empty(N, dtype=np.complex128)
    rows = max(1, 2**22 // max(N, 1))
    for a0 in range(0, N, rows):
        a = np.arange(a0, min(a0 + rows, N), dtype=np.int64)
        idx = np.outer(a, n) % N
        out[a0 : a0 + len(a)] = w[idx] @ f
    return ExpSumTable(N, out, "naive", v.name)


def _chirp(N: int, sign: int) -> np.ndarray:
    # exp(sign * i*pi*k^2/N) with k^2 reduced mod 2N to keep the phase small
    k = np.arange(N, dtype=np.int64)
    return np.exp(sign * 1j * np.pi * ((k * k) % (2 * N)) / N)


def bluestein(x: np.ndarray, sign: int = 1) -> np.ndarray:
    """Length-N DFT X[a] = sum_n x[n] exp(sign*2*pi*i*a*n/N) via chirp-z.

    Uses a*n = (a^2 + n^2 - (a-n)^2)/2, turning the transform into a linear
    convolution evaluated with power-of-two FFTs.
    """
    x = np.asarray(x, dtype=np.complex128)
    N = len(x)
    if N <= 1:
        return x.copy()
    L = 1 << (2 * N - 2).bit_length()
    c = _chirp(N, sign)
    u = np.zeros(L, dtype=np.complex128)
    u[:N] = x * c
    kern = np.zeros(L, dtype=np.complex128)
    cc = np.conj(c)
    kern[:N] = cc
    kern[L - N + 1 :] = cc[1:][::-1]
    conv = np.fft.ifft(np.fft.fft(u) * np.fft.fft(kern))
    return c * conv[:N]


def dft_fast(v: ValueTable) -> ExpSumTable:
    """O(N log N) evaluation of the full S_f table through :func:`bluestein`."""
    require_prime(v.N)
    x = v.padded.astype(np.complex128)
    return ExpSumTable(v.N, bluestein(x, sign=1), "fft", v.name)


def exp_sums(v: ValueTable, backend: str = "fft") -> ExpSumTable:
    if backend == "naive":
        return dft_naive(v)
    if backend in ("fft", "fast"):
        return dft_fast(v)
    raise ValueError(f"unknown backend {backend!r}")


def dump(table: ExpSumTable, path: str | Path) -> None:
    """Little-endian u64 N followed by N (re, im) f64 pairs."""
    data = np.empty(2 * table.N, dtype="<f8")
    data[0::2] = table.entries.real
    data[1::2] = table.entries.imag
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", table.N))
        fh.write(data.tobytes())


def load(path: str | Path, backend: str = "cache", source: str = "cache") -> ExpSumTable:
    raw = Path(path).read_bytes()
    (N,) = struct.unpack_from("<Q", raw, 0)
    data = np.frombuffer(raw, dtype="<f8", offset=8)
    if len(data) != 2 * N:
        raise InvariantError(f"truncated dump: expected {2 * N} doubles, got {len(data)}")
    return ExpSumTable(int(N), data[0::2] + 1j * data[1::2], backend, source)
