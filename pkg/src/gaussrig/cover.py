"""Covering (Z/qZ)^x by products of small primes.

P^(k) is the set of residues p_1 ... p_k mod q with every p_j < X prime.
Witnesses record, for each residue the first time it is reached, the
(predecessor, prime) pair; ties go to the smallest prime, then the smallest
predecessor, so output does not depend on evaluation order.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from sympy import divisors, primitive_root, sqrt_mod

from .arith import legendre_symbol, require_prime, sieve_primes
from .errors import DomainError, InvariantError, NotFoundError, SizeError

Q_LIMIT = 2**26
FREIMAN_LIMIT = 10**5
COVER_CSV_FIELDS = ("k", "level_size", "cumulative_size", "coverage_fraction")
WITNESS_CSV_FIELDS = ("b", "P_b", "factorization")


@dataclass
class CoverState:
    q: int
    X: int
    primes: np.ndarray
    levels: list[np.ndarray] = field(default_factory=list)
    cumulative_sizes: list[int] = field(default_factory=list)
    depth: np.ndarray | None = None  # first level reaching each residue, 0 = never
    pred: np.ndarray | None = None
    via: np.ndarray | None = None

    @property
    def empty(self) -> bool:
        return len(self.primes) == 0

    @property
    def kmax(self) -> int:
        return len(self.levels)

    def cumulative(self, k: int) -> np.ndarray:
        """Residues reached by products of at most k primes (k >= 1)."""
        return np.flatnonzero((self.depth > 0) & (self.depth <= k))

    def witness(self, r: int) -> list[int]:
        """Primes (ascending) whose product is congruent to r, of minimal count."""
        if self.depth[r] == 0:
            raise NotFoundError(f"residue {r} not covered up to k={self.kmax}")
        out = []
        while self.depth[r] > 0:
            out.append(int(self.via[r]))
            if self.depth[r] == 1:
                break
            r = int(self.pred[r])
        return sorted(out)

    def validate(self) -> None:
        """Check every witness at once, inductively on depth.

        A depth-1 residue must equal its prime mod q; a depth-k residue must be
        pred * prime mod q with pred at depth k-1. All primes must be < X.
        """
        r = np.flatnonzero(self.depth > 0)
        d = self.depth[r]
        p = self.via[r]
        allowed = np.zeros(max(self.X, 2), dtype=bool)
        allowed[self.primes] = True
        if not np.all(allowed[p]):
            raise InvariantError("witness uses a prime outside [2, X)")
        one = d == 1
        if not np.all(p[one] % self.q == r[one]):
            raise InvariantError("depth-1 witness does not match its residue")
        deep = ~one
        s = self.pred[r[deep]]
        if not np.all(self.depth[s] == d[deep] - 1):
            raise InvariantError("witness predecessor has the wrong depth")
        if not np.all((s * p[deep]) % self.q == r[deep]):
            raise InvariantError("witness product does not match its residue")
        cum = [int(np.count_nonzero((self.depth > 0) & (self.depth <= k))) for k in range(1, self.kmax + 1)]
        if cum != self.cumulative_sizes or any(a > b for a, b in zip(cum, cum[1:])):
            raise InvariantError("cumulative coverage is not monotone or inconsistent")

    def coverage_rows(self) -> list[tuple[int, int, int, float]]:
        return [
            (k, len(level), cum, cum / (self.q - 1))
            for k, (level, cum) in enumerate(zip(self.levels, self.cumulative_sizes), start=1)
        ]

    def coverage_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COVER_CSV_FIELDS)
        for k, size, cum, frac in self.coverage_rows():
            w.writerow([k, size, cum, repr(frac)])
        return buf.getvalue()

    def witness_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(WITNESS_CSV_FIELDS)
        for b in range(1, self.q):
            if self.depth[b]:
                ps = self.witness(b)
                w.writerow([b, math.prod(ps), "*".join(map(str, ps))])
        return buf.getvalue()


def _cover_primes(q: int, X: int) -> np.ndarray:
    ps = sieve_primes(max(X - 1, 0)).primes
    return ps[ps % q != 0]


def _products(src: np.ndarray, primes: np.ndarray, q: int):
    """All (p * s mod q) in prime-major order, with the matching s and p arrays."""
    prod = (primes[:, None] * src[None, :]) % q
    s = np.broadcast_to(src[None, :], prod.shape)
    p = np.broadcast_to(primes[:, None], prod.shape)
    return prod.ravel(), s.ravel(), p.ravel()


def _record_new(prod, s, p, depth, pred, via, k):
    fresh = depth[prod] == 0
    if not fresh.any():
        return
    # inputs arrive sorted by (p, s), so the first occurrence is the tie-break winner
    prod, s, p = prod[fresh], s[fresh], p[fresh]
    uniq, first = np.unique(prod, return_index=True)
    depth[uniq] = k
    pred[uniq] = s[first]
    via[uniq] = p[first]


def _chunked_level(src, primes, q, depth, pred, via, k):
    nxt = np.zeros(q, dtype=bool)
    chunk = max(1, 2**22 // max(len(src), 1))
    for i in range(0, len(primes), chunk):
        prod, s, p = _products(src, primes[i : i + chunk], q)
        nxt[prod] = True
        _record_new(prod, s, p, depth, pred, via, k)
    return np.flatnonzero(nxt)


def product_levels(q: int, X: int, kmax: int, stop_when_full: bool = False) -> CoverState:
    """Exact-k product sets P^(1..kmax) with cumulative coverage and witnesses."""
    require_prime(q)
    if X < 2 or kmax < 1:
        raise DomainError("need X >= 2 and kmax >= 1")
    if q > Q_LIMIT:
        raise SizeError(f"q={q} above bitset guard {Q_LIMIT}")
    primes = _cover_primes(q, X)
    depth = np.zeros(q, dtype=np.int16)
    pred = np.zeros(q, dtype=np.int64)
    via = np.zeros(q, dtype=np.int64)
    state = CoverState(q, X, primes, depth=depth, pred=pred, via=via)
    if len(primes) == 0:
        state.levels = [np.zeros(0, dtype=np.int64) for _ in range(kmax)]
        state.cumulative_sizes = [0] * kmax
        return state
    level = np.unique(primes % q)
    for r in level:
        depth[r] = 1
        via[r] = int(primes[np.flatnonzero(primes % q == r)[0]])
    covered = len(level)
    state.levels.append(level)
    state.cumulative_sizes.append(covered)
    for k in range(2, kmax + 1):
        if stop_when_full and covered == q - 1:
            break
        level = _chunked_level(level, primes, q, depth, pred, via, k)
        covered = int(np.count_nonzero(depth[1:]))
        state.levels.append(level)
        state.cumulative_sizes.append(covered)
    return state


def minimal_cover_k(q: int, X: int, kmax: int) -> int | None:
    """Least K <= kmax such that products of at most K primes < X cover (Z/qZ)^x."""
    state = product_levels(q, X, kmax, stop_when_full=True)
    for k, cum in enumerate(state.cumulative_sizes, start=1):
        if cum == q - 1:
            return k
    return None


@dataclass(frozen=True)
class FreimanResult:
    branch: str  # "grows", "covers" or "precondition_failed"
    size: int
    size_doubled: int | None = None
    fourfold_covers: bool | None = None


def _sumset(ind: np.ndarray, other: np.ndarray) -> np.ndarray:
    m = len(ind)
    if m <= 512:
        a = np.flatnonzero(ind)
        b = np.flatnonzero(other)
        out = np.zeros(m, dtype=bool)
        out[(a[:, None] + b[None, :]) % m] = True
        return out
    conv = np.fft.irfft(np.fft.rfft(ind.astype(float)) * np.fft.rfft(other.astype(float)), m)
    return conv > 0.5


def discrete_logs(q: int) -> np.ndarray:
    """log[r] w.r.t. the least primitive root, for 1 <= r < q (log[0] unused)."""
    g = primitive_root(q)
    logs = np.zeros(q, dtype=np.int64)
    x = 1
    for k in range(q - 1):
        logs[x] = k
        x = x * g % q
    return logs


def in_proper_coset(m: int, S) -> bool:
    """True if S (in Z/mZ) lies in a coset of a proper subgroup dZ/mZ, d | m, d > 1."""
    S = [int(s) % m for s in S]
    s0 = S[0]
    return any(all((s - s0) % d == 0 for s in S) for d in divisors(m) if d > 1)


def freiman_check(m: int, S, q: int | None = None) -> FreimanResult:
    """Which branch of |S^2| >= 3/2 |S| or S^4 = G holds for S in the cyclic group of order m.

    With ``q`` given, S is a subset of (Z/qZ)^x (so m = q - 1) and is moved to
    Z/(q-1) by discrete logarithms; otherwise S is a subset of Z/mZ.
    """
    if q is not None:
        require_prime(q)
        m = q - 1
        if any(int(s) % q == 0 for s in S):
            raise DomainError("S must consist of units mod q")
        logs = discrete_logs(q)
        S = [int(logs[int(s) % q]) for s in S]
    if m > FREIMAN_LIMIT:
        raise SizeError(f"group order {m} above {FREIMAN_LIMIT}")
    S = sorted({int(s) % m for s in S})
    if not S:
        raise DomainError("S must be non-empty")
    if in_proper_coset(m, S):
        return FreimanResult("precondition_failed", len(S))
    ind = np.zeros(m, dtype=bool)
    ind[S] = True
    s2 = _sumset(ind, ind)
    n2 = int(np.count_nonzero(s2))
    s4_full = bool(np.all(_sumset(s2, s2)))
    if 2 * n2 >= 3 * len(S):
        return FreimanResult("grows", len(S), n2, s4_full)
    if s4_full:
        return FreimanResult("covers", len(S), n2, s4_full)
    raise InvariantError(f"neither Freiman branch holds for S={S[:10]}... in Z/{m}")


@dataclass(frozen=True)
class Representative:
    b: int
    P_b: int
    factorization: tuple[int, ...]
    is_square_witness: bool

    @property
    def omega(self) -> int:
        return len(self.factorization)


def _bfs_from_one(q: int, primes: np.ndarray, max_depth: int):
    depth = np.zeros(q, dtype=np.int16)
    pred = np.zeros(q, dtype=np.int64)
    via = np.zeros(q, dtype=np.int64)
    # depth is stored +1 so that 0 means unvisited; residue 1 sits at true depth 0
    depth[1] = 1
    frontier = np.array([1], dtype=np.int64)
    reached = 0
    for k in range(1, max_depth + 1):
        if len(frontier) == 0 or len(primes) == 0:
            break
        before = depth.copy()
        _chunked_level(frontier, primes, q, depth, pred, via, k + 1)
        frontier = np.flatnonzero((depth == k + 1) & (before == 0))
        if len(frontier):
            reached = k
    return depth, pred, via, reached


def _path(r: int, depth, pred, via) -> list[int]:
    out = []
    while depth[r] > 1:
        out.append(int(via[r]))
        r = int(pred[r])
    return sorted(out)


def find_representative(b: int, q: int, X: int, K1: float | None = None, K2: int = 8) -> Representative:
    """Positive P_b = b mod q built from primes < X with Omega(P_b) <= 2*K2.

    Non-residues get the shortest product found by BFS. For a quadratic
    residue b the result is n_a^2 with a^2 = b, so every completely
    multiplicative +-1 function takes the value +1 at P_b. If ``K1`` is given,
    P_b < q^(2*K1) is also required.
    """
    require_prime(q, odd=True)
    if not 1 <= b < q:
        raise DomainError(f"b must satisfy 1 <= b < q, got {b}")
    primes = _cover_primes(q, X)
    depth, pred, via, reached = _bfs_from_one(q, primes, K2)

    def shortest(r: int) -> list[int] | None:
        return _path(r, depth, pred, via) if depth[r] else None

    if legendre_symbol(b, q) == 1:
        cands = []
        for a in sqrt_mod(b, q, all_roots=True):
            path = shortest(int(a))
            if path is not None:
                cands.append((len(path), math.prod(path), path))
        if not cands:
            raise NotFoundError(f"no square root of {b} reachable within depth {K2}", deepest=reached)
        _, n_a, path = min(cands)
        rep = Representative(b, n_a * n_a, tuple(sorted(path + path)), True)
    else:
        path = shortest(b)
        if path is None:
            raise NotFoundError(f"{b} not reachable within depth {K2}", deepest=reached)
        rep = Representative(b, math.prod(path), tuple(path), False)
    if K1 is not None and rep.P_b >= q ** (2 * K1):
        raise NotFoundError(f"P_{b} = {rep.P_b} exceeds q^(2K1)", deepest=reached)
    return rep
