"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""
import math
import time

import numpy as np
import pytest

from gaussrig import cover, friable, lfunc
from gaussrig.arith import MultiplicativeFunctionSpec as MFS
from gaussrig.arith import mf_table, sieve_primes, values_table
from gaussrig.expsum import dft_fast, dft_naive
from gaussrig.proximity import distance_count, inner_product
from gaussrig.rigidity import (
    correlation,
    deficit_bruteforce,
    deficit_correlation,
    deficit_spectral,
    primes_up_to_power,
    rigidity_scan,
)

PRIMES = sieve_primes(200_000).primes


def _pick(lo, hi, k, seed):
    pool = PRIMES[(PRIMES >= lo) & (PRIMES <= hi)]
    rng = np.random.default_rng(seed)
    return sorted(int(p) for p in rng.choice(pool, k, replace=False))


def test_c1_gauss_rigidity_zero(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for N in _pick(1_000, 100_000, 20, seed=1):
        rep = rigidity_scan(MFS.legendre(N), N, 0.3, "match_f", backend="fft")
        worst = max(worst, rep.max_deficit / N)
    dt = time.perf_counter() - t0
    criterion(1, worst <= 1e-6 and dt < 60, f"max deficit/N = {worst:.2e}, {dt:.1f} s")


def test_c2_quarter_law(criterion):
    err = 0.0
    for N in _pick(3, 100_000, 50, seed=2):
        u = dft_fast(mf_table(MFS.legendre(N), N))[1] / math.sqrt(N)
        target = 1 if N % 4 == 1 else 1j
        err = max(err, abs(u - target))
    criterion(2, err <= 1e-8, f"max |u_N - target| = {err:.2e}")


def test_c3_backend_equivalence(criterion):
    rng = np.random.default_rng(3)
    pool = PRIMES[(PRIMES >= 5) & (PRIMES <= 4099)]
    worst, brute_worst, brute_cases = 0.0, 0.0, 0
    for _ in range(100):
        N = int(rng.choice(pool))
        v = values_table(rng.choice([-1, 1], N - 1), N)
        Sn, Sf = dft_naive(v), dft_fast(v)
        for p in sieve_primes(min(50, N - 1)).primes:
            p = int(p)
            g = int(rng.choice([-1, 1]))
            d = [deficit_spectral(Sn, p, g), deficit_spectral(Sf, p, g), deficit_correlation(v, p, g)]
            worst = max(worst, (max(d) - min(d)) / N)
            if N <= 211:
                brute_cases += 1
                brute_worst = max(brute_worst, abs(deficit_bruteforce(v, p, g) - d[2]) / N)
    ok = worst <= 1e-6 and brute_worst <= 1e-6 and brute_cases > 0
    criterion(3, ok, f"pairwise {worst:.2e}, brute force {brute_worst:.2e} over {brute_cases} cases")


def _flip_violations(N, B, chi):
    f = mf_table(MFS.flip(MFS.legendre(N), B), N)
    d = distance_count(f, chi)
    bad = []
    for p in primes_up_to_power(N, 0.25):
        p = int(p)
        if p in B:
            continue
        D = deficit_correlation(f, p, f[p])
        if D > 8 * d:
            bad.append((N, tuple(B), p, D, d))
    return bad


def test_c4_perturbation_bound(criterion):
    bad, cases = [], 0
    for N in PRIMES[(PRIMES >= 3) & (PRIMES <= 200)]:
        N = int(N)
        chi = mf_table(MFS.legendre(N), N)
        small = [int(p) for p in PRIMES[PRIMES < N]]
        sets = [[]] + [[p] for p in small] + [[p, r] for i, p in enumerate(small) for r in small[i + 1:]]
        for B in sets:
            cases += 1
            bad += _flip_violations(N, B, chi)
    rng = np.random.default_rng(4)
    for N in (99_991, 100_003, 100_019):
        chi = mf_table(MFS.legendre(N), N)
        small = PRIMES[PRIMES < N]
        for size in (1, 2, 3, 5):
            for _ in range(3):
                cases += 1
                bad += _flip_violations(N, sorted(int(p) for p in rng.choice(small, size, replace=False)), chi)
    criterion(4, not bad, f"{cases} flip sets, violations: {bad[:3]}")


def test_c5_exact_identities(criterion):
    rng = np.random.default_rng(5)
    failures = []
    for N in _pick(3, 20_000, 15, seed=5):
        specs = [MFS.legendre(N), MFS.liouville(), MFS.principal()]
        tables = [mf_table(s, N) for s in specs] + [values_table(rng.choice([-1, 1], N - 1), N)]
        for v in tables:
            S = dft_fast(v).entries
            if abs(np.sum(np.abs(S) ** 2) - N * (N - 1)) > 1e-9 * N * (N - 1):
                failures.append(("plancherel", N, v.name))
            if abs(np.sum(S)) > 1e-6 * N:
                failures.append(("zero sum", N, v.name))
            for w in tables:
                if inner_product(v, w) != (N - 1) - 2 * distance_count(v, w):
                    failures.append(("indicator", N))
    for x, y, z, q in [(10**5, 50, 3, 101), (10**6, 100, 10, 211), (2 * 10**5, 30, 1, 37)]:
        counts = friable.residue_counts(x, y, z, q)
        if int(counts.sum()) != friable.theta(x, y, z) or counts[0] != 0:
            failures.append(("partition", x, y, z, q))
    criterion(5, not failures, f"failures: {failures[:3]}")


def test_c6_coverage(criterion):
    t0 = time.perf_counter()
    problems, worst_k = [], 0
    qs = PRIMES[(PRIMES >= 1_000) & (PRIMES <= 10_000)]
    for q in qs:
        q = int(q)
        X = math.ceil(q**0.75)
        st = cover.product_levels(q, X, 8, stop_when_full=True)
        st.validate()
        sizes = st.cumulative_sizes
        if any(a > b for a, b in zip(sizes, sizes[1:])):
            problems.append(("non-monotone", q))
        full = [k for k, s in enumerate(sizes, 1) if s == q - 1]
        if not full:
            problems.append(("no cover", q))
        else:
            worst_k = max(worst_k, full[0])
    dt = time.perf_counter() - t0
    ok = not problems and dt < 120
    criterion(6, ok, f"{len(qs)} moduli, max K = {worst_k}, {dt:.1f} s, problems: {problems[:3]}")


def test_c7_saddle_point(criterion):
    worst_res, worst_dev = 0.0, 0.0
    for y in (10**3, 10**4, 10**5, 10**6):
        for z in (1, 10, 100):
            for u in (5, 8, 12, 16, 20):
                x = float(y) ** u
                sp = friable.solve_alpha(x, y, z)
                worst_res = max(worst_res, abs(sp.residual) / math.log(x))
                dev = abs((1 - sp.alpha) * math.log(y) - math.log(u * math.log(u)))
                worst_dev = max(worst_dev, dev)
    ok = worst_res <= 1e-10 and worst_dev <= 5
    criterion(7, ok, f"max residual/log x = {worst_res:.1e}, max deviation = {worst_dev:.3f}")


def test_c8_saias_band(criterion):
    rows = [friable.saias_compare(*t) for t in [(10**6, 10**2, 10), (10**7, 10**3, 10), (10**7, 10**3, 30)]]
    ratios = [r.ratio for r in rows]
    criterion(8, all(0.2 <= r <= 5 for r in ratios), "ratios " + ", ".join(f"{r:.3f}" for r in ratios))


def test_c9_equidistribution(criterion):
    rep = friable.equidistribution_report(10**7, 10**3, 10, 997)
    ok = rep.relative_spread <= 0.5 and rep.partition_holds
    criterion(9, ok, f"spread = {rep.relative_spread:.3f}, total = {rep.total}, partition = {rep.partition_holds}")


def _l1_chi3_direct(terms=10**7):
    # chi_3 = (1, -1, 0) on n = 1, 2, 0 mod 3, paired sums 1/(3k+1) - 1/(3k+2)
    k = np.arange(terms // 3 + 1, dtype=np.float64)
    s = np.sum(1 / (3 * k + 1) - 1 / (3 * k + 2))
    return float(s)


class TestC10:
    """The L-function pipeline, split so the Euler comparison reports on its own."""

    def test_l1_chi3(self, criterion):
        got = lfunc.l_value(3, 1.0)
        ref = _l1_chi3_direct()
        criterion(10, abs(got - ref) <= 1e-6 and abs(got - math.pi / (3 * math.sqrt(3))) <= 1e-12,
                  f"(a) L(1, chi_3) = {got!r}, direct = {ref!r}")

    def test_no_real_zeros_small(self, criterion):
        found = {N: lfunc.real_zero_scan(N) for N in (3, 5, 13)}
        criterion(10, not any(found.values()), f"(b) real zeros in [0.5, 1): {found}")

    def test_corollary_csv(self, criterion, tmp_path):
        moduli = [int(p) for p in PRIMES[PRIMES >= 1000][:50]]
        rows = [lfunc.corollary_row(N) for N in moduli]
        text = lfunc.corollary_csv(rows)
        (tmp_path / "corollary.csv").write_text(text)
        lines = text.strip().splitlines()
        bad = []
        for N, r in zip(moduli, rows):
            lam, chi = mf_table(MFS.liouville(), N), mf_table(MFS.legendre(N), N)
            for v in (lam, chi):
                S = dft_fast(v)
                S.check()
            if inner_product(lam, chi) != (N - 1) - 2 * distance_count(lam, chi):
                bad.append(N)
            if abs(r.lambda_chi_mean - inner_product(lam, chi) / N) > 1e-15:
                bad.append(N)
        ok = len(lines) == 51 and lines[0].split(",") == list(lfunc.CSV_FIELDS) and not bad
        criterion(10, ok, f"(c) corollary CSV with {len(lines) - 1} rows, cross-check failures {bad}")

    def test_euler_vs_direct(self, criterion):
        moduli = [int(p) for p in PRIMES[PRIMES >= 1000][:50]]
        gaps = []
        for N in moduli:
            r = lfunc.chi_prime_sum(N)
            gaps.append((abs(r.euler_L1 - r.direct_L1), N))
        worst, at = max(gaps)
        over = sum(g > 1e-2 for g, _ in gaps)
        criterion(10, worst <= 1e-2, f"(d) euler vs direct: max gap {worst:.4f} at N = {at}, {over}/50 above 1e-2")
