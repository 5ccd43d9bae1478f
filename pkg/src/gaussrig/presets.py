"""Experiment presets: one desk-scale sweep per result being probed.

Every preset writes CSV files into an output directory and returns the list
of paths. Same preset, parameters and seed give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from . import svg
from .arith import MultiplicativeFunctionSpec as MFS
from .arith import mf_table, sieve_primes
from .cover import product_levels
from .expsum import dft_fast
from .friable import equidistribution_report, saias_compare, saias_csv
from .lfunc import corollary_csv, corollary_row
from .proximity import distance_count, prime_distance, reports_csv
from .rigidity import rigidity_scan


def _primes_from(start: int, count: int) -> list[int]:
    ps = sieve_primes(max(4 * start, start + 40 * count)).primes
    return [int(p) for p in ps[ps >= start][:count]]


def _write(path: Path, text: str) -> Path:
    path.write_text(text)
    return path


def _table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def gauss_identity(out: Path, start: int = 1000, count: int = 10, c: float = 0.3, threads: int = 1, **_):
    rows, paths = [], []
    for N in _primes_from(start, count):
        rep = rigidity_scan(MFS.legendre(N), N, c, "match_f", threads=threads)
        paths.append(_write(out / f"rigidity_{N}.csv", rep.to_csv()))
        u = dft_fast(mf_table(MFS.legendre(N), N))[1] / math.sqrt(N)
        rows.append([N, N % 4, repr(rep.max_deficit), repr(u.real), repr(u.imag)])
    paths.append(_write(out / "summary.csv", _table(("N", "N_mod_4", "max_deficit", "u_re", "u_im"), rows)))
    return paths


def thm1_flip(out: Path, n: int = 1009, c: float = 0.25, max_flips: int = 6, trials: int = 4,
              seed: int = 0, threads: int = 1, **_):
    rng = np.random.default_rng(seed)
    chi = mf_table(MFS.legendre(n), n)
    small = sieve_primes(n - 1).primes
    rows, dist_reports = [], []
    for size in range(1, max_flips + 1):
        for _ in range(trials):
            B = sorted(int(p) for p in rng.choice(small, size, replace=False))
            spec = MFS.flip(MFS.legendre(n), B)
            f = mf_table(spec, n)
            d = distance_count(f, chi)
            rep = rigidity_scan(f, n, c, "match_f", threads=threads)
            clean = [r.deficit for r in rep.records if r.p not in B]
            rows.append([" ".join(map(str, B)), d, repr(rep.max_deficit), repr(max(clean, default=0.0)), 8 * d])
            dist_reports.append(prime_distance(f, chi))
    paths = [
        _write(out / "flip_sweep.csv", _table(("flip_set", "distance", "max_deficit", "max_deficit_unflipped", "eight_d"), rows)),
        _write(out / "distance.csv", reports_csv(dist_reports)),
    ]
    paths.append(_write(out / "deficit_vs_distance.svg", svg.plot(
        [r[1] for r in rows], [float(r[3]) for r in rows],
        title=f"N={n}: deficit at unflipped p vs distance", xlabel="distance", ylabel="deficit")))
    return paths


def corollary_liouville(out: Path, start: int = 1000, count: int = 50, **_):
    rows = [corollary_row(N) for N in _primes_from(start, count)]
    return [_write(out / "corollary.csv", corollary_csv(rows))]


def walker_cover(out: Path, qs=(1009, 2003, 4001), exponents=(0.5, 0.6, 0.75), kmax: int = 8, **_):
    paths, rows = [], []
    for q in qs:
        for e in exponents:
            X = math.ceil(q**e)
            st = product_levels(q, X, kmax)
            st.validate()
            paths.append(_write(out / f"cover_q{q}_X{X}.csv", st.coverage_csv()))
            full = [k for k, _, cum, _ in st.coverage_rows() if cum == q - 1]
            rows.append([q, X, full[0] if full else ""])
    paths.append(_write(out / "summary.csv", _table(("q", "X", "K"), rows)))
    return paths


def friable_ap(out: Path, x: int = 10**6, y: int = 100, z: int = 10, qs=(101, 211, 401), **_):
    paths = []
    for q in qs:
        rep = equidistribution_report(x, y, z, q)
        paths.append(_write(out / f"equidistribution_q{q}.csv", rep.to_csv()))
    grid = [(x, y, z), (2 * x, y, z), (4 * x, y, z)]
    paths.append(_write(out / "saias.csv", saias_csv(saias_compare(*g) for g in grid)))
    return paths


PRESETS = {
    "gauss-identity": gauss_identity,
    "thm1-flip": thm1_flip,
    "corollary-liouville": corollary_liouville,
    "walker-cover": walker_cover,
    "friable-ap": friable_ap,
}


def run_preset(name: str, out: str | Path, **params) -> list[Path]:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    return PRESETS[name](out, **{k: v for k, v in params.items() if v is not None})
