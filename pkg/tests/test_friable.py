import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussrig.arith import sieve_primes
from gaussrig.errors import DomainError, SizeError
from gaussrig.friable import (
    FriableQuery,
    equidistribution_report,
    friable_mask,
    psi_count,
    residue_counts,
    restricted_lower_bound,
    saias_compare,
    saias_csv,
    solve_alpha,
    theta,
    zeta_partial,
)

PRIMES = [int(p) for p in sieve_primes(1000).primes]


def _brute(x, y, z, q=None, a=None):
    out = 0
    for n in range(1, x + 1):
        if q is not None and n % q != a:
            continue
        if all(z < p <= y for p in sympy.primefactors(n)):
            out += 1
    return out


def test_theta_examples():
    assert theta(100, 10, 3) == 6
    assert theta(100, 10, 3, q=3, a=1) == 4
    assert theta(100, 10, 10) == 1
    assert np.flatnonzero(friable_mask(100, 10, 3)).tolist() == [1, 5, 7, 25, 35, 49]


def test_psi_examples():
    assert psi_count(10, 2) == 4
    assert psi_count(100, 3) == 20
    assert psi_count(57, 57) == 57
    assert psi_count(57, 1000) == 57


def test_guards():
    with pytest.raises(SizeError):
        friable_mask(10**8 + 1, 10, 1)
    with pytest.raises(DomainError):
        FriableQuery(10, 20, 1)
    with pytest.raises(DomainError):
        FriableQuery(100, 10, 1, q=7, a=7)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 1500), st.integers(1, 60), st.integers(1, 60))
def test_theta_matches_enumeration(x, y, z):
    y = min(y, x)
    z = min(z, y)
    assert theta(x, y, z) == _brute(x, y, z)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 800), st.integers(2, 40), st.integers(1, 10), st.sampled_from([3, 5, 7, 11]), st.data())
def test_theta_residue_matches_enumeration(x, y, z, q, data):
    y, z = min(y, x), min(z, y, x)
    a = data.draw(st.integers(0, q - 1))
    assert theta(x, y, z, q, a) == _brute(x, y, z, q, a)


@settings(max_examples=25, deadline=None)
@given(st.integers(1000, 50_000), st.integers(2, 200), st.integers(1, 30), st.data())
def test_partition_above_y(x, y, z, data):
    z = min(z, y)
    q = data.draw(st.sampled_from([p for p in PRIMES if p > y]))
    counts = residue_counts(x, y, z, q)
    assert counts[0] == 0
    assert int(counts[1:].sum()) == theta(x, y, z)


@settings(max_examples=25, deadline=None)
@given(st.integers(100, 30_000), st.integers(2, 100), st.integers(1, 50))
def test_inclusion_and_monotonicity(x, y, z):
    z = min(z, y)
    t = theta(x, y, z)
    assert t <= psi_count(x, y)
    assert theta(x + 37, y, z) >= t
    assert theta(x, y + 10, z) >= t
    assert theta(x, y, min(z + 5, y)) <= t


@settings(max_examples=20, deadline=None)
@given(st.integers(1000, 100_000), st.integers(10, 100), st.integers(1, 10),
       st.sampled_from([101, 103, 107, 109, 113]), st.data())
def test_restricted_sandwich(x, y, z, q, data):
    inside = [p for p in PRIMES if z < p <= y]
    allowed = data.draw(st.lists(st.sampled_from(inside), unique=True)) if inside else []
    a = data.draw(st.integers(1, q - 1))
    restricted, lower = restricted_lower_bound(x, y, z, q, a, allowed)
    assert restricted >= lower
    assert restricted == _restricted_brute(x, y, z, q, a, set(allowed))


def _restricted_brute(x, y, z, q, a, allowed):
    return sum(
        1 for n in range(a if a else q, x + 1, q)
        if all(z < p <= y and p in allowed for p in sympy.primefactors(n))
    )


def test_restricted_callable_matches_set():
    allowed = {p for p in PRIMES if p % 4 == 1}
    a = theta(10**5, 100, 3, 101, 7, allowed=allowed)
    b = theta(10**5, 100, 3, 101, 7, allowed=lambda p: p % 4 == 1)
    assert a == b


def test_alpha_exact_one():
    y, z = 1000, 10
    ps = [p for p in PRIMES if z < p <= y]
    logx = math.fsum(math.log(p) / (p - 1) for p in ps)
    sp = solve_alpha(math.exp(logx), y, z)
    assert sp.alpha == pytest.approx(1.0, abs=1e-10)
    assert abs(sp.residual) <= 1e-10 * logx


def test_alpha_frozen_value():
    sp = solve_alpha(10**6, 10**3, 10)
    assert 0 < sp.alpha < 1
    assert sp.alpha == pytest.approx(0.76650805, abs=1e-7)
    assert abs(sp.residual) <= 1e-10 * math.log(10**6)


def test_alpha_errors():
    with pytest.raises(DomainError):
        solve_alpha(10**6, 10, 10)
    with pytest.raises(DomainError):
        solve_alpha(1, 100, 1)


@settings(max_examples=40, deadline=None)
@given(st.floats(2.0, 300.0), st.integers(10, 10**5), st.integers(1, 50))
def test_alpha_residual_and_monotone(logx, y, z):
    z = min(z, y - 1)
    if not any(z < p <= y for p in sympy.primerange(z + 1, y + 1)):
        return
    a1 = solve_alpha(math.exp(logx), y, z)
    a2 = solve_alpha(math.exp(logx + 1), y, z)
    assert abs(a1.residual) <= 1e-10 * logx
    assert 0 < a2.alpha < a1.alpha <= 1.5


def test_zeta_partial():
    assert zeta_partial(1, 10, 3) == pytest.approx(35 / 24, rel=1e-15)
    assert zeta_partial(2.5, 10, 10) == 1
    assert zeta_partial(40, 10, 3) == pytest.approx(1, abs=1e-9)


def test_saias_examples():
    r = saias_compare(10**6, 100, 10)
    assert 0.2 <= r.ratio <= 5
    r2 = saias_compare(2 * 10**6, 100, 10)
    assert 0.5 <= r2.ratio / r.ratio <= 2
    degenerate = saias_compare(1000, 10, 10)
    assert degenerate.brute == 1 and math.isnan(degenerate.ratio)
    assert saias_csv([r]).splitlines()[0] == "x,y,z,alpha,residual,brute,estimate,ratio"


def test_equidistribution_examples():
    rep = equidistribution_report(10**6, 10**3, 10, 101)
    assert rep.flagged and rep.partition_holds
    assert rep.relative_spread < 1
    rep = equidistribution_report(10**6, 100, 10, 211)
    assert not rep.flagged and rep.counts[0] == 0 and rep.partition_holds
    assert rep.to_csv().splitlines()[:2] == ["a,count", f"1,{rep.counts[1]}"]
    trivial = equidistribution_report(100, 10, 10, 11)
    assert trivial.total == 1 and trivial.counts[1] == 1 and trivial.counts.sum() == 1
