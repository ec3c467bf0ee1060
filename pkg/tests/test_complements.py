import math

import pytest
from hypothesis import given, strategies as st

from abclab.complements import (
    build_power_point,
    is_power_free,
    pell_fundamental,
    pell_fundamental_search,
    pell_solve,
    power_chain_report,
    square_free_stats,
)
from abclab.errors import DomainError, UsageError
from abclab.gamma import AbcTriple, enumerate_triples


def test_power_point_examples():
    pp = build_power_point(AbcTriple.make(32, -5, -27), 5)
    assert (pp.u, pp.v, pp.w, pp.x, pp.y, pp.z) == (1, -5, -27, 2, 1, 1)
    pp = build_power_point(AbcTriple.make(1, 8, -9), 5)
    assert (pp.u, pp.v, pp.w, pp.x, pp.y, pp.z) == (1, 8, -9, 1, 1, 1)
    pp = build_power_point(AbcTriple.make(1, 8, -9), 2)
    assert (pp.u, pp.v, pp.w, pp.x, pp.y, pp.z) == (1, 2, -1, 1, 2, 3)
    with pytest.raises(UsageError):
        build_power_point(AbcTriple.make(1, 8, -9), 1)


def test_chain_report_example():
    r = power_chain_report(build_power_point(AbcTriple.make(32, -5, -27), 5))
    assert r.chain1_ok and r.chain2_ok
    assert r.eps_emp == pytest.approx((math.log(2) - math.log(27)) / math.log(32))
    assert r.target_exponent == 24


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_power_points_small_sweep(m):
    for t in enumerate_triples(120):
        pp = build_power_point(t, m)
        assert pp.satisfies_equation() and pp.reconstructs()
        assert all(is_power_free(u, m) for u in (pp.u, pp.v, pp.w))
        r = power_chain_report(pp)
        assert r.chain1_ok and r.chain2_ok


def test_pell_d5_sequence():
    sols = pell_solve(5, 5)
    assert [(s.x, s.y, s.rhs) for s in sols] == [(1, 1, -4), (3, 1, 4), (4, 2, -4), (7, 3, 4), (11, 5, -4)]


def test_pell_known_fundamentals():
    assert (pell_fundamental(2).x, pell_fundamental(2).y) == (2, 2)
    assert [(s.x, s.y) for s in pell_solve(2, 2)] == [(2, 2), (6, 4)]
    f61 = pell_fundamental(61)
    assert (f61.x, f61.y, f61.rhs) == (39, 5, -4)


@given(st.integers(min_value=2, max_value=300).filter(lambda d: math.isqrt(d) ** 2 != d))
def test_pell_cf_matches_search(d):
    cf = pell_fundamental(d)
    if cf.y <= 10**5:
        assert cf == pell_fundamental_search(d, 10**5)


@pytest.mark.parametrize("d", [3, 13, 46, 94])
def test_pell_sequence_is_increasing_and_exact(d):
    sols = pell_solve(d, 8)
    assert all(s.x * s.x - d * s.y * s.y == s.rhs for s in sols)
    assert all(a.x < b.x for a, b in zip(sols, sols[1:]))


def test_pell_domain():
    for d in (1, 4, 49):
        with pytest.raises(DomainError):
            pell_fundamental(d)
    with pytest.raises(UsageError):
        pell_solve(5, 0)


def test_square_stats():
    st5 = square_free_stats(pell_solve(5, 5))
    row = [r for r in st5.rows if r.solution.x == 4][0]
    assert (row.s_x, row.ratio) == (2, pytest.approx(0.5))
    assert st5.max_ratio == pytest.approx(0.5)
    with pytest.raises(UsageError):
        square_free_stats([])
