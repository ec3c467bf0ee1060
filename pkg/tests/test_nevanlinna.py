import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from abclab.errors import DomainError, NumericError
from abclab.nevanlinna import (
    INF,
    RatFuncC,
    characteristic_T,
    check_residuals,
    counting_N,
    geometric_radii,
    jensen_residual,
    log_derivative_proximity,
    nev_table,
    proximity_m,
    ramification_counting,
    roots,
    safe_radius,
)

Z = RatFuncC([0, 1])
Z2 = RatFuncC([0, 0, 1])
Z2P1 = RatFuncC([1, 0, 1])
G = RatFuncC([-1, 0, 1], [0, 1])
CUBIC = RatFuncC([1, -2, 0, 1], [3, 1])


def _max_mismatch(got, want):
    """Greedy nearest matching distance between two equal-size multisets."""
    want = list(want)
    worst = 0.0
    for z in got:
        k = min(range(len(want)), key=lambda i: abs(want[i] - z))
        worst = max(worst, abs(want.pop(k) - z))
    return worst


def test_roots_examples():
    rs = roots([-1, 0, 1])
    assert _max_mismatch(rs.expanded(), [-1, 1]) <= 1e-14
    rs = roots([0, 0, 1])
    assert rs.locations.tolist() == [0j] and rs.multiplicities.tolist() == [2]
    rs = roots([1, -2, 0, 1])
    assert _max_mismatch(rs.expanded(), np.roots([1, 0, -2, 1])) <= 1e-10


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=1, max_size=10))
def test_roots_match_companion_oracle(rts):
    # separate the sample points so that the oracle itself is well conditioned
    rts = [complex(round(z.real, 1), round(z.imag, 1)) for z in rts]
    if len(set(rts)) < len(rts) or any(abs(a - b) < 0.2 for i, a in enumerate(rts) for b in rts[i + 1:]):
        return
    c = np.polynomial.polynomial.polyfromroots(rts)
    rs = roots(c)
    assert rs.degree == len(rts)
    assert _max_mismatch(rs.expanded(), np.roots(c[::-1])) <= 1e-8


def test_roots_multiplicities():
    c = np.polynomial.polynomial.polyfromroots([1, 1, 1, 2, 2, -3j])
    rs = roots(c)
    got = sorted(zip(np.round(rs.locations, 8).tolist(), rs.multiplicities.tolist()), key=lambda p: (p[0].real, p[0].imag))
    assert [m for _, m in got] == [1, 3, 2]
    assert rs.degree == 6


def test_roots_errors():
    with pytest.raises(DomainError):
        roots([3])
    with pytest.raises(NumericError) as exc:
        roots([1, -2, 0, 1], tol=0.0, maxiter=1)
    assert exc.value.best_residual is not None


def test_counting_examples():
    assert counting_N(Z, 0, math.e) == pytest.approx(1.0)
    f = RatFuncC([-1, 0, 1])
    assert counting_N(f, 0, 2) == pytest.approx(2 * math.log(2))
    assert counting_N(f, 0, 2, truncate=True) == pytest.approx(2 * math.log(2))
    assert counting_N(Z2, 0, math.e, truncate=True) == pytest.approx(1.0)
    assert counting_N(Z2, 0, math.e) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        counting_N(RatFuncC([2]), 2, 1.0)


def test_proximity_examples():
    assert proximity_m(Z, INF, 10) == pytest.approx(math.log(10), abs=1e-9)
    assert proximity_m(Z, 0, 10) == 0
    m = proximity_m(G, INF, 100)
    assert m == pytest.approx(math.log(100), abs=1e-3)
    assert m == pytest.approx(characteristic_T(G, 100) - counting_N(G, INF, 100), abs=1e-12)


def test_characteristic_examples():
    assert characteristic_T(Z, math.e**2) == pytest.approx(2.0)
    for f, d in ((Z2, 2), (G, 2), (CUBIC, 3)):
        tab = nev_table(f, geometric_radii(1e2, 1e4, 7))
        assert tab.slope() == pytest.approx(d, rel=0.02)


def test_log_derivative_examples():
    assert log_derivative_proximity(Z, 10) == 0
    assert log_derivative_proximity(Z2, 10) == 0
    assert log_derivative_proximity(G, 100) <= 0.05


def test_ramification_examples():
    assert ramification_counting(Z, 10) == 0
    assert ramification_counting(Z2P1, 10) == pytest.approx(math.log(10))
    assert ramification_counting(G, 100) == pytest.approx(2 * math.log(100), abs=1e-9)
    with pytest.raises(DomainError):
        ramification_counting(RatFuncC([5]), 10)


@pytest.mark.parametrize("f", [Z, Z2, Z2P1, G, CUBIC, RatFuncC([2, 1, 0, 0, 1], [1, 0, 5])])
@pytest.mark.parametrize("r", [0.5, 2.0, 10.0, 100.0])
def test_jensen(f, r):
    assert jensen_residual(f, r, 4096) <= 1e-6


def test_radius_nudged_off_roots():
    r = safe_radius(Z2P1, 1.0, 1024)
    assert r == pytest.approx(math.exp(math.pi / 1024))
    assert safe_radius(Z2P1, 2.0, 1024) == 2.0
    assert math.isfinite(proximity_m(Z2P1, 0, 1.0))


def test_check_residuals_battery():
    radii = geometric_radii(1e2, 1e4, 7)
    for f in (Z, Z2, Z2P1, G, CUBIC):
        rep = check_residuals(f, radii)
        assert rep.ok, rep.verdicts
        assert np.all(rep.table.N1_D <= rep.table.N_0 + rep.table.N_inf + 1e-12)
    rep = check_residuals(Z, radii)
    assert rep.C_needed == 0
    # f - a = z - a has Laurent lead -a at 0, so T(r, a) - T(r) = -ln+|a| exactly for r > |a|
    assert rep.fmt_spread[1j] < 1e-9
    assert rep.fmt_spread[2.5] == pytest.approx(math.log(2.5))
    rep = check_residuals(G, radii)
    # zeros at +-1 and the pole at 0 are the finite points of f*D; f'/f vanishes at +-i
    assert rep.table.N1_D == pytest.approx(3 * np.log(rep.table.r))
    assert rep.table.N_ram == pytest.approx(2 * np.log(rep.table.r))
    rep = check_residuals(Z2, radii)
    assert rep.table.N1_D == pytest.approx(np.log(rep.table.r)) and np.all(rep.table.N_ram == 0)


def test_check_residuals_rejects_constants():
    with pytest.raises(DomainError):
        check_residuals(RatFuncC([4]), [10.0])
