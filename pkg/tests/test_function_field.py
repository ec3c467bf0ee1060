import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from abclab.errors import DomainError, UsageError
from abclab.function_field import (
    TORIC_D,
    DivisorOnP1,
    PlaceSetS,
    Poly,
    RatMap,
    deg_outside_S,
    deg_S,
    divisor_of,
    format_coeffs,
    mason_stothers_check,
    ord_sum,
    parse_coeffs,
    poly_gcd,
    poly_radical,
    pullback_divisor,
    random_coprime_triple,
    random_poly,
    squarefree_decomposition,
    truncated_degree_outside_S,
    verify_442_toric,
)

t = Poly.t()
x = sympy.Symbol("x")


def to_sympy(p: Poly):
    return sympy.Poly(list(reversed(p.c)) or [0], x, domain="QQ")


coeff_lists = st.lists(st.fractions(max_denominator=5).map(lambda q: q.limit_denominator(5)), min_size=1, max_size=8)


@given(coeff_lists, coeff_lists)
def test_arithmetic_against_sympy(a, b):
    A, B = Poly(a), Poly(b)
    assert to_sympy(A * B) == to_sympy(A) * to_sympy(B)
    assert to_sympy(A + B) == to_sympy(A) + to_sympy(B)
    if B:
        q, r = divmod(A, B)
        sq, sr = sympy.div(to_sympy(A), to_sympy(B))
        assert (to_sympy(q), to_sympy(r)) == (sq, sr)
        g = poly_gcd(A, B)
        assert to_sympy(g) == sympy.gcd(to_sympy(A), to_sympy(B)).monic()


def test_parse_and_format():
    assert parse_coeffs("−1,0,1") == t**2 - 1
    assert parse_coeffs("(1/2, 0, 3)") == Poly([Fraction(1, 2), 0, 3])
    assert format_coeffs(t**2 - 1) == "-1,0,1"
    with pytest.raises(UsageError):
        parse_coeffs("1,x")
    with pytest.raises(UsageError):
        parse_coeffs("")


def test_radical_examples():
    assert poly_radical(t**2 * (t - 1)) == t * (t - 1)
    assert poly_radical(t**2) == t
    assert poly_radical((t**2 - 1) ** 3) == t**2 - 1
    with pytest.raises(DomainError):
        poly_radical(Poly())


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(1, 4)), min_size=1, max_size=4),
       st.lists(st.tuples(st.integers(1, 5), st.integers(1, 3)), max_size=2))
def test_radical_degree_counts_distinct_roots(lin, quad):
    # linear factors (t - r)^k and irreducible quadratics (t^2 + s)^k
    f = Poly([3])
    for r, k in lin:
        f = f * (t - r) ** k
    for s, k in quad:
        f = f * (t**2 + s) ** k
    distinct = len({r for r, _ in lin}) + 2 * len({s for s, _ in quad})
    assert poly_radical(f).deg == distinct
    back = Poly([f.lc])
    for P, i in squarefree_decomposition(f):
        back = back * P**i
    assert back == f


def test_mason_stothers_examples():
    r = mason_stothers_check(t**2, 1 - t**2, Poly([-1]))
    assert (r.ok, r.maxdeg, r.degrad) == (True, 2, 3)
    for n in (1, 5, 17):
        r = mason_stothers_check(t**n, 1 - t**n, Poly([-1]))
        assert (r.ok, r.maxdeg, r.degrad) == (True, n, n + 1)


def test_mason_stothers_preconditions():
    with pytest.raises(DomainError, match="not zero"):
        mason_stothers_check(t, t, t)
    with pytest.raises(DomainError, match="common factor"):
        mason_stothers_check(t, t * (t - 1), -(t * t))
    with pytest.raises(DomainError, match="constant"):
        mason_stothers_check(Poly([1]), Poly([1]), Poly([-2]))


def test_mason_stothers_random():
    rng = random.Random(3)
    for _ in range(100):
        r = mason_stothers_check(*random_coprime_triple(rng, 8))
        assert r.ok


def test_degrad_equals_radical_of_product():
    rng = random.Random(9)
    for _ in range(40):
        a, b, c = random_coprime_triple(rng, 6)
        assert mason_stothers_check(a, b, c).degrad == poly_radical(a * b * c).deg


def test_deg_S_examples():
    D = DivisorOnP1.points([(0, 2), (None, 1)])
    assert deg_S(D, PlaceSetS.from_points([0])) == 2
    assert deg_S(DivisorOnP1.make([(t**2 - 2, 1)]), PlaceSetS(t**2 - 2)) == 2
    assert deg_S(D, PlaceSetS()) == 0
    with pytest.raises(DomainError):
        PlaceSetS(t**2)


def test_divisor_refinement():
    D = DivisorOnP1.make([(t**2 - 1, 1), (t - 1, 2)])
    assert D.degree == 4
    assert [(format_coeffs(q), n) for q, n in D.finite_part] == [("1,1", 1), ("-1,1", 3)]


def test_pullback_examples():
    assert pullback_divisor(RatMap.make(t**2), TORIC_D) == DivisorOnP1.points([(0, 2), (None, 2)])
    f = RatMap.make(t**2 - 1, t)
    assert pullback_divisor(f, TORIC_D) == DivisorOnP1.points([(1, 1), (-1, 1), (0, 1), (None, 1)])
    g = RatMap.make(t, t - 1)
    assert pullback_divisor(g, DivisorOnP1.points([(None, 1)])) == DivisorOnP1.points([(1, 1)])
    with pytest.raises(DomainError):
        pullback_divisor(RatMap.make(Poly([3])), TORIC_D)


def test_truncated_examples():
    f2 = RatMap.make(t**2)
    g = RatMap.make(t**2 - 1, t)
    assert truncated_degree_outside_S(f2, TORIC_D, PlaceSetS.from_points([0, None])) == 0
    assert truncated_degree_outside_S(g, TORIC_D, PlaceSetS.from_points([None])) == 3
    assert truncated_degree_outside_S(f2, TORIC_D, PlaceSetS()) == 2


def test_toric_examples():
    r = verify_442_toric(RatMap.make(t**2), PlaceSetS.from_points([0, None]))
    assert (r.ok, r.lhs, r.rhs) == (True, 0, 0)
    r = verify_442_toric(RatMap.make(t**2 - 1, t), PlaceSetS())
    assert (r.ok, r.lhs, r.rhs) == (True, -4, 0)


def _random_map(rng, maxdeg):
    while True:
        f = RatMap.make(random_poly(rng, maxdeg), random_poly(rng, maxdeg))
        if f.numerator and not f.is_constant():
            return f


def _random_S(rng):
    pts = rng.sample([-3, -2, -1, 0, 1, 2, 3, Fraction(1, 2)], rng.randint(0, 5))
    fin = Poly.from_roots(pts)
    if rng.random() < 0.4:
        fin = fin * (t**2 - 2)
    return PlaceSetS(fin, rng.random() < 0.5)


def test_random_pullbacks_and_toric():
    rng = random.Random(11)
    for _ in range(150):
        f = _random_map(rng, 6)
        S = _random_S(rng)
        E = pullback_divisor(f, TORIC_D)
        assert E.degree == f.degree * TORIC_D.degree
        assert deg_S(E, S) + deg_outside_S(E, S) == E.degree
        r = verify_442_toric(f, S)
        assert r.ok and r.truncated_ok


def test_product_formula_analogue():
    rng = random.Random(5)
    for _ in range(100):
        f = _random_map(rng, 6)
        assert ord_sum(f) == 0
    assert divisor_of(RatMap.make(t**2 - 1, t)) == DivisorOnP1.make([(t**2 - 1, 1), (t, -1)], -1)
