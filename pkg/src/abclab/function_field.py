"""Exact polynomial arithmetic over Q and divisors on the projective line.

Closed points of P^1 over the algebraic closure are grouped into squarefree
monic Q-polynomials (their minimal polynomials, or products of them) plus
the point at infinity.  Every degree count below weights a factor by its
degree, which equals the number of geometric points it stands for.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import DomainError, UsageError

Number = Union[int, Fraction]


class Poly:
    """Dense polynomial in t with rational coefficients, constant term first.

    The zero polynomial has no coefficients, so ``deg`` is -1 for it.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def const(cls, a: Number) -> "Poly":
        return cls([a])

    @classmethod
    def t(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable[Number]) -> "Poly":
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def deg(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> Fraction:
        if not self.c:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.c[-1]

    def is_zero(self) -> bool:
        return not self.c

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        return f"Poly({format_coeffs(self)!r})"

    def __neg__(self) -> "Poly":
        return Poly([-x for x in self.c])

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        n = max(len(self.c), len(other.c))
        a = self.c + (Fraction(0),) * (n - len(self.c))
        b = other.c + (Fraction(0),) * (n - len(other.c))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        other = _as_poly(other)
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise DomainError("negative power of a polynomial")
        out, base = Poly([1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        other = _as_poly(other)
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return Poly(), self
        q = [Fraction(0)] * (dq + 1)
        inv = 1 / other.c[-1]
        for k in range(dq, -1, -1):
            coef = r[k + len(other.c) - 1] * inv
            q[k] = coef
            if coef:
                for j, y in enumerate(other.c):
                    r[k + j] -= coef * y
        return Poly(q), Poly(r[: len(other.c) - 1])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise DomainError(f"{other!r} does not divide {self!r}")
        return q

    def monic(self) -> "Poly":
        if not self.c:
            return self
        inv = 1 / self.c[-1]
        return Poly([x * inv for x in self.c])

    def derivative(self) -> "Poly":
        return Poly([i * x for i, x in enumerate(self.c)][1:])

    def __call__(self, x):
        acc = 0
        for coef in reversed(self.c):
            acc = acc * x + coef
        return acc

    def ord0(self) -> int:
        """Order of vanishing at t = 0."""
        if not self.c:
            raise DomainError("ord of the zero polynomial")
        k = 0
        while self.c[k] == 0:
            k += 1
        return k


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly([x])
    raise TypeError(f"cannot treat {type(x).__name__} as a polynomial")


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd (zero only when both inputs are zero)."""
    f, g = f.monic(), g.monic()
    while g:
        f, g = g, (f % g).monic()
    return f


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: f = lc * prod P_i^i with P_i squarefree, monic and pairwise coprime.

    Only factors of positive degree are returned.
    """
    if not f:
        raise DomainError("squarefree decomposition of the zero polynomial")
    out = []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exact_div(a).monic() if a else f.monic()
    c = df.exact_div(a) * (1 / f.lc) if a else df
    d = c - b.derivative()
    i = 1
    while b.deg > 0:
        g = poly_gcd(b, d)
        if g.deg > 0:
            out.append((g, i))
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
        i += 1
    return out


def poly_radical(f: Poly) -> Poly:
    """Squarefree part f / gcd(f, f'), made monic."""
    if not f:
        raise DomainError("radical of the zero polynomial")
    if f.is_const():
        return Poly([1])
    return f.exact_div(poly_gcd(f, f.derivative())).monic()


def parse_coeffs(text: str) -> Poly:
    """Parse "c0,c1,...,cd" (rationals like 3/4 allowed, unicode minus accepted)."""
    text = text.strip().replace("−", "-")
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    if not text:
        raise UsageError("empty coefficient list")
    try:
        return Poly([Fraction(tok.strip()) for tok in text.split(",")])
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad coefficient list {text!r}: {exc}") from None


def format_coeffs(p: Poly) -> str:
    return ",".join(str(x) for x in p.c) if p.c else "0"


def random_poly(rng: random.Random, maxdeg: int, coeff: int = 5) -> Poly:
    deg = rng.randint(0, maxdeg)
    c = [rng.randint(-coeff, coeff) for _ in range(deg)] + [rng.choice([x for x in range(-coeff, coeff + 1) if x])]
    return Poly(c)


def random_coprime_triple(rng: random.Random, maxdeg: int, coeff: int = 5) -> tuple[Poly, Poly, Poly]:
    """(f, g, -f-g) with f, g coprime and the triple not all constant."""
    while True:
        f, g = random_poly(rng, maxdeg, coeff), random_poly(rng, maxdeg, coeff)
        h = -(f + g)
        if not h or (f.is_const() and g.is_const() and h.is_const()):
            continue
        if poly_gcd(f, g).deg == 0:
            return f, g, h


@dataclass(frozen=True)
class MasonStothers:
    ok: bool
    maxdeg: int
    degrad: int


def mason_stothers_check(a: Poly, b: Poly, c: Poly) -> MasonStothers:
    """max(deg a, deg b, deg c) <= deg rad(abc) - 1 for a coprime, non-constant a + b + c = 0."""
    if a + b + c:
        raise DomainError("a + b + c is not zero")
    if not (a and b and c):
        raise DomainError("one of a, b, c is zero")
    if a.is_const() and b.is_const() and c.is_const():
        raise DomainError("all of a, b, c are constant")
    for name, (x, y) in (("a,b", (a, b)), ("b,c", (b, c)), ("a,c", (a, c))):
        if poly_gcd(x, y).deg > 0:
            raise DomainError(f"{name} share a common factor")
    maxdeg = max(a.deg, b.deg, c.deg)
    # pairwise coprime, so rad(abc) = rad(a) rad(b) rad(c)
    degrad = poly_radical(a).deg + poly_radical(b).deg + poly_radical(c).deg
    return MasonStothers(maxdeg <= degrad - 1, maxdeg, degrad)


def _refine(terms: Sequence[tuple[Poly, int]]) -> list[tuple[Poly, int]]:
    """Split factors until they are pairwise coprime, adding multiplicities on overlaps."""
    work = [(q.monic(), n) for q, n in terms if q.deg > 0 and n]
    changed = True
    while changed:
        changed = False
        for i in range(len(work)):
            for j in range(i + 1, len(work)):
                g = poly_gcd(work[i][0], work[j][0])
                if g.deg > 0:
                    (qi, ni), (qj, nj) = work[i], work[j]
                    rest = [w for k, w in enumerate(work) if k not in (i, j)]
                    pieces = [(qi.exact_div(g), ni), (qj.exact_div(g), nj), (g, ni + nj)]
                    work = rest + [(q, n) for q, n in pieces if q.deg > 0 and n]
                    changed = True
                    break
            if changed:
                break
    # canonical form: one (product of factors, multiplicity) entry per multiplicity
    merged: dict[int, Poly] = {}
    for q, n in work:
        merged[n] = merged.get(n, Poly([1])) * q
    return sorted(((q, n) for n, q in merged.items()), key=lambda qn: qn[1])


@dataclass(frozen=True)
class DivisorOnP1:
    """sum n_q [zeros of q] + mult_infinity [inf], the q squarefree, monic and pairwise coprime.

    ``make`` keeps one factor per multiplicity, so equal divisors compare equal.
    """

    finite_part: tuple[tuple[Poly, int], ...] = ()
    mult_infinity: int = 0

    @classmethod
    def make(cls, terms: Iterable[tuple[Poly, int]] = (), mult_infinity: int = 0) -> "DivisorOnP1":
        for q, _ in terms:
            if q.deg > 0 and poly_radical(q).deg != q.deg:
                raise DomainError(f"{q!r} is not squarefree")
        return cls(tuple(_refine(list(terms))), int(mult_infinity))

    @classmethod
    def points(cls, pts: Iterable[tuple[Optional[Number], int]]) -> "DivisorOnP1":
        """From (rational point or None for infinity, multiplicity) pairs."""
        terms, inf = [], 0
        for p, n in pts:
            if p is None:
                inf += n
            else:
                terms.append((Poly([-Fraction(p), 1]), n))
        return cls.make(terms, inf)

    def __add__(self, other: "DivisorOnP1") -> "DivisorOnP1":
        return DivisorOnP1.make(self.finite_part + other.finite_part, self.mult_infinity + other.mult_infinity)

    def scale(self, k: int) -> "DivisorOnP1":
        return DivisorOnP1.make([(q, n * k) for q, n in self.finite_part], self.mult_infinity * k)

    @property
    def degree(self) -> int:
        return sum(n * q.deg for q, n in self.finite_part) + self.mult_infinity

    def support(self) -> "PlaceSetS":
        fin = Poly([1])
        for q, _ in self.finite_part:
            fin = fin * q
        return PlaceSetS(fin, self.mult_infinity != 0)


@dataclass(frozen=True)
class PlaceSetS:
    """A finite set of points: the roots of a squarefree polynomial, and optionally infinity."""

    finite_part: Poly = Poly([1])
    include_infinity: bool = False

    def __post_init__(self):
        if not self.finite_part:
            raise DomainError("place set polynomial must be nonzero")
        object.__setattr__(self, "finite_part", self.finite_part.monic())
        if poly_radical(self.finite_part).deg != self.finite_part.deg:
            raise DomainError("place set polynomial must be squarefree")

    @classmethod
    def from_points(cls, pts: Iterable[Optional[Number]]) -> "PlaceSetS":
        pts = list(pts)
        fin = Poly.from_roots(sorted({Fraction(p) for p in pts if p is not None}))
        return cls(fin, any(p is None for p in pts))

    @property
    def size(self) -> int:
        return self.finite_part.deg + int(self.include_infinity)


def deg_S(D: DivisorOnP1, S: PlaceSetS) -> int:
    total = sum(n * poly_gcd(q, S.finite_part).deg for q, n in D.finite_part)
    if S.include_infinity:
        total += D.mult_infinity
    return total


def deg_outside_S(D: DivisorOnP1, S: PlaceSetS) -> int:
    total = sum(n * (q.deg - poly_gcd(q, S.finite_part).deg) for q, n in D.finite_part)
    if not S.include_infinity:
        total += D.mult_infinity
    return total


@dataclass(frozen=True)
class RatMap:
    """t -> num(t)/den(t), reduced with monic denominator."""

    numerator: Poly
    denominator: Poly

    @classmethod
    def make(cls, num: Poly, den: Poly = Poly([1])) -> "RatMap":
        if not den:
            raise DomainError("zero denominator")
        if not num:
            return cls(Poly(), Poly([1]))
        g = poly_gcd(num, den)
        num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        return cls(num * (1 / lc), den * (1 / lc))

    @property
    def degree(self) -> int:
        return max(self.numerator.deg, self.denominator.deg)

    def is_constant(self) -> bool:
        return self.numerator.is_const() and self.denominator.is_const()


def _from_poly(H: Poly, mult: int) -> list[tuple[Poly, int]]:
    return [(P, i * mult) for P, i in squarefree_decomposition(H)]


def pullback_divisor(f: RatMap, D: DivisorOnP1) -> DivisorOnP1:
    """f*D on the source line, with ramification multiplicities."""
    if f.is_constant():
        raise DomainError("pullback along a constant map (image lies in a single point)")
    num, den, d = f.numerator, f.denominator, f.degree
    terms: list[tuple[Poly, int]] = []
    inf = 0
    for q, n in D.finite_part:
        k = q.deg
        # den^k * q(num/den): its zeros are the finite preimages of the roots of q
        H = Poly()
        for i, qi in enumerate(q.c):
            if qi:
                H = H + qi * num**i * den ** (k - i)
        if not H:
            raise DomainError("image of the map lies in the support of D")
        terms += _from_poly(H, n)
        inf += n * (k * d - H.deg)
    if D.mult_infinity:
        n = D.mult_infinity
        terms += _from_poly(den, n)
        inf += n * (d - den.deg)
    return DivisorOnP1.make(terms, inf)


def truncated_degree_outside_S(f: RatMap, D: DivisorOnP1, S: PlaceSetS) -> int:
    """Number of geometric points of Supp(f*D) lying outside S."""
    E = pullback_divisor(f, D)
    count = sum(q.deg - poly_gcd(q, S.finite_part).deg for q, _ in E.finite_part)
    if E.mult_infinity and not S.include_infinity:
        count += 1
    return count


TORIC_D = DivisorOnP1.points([(0, 1), (None, 1)])


@dataclass(frozen=True)
class ToricCheck:
    """-2 deg f + deg_S f*D <= max(0, #S - 2), and the truncated form, for D = [0] + [inf]."""

    ok: bool
    lhs: int
    rhs: int
    truncated: int
    truncated_ok: bool


def verify_442_toric(f: RatMap, S: PlaceSetS) -> ToricCheck:
    E = pullback_divisor(f, TORIC_D)
    lhs = -2 * f.degree + deg_S(E, S)
    rhs = max(0, S.size - 2)
    trunc = truncated_degree_outside_S(f, TORIC_D, S)
    # K + D is trivial on the line for D = [0] + [inf], so the pulled-back degree is 0
    return ToricCheck(lhs <= rhs, lhs, rhs, trunc, 0 <= trunc + rhs)


def divisor_of(f: RatMap) -> DivisorOnP1:
    """Zeros minus poles of a nonzero rational function, including the place at infinity."""
    if not f.numerator:
        raise DomainError("divisor of the zero function")
    num, den = f.numerator, f.denominator
    terms = [(P, i) for P, i in squarefree_decomposition(num)] if num.deg > 0 else []
    terms += [(P, -i) for P, i in squarefree_decomposition(den)] if den.deg > 0 else []
    return DivisorOnP1.make(terms, den.deg - num.deg)


def ord_sum(f: RatMap) -> int:
    """Sum of ord_v(f) over all places weighted by degree; zero for every f != 0."""
    return divisor_of(f).degree
