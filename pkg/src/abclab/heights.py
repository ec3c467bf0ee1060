"""Heights, Weil functions, proximity and counting over Q with S = {infinity}.

Places are normalized so that ``||x||_inf = |x|`` and ``||x||_p = p**(-ord_p x)``,
which makes the product formula hold with no multiplicities.  Weil functions
for a coordinate divisor use the max-normalized form

    lambda_{D,v}(P) = sum_terms mult * (log max_j ||x_j||_v - log ||x_term||_v),

so lambda, m and N are all nonnegative and ``m + N`` equals the height
attached to D with no additive constant.  Every quantity has a ``*_ledger``
twin returning an exact :class:`~abclab.arith.LogSum`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .arith import LogSum, SpfTable, factorize, ord_p
from .errors import DomainError, SupportError


@dataclass(frozen=True)
class Place:
    """The archimedean place (``p is None``) or the p-adic place of Q."""

    p: Optional[int] = None

    @property
    def is_infinite(self) -> bool:
        return self.p is None

    @classmethod
    def finite(cls, p: int) -> "Place":
        if p < 2 or not factorize(p).exponents == {p: 1}:
            raise DomainError(f"{p} is not a prime")
        return cls(p)

    def __str__(self):
        return "inf" if self.p is None else str(self.p)


INFINITY = Place()


@dataclass(frozen=True)
class ProjPoint:
    """Primitive integer coordinates, first nonzero coordinate positive."""

    coords: tuple[int, ...]

    def __post_init__(self):
        c = self.coords
        if not any(c):
            raise DomainError("all-zero coordinates do not define a projective point")
        if math.gcd(*c) != 1:
            raise DomainError(f"coordinates {c} are not primitive")
        if next(x for x in c if x) < 0:
            raise DomainError(f"coordinates {c} are not sign-normalized")

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def max_abs(self) -> int:
        return max(abs(x) for x in self.coords)

    def __str__(self):
        return "[" + ":".join(map(str, self.coords)) + "]"


@dataclass(frozen=True)
class MultiProjPoint:
    blocks: tuple[ProjPoint, ...]

    def __post_init__(self):
        if not self.blocks:
            raise DomainError("a multiprojective point needs at least one block")

    def __len__(self):
        return len(self.blocks)

    def __getitem__(self, i) -> ProjPoint:
        return self.blocks[i]

    def __str__(self):
        return "(" + ",".join(map(str, self.blocks)) + ")"


PointLike = Union[ProjPoint, MultiProjPoint]


@dataclass(frozen=True)
class CoordinateDivisor:
    """Divisor cut out by a product of coordinates: ``(block, coord) -> multiplicity``."""

    terms: Mapping[tuple[int, int], int]

    def __post_init__(self):
        for key, mult in self.terms.items():
            if mult < 1:
                raise DomainError(f"multiplicity of {key} must be >= 1")

    @classmethod
    def of(cls, *keys: tuple[int, int]) -> "CoordinateDivisor":
        terms: dict[tuple[int, int], int] = {}
        for k in keys:
            terms[k] = terms.get(k, 0) + 1
        return cls(terms)

    @classmethod
    def single_block(cls, *coords: int) -> "CoordinateDivisor":
        """Divisor on a single projective space (block 0)."""
        return cls.of(*((0, j) for j in coords))

    def __add__(self, other: "CoordinateDivisor") -> "CoordinateDivisor":
        out = dict(self.terms)
        for k, m in other.terms.items():
            out[k] = out.get(k, 0) + m
        return CoordinateDivisor(out)


def normalize_point(coords: Sequence[int | Fraction | str]) -> ProjPoint:
    """Clear denominators, divide by the gcd, make the first nonzero entry positive."""
    q = [Fraction(c) for c in coords]
    if not any(q):
        raise DomainError("all-zero coordinates do not define a projective point")
    den = math.lcm(*(x.denominator for x in q))
    ints = [int(x * den) for x in q]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return ProjPoint(tuple(ints))


def multi_point(*blocks: Sequence[int | Fraction]) -> MultiProjPoint:
    return MultiProjPoint(tuple(normalize_point(b) for b in blocks))


def _as_multi(P: PointLike) -> MultiProjPoint:
    return MultiProjPoint((P,)) if isinstance(P, ProjPoint) else P


def abs_value(x: int | Fraction, v: Place) -> Fraction:
    """The almost-absolute value ``||x||_v`` (exact, as a rational)."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("||0||_v is not defined here")
    if v.is_infinite:
        return abs(x)
    k = ord_p(x.numerator, v.p) - ord_p(x.denominator, v.p)
    return Fraction(1, v.p**k) if k >= 0 else Fraction(v.p ** (-k))


def product_formula_ledger(x: int | Fraction, table: Optional[SpfTable] = None) -> LogSum:
    """sum over all places of log ||x||_v as an exact ledger (always empty)."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("product formula needs x != 0")
    total = LogSum.log(x.numerator, table) - LogSum.log(x.denominator, table)
    primes = set(factorize(x.numerator, table).exponents) | set(factorize(x.denominator, table).exponents)
    for p in primes:
        k = ord_p(x.numerator, p) - ord_p(x.denominator, p)
        total = total + LogSum({p: -k})
    return total


def product_formula_residual(x: int | Fraction, table: Optional[SpfTable] = None) -> float:
    return float(product_formula_ledger(x, table))


def height_ledger(P: PointLike, table: Optional[SpfTable] = None) -> LogSum:
    out = LogSum()
    for block in _as_multi(P).blocks:
        out = out + LogSum.log(block.max_abs(), table)
    return out


def height(P: PointLike) -> float:
    """Sum over blocks of log max |x_j| (primitive coordinates)."""
    return math.fsum(math.log(b.max_abs()) for b in _as_multi(P).blocks)


def _terms_on(P: MultiProjPoint, D: CoordinateDivisor) -> Iterable[tuple[ProjPoint, int, int]]:
    for (bi, ci), mult in sorted(D.terms.items()):
        if not (0 <= bi < len(P.blocks) and 0 <= ci < len(P.blocks[bi])):
            raise DomainError(f"divisor term {(bi, ci)} out of range for {P}")
        block = P.blocks[bi]
        if block[ci] == 0:
            raise SupportError(f"{P} lies on the support of the divisor (coordinate {(bi, ci)} vanishes)")
        yield block, block[ci], mult


def weil_lambda_ledger(P: PointLike, D: CoordinateDivisor, v: Place, table: Optional[SpfTable] = None) -> LogSum:
    P = _as_multi(P)
    out = LogSum()
    for block, x, mult in _terms_on(P, D):
        if v.is_infinite:
            out = out + (LogSum.log(block.max_abs(), table) - LogSum.log(x, table)) * mult
        else:
            low = min(ord_p(c, v.p) for c in block if c)
            out = out + LogSum({v.p: mult * (ord_p(x, v.p) - low)})
    return out


def weil_lambda(P: PointLike, D: CoordinateDivisor, v: Place) -> float:
    return float(weil_lambda_ledger(P, D, v))


def _bad_primes(P: MultiProjPoint, D: CoordinateDivisor, table) -> set[int]:
    primes: set[int] = set()
    for _, x, _ in _terms_on(P, D):
        primes |= set(factorize(x, table).exponents)
    return primes


def proximity_ledger(P: PointLike, D: CoordinateDivisor, table: Optional[SpfTable] = None) -> LogSum:
    return weil_lambda_ledger(P, D, INFINITY, table)


def counting_ledger(P: PointLike, D: CoordinateDivisor, table: Optional[SpfTable] = None) -> LogSum:
    P = _as_multi(P)
    out = LogSum()
    for p in sorted(_bad_primes(P, D, table)):
        out = out + weil_lambda_ledger(P, D, Place(p), table)
    return out


def proximity_m(P: PointLike, D: CoordinateDivisor) -> float:
    """m(D, P) = lambda_{D,inf}(P)."""
    return float(proximity_ledger(P, D))


def counting_N(P: PointLike, D: CoordinateDivisor) -> float:
    """N(D, P) = sum of lambda_{D,p}(P) over all primes p."""
    return float(counting_ledger(P, D))


def divisor_height_ledger(P: PointLike, D: CoordinateDivisor, table: Optional[SpfTable] = None) -> LogSum:
    """h_{O(D)}(P) = sum_terms mult * h(block of the term)."""
    P = _as_multi(P)
    out = LogSum()
    for block, _, mult in _terms_on(P, D):
        out = out + LogSum.log(block.max_abs(), table) * mult
    return out
