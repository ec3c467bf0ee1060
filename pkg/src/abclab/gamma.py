"""abc triples, the power decomposition a = x1 * x2^2 * ... * xn^n, and points on Gamma_n.

Gamma_n lives in (P^2)^(n+1) with block 0 = [a:b:c] and blocks 1..n = [x_i:y_i:z_i],
cut out by

    prod x_i^i + prod y_i^i + prod z_i^i = 0,   a + b + c = 0,   a prod y_i^i = b prod x_i^i.

D is the coordinate divisor x_1...x_n y_1...y_n z_1...z_n on blocks 1..n and E is
abc on block 0.  Every inequality below is decided exactly on integers; the float
slack is for reporting only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from . import heights
from .arith import Factorization, LogSum, SpfTable, factorize
from .errors import DomainError
from .heights import CoordinateDivisor, MultiProjPoint, normalize_point


@dataclass(frozen=True)
class AbcTriple:
    """Coprime a + b + c = 0 with abc != 0, stored canonically as 0 < a <= b, c = -(a+b)."""

    a: int
    b: int
    c: int
    fa: Factorization = field(repr=False, compare=False)
    fb: Factorization = field(repr=False, compare=False)
    fc: Factorization = field(repr=False, compare=False)
    original: tuple[int, int, int] = field(compare=False, default=None)

    @classmethod
    def make(cls, a: int, b: int, c: Optional[int] = None, table: Optional[SpfTable] = None) -> "AbcTriple":
        if c is None:
            c = -(a + b)
        a, b, c = int(a), int(b), int(c)
        if a + b + c != 0:
            raise DomainError(f"({a}, {b}, {c}) does not sum to zero")
        if a * b * c == 0:
            raise DomainError(f"({a}, {b}, {c}) has a zero entry")
        if math.gcd(a, b, c) != 1:
            raise DomainError(f"({a}, {b}, {c}) is not coprime")
        vals = (a, b, c)
        pos = [x for x in vals if x > 0]
        neg = [x for x in vals if x < 0]
        pair = pos if len(pos) == 2 else [-x for x in neg]
        lo, hi = sorted(pair)
        return cls(
            lo,
            hi,
            -(lo + hi),
            factorize(lo, table),
            factorize(hi, table),
            factorize(-(lo + hi), table),
            vals,
        )

    def __post_init__(self):
        if self.original is None:
            object.__setattr__(self, "original", (self.a, self.b, self.c))

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def max_abs(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c))

    def radical(self) -> int:
        return self.fa.radical() * self.fb.radical() * self.fc.radical()

    def height(self) -> float:
        """h([a:b:c]) = log max(|a|, |b|, |c|)."""
        return math.log(self.max_abs())

    def log_radical(self) -> float:
        """n(abc); the three entries are pairwise coprime, so the radicals multiply."""
        return self.fa.log_radical() + self.fb.log_radical() + self.fc.log_radical()

    def factorizations(self) -> dict[int, Factorization]:
        return {self.a: self.fa, self.b: self.fb, self.c: self.fc}

    def factorization_of(self, v: int) -> Factorization:
        """Factorization of an entry of ``original`` (possibly of opposite sign to the canonical one)."""
        for f in (self.fa, self.fb, self.fc):
            if abs(f.reconstruct()) == abs(v):
                return Factorization(1 if v > 0 else -1, f.exponents)
        raise DomainError(f"{v} is not an entry of {self}")

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


def enumerate_triples(
    bound: int,
    filter: Optional[Callable[[AbcTriple], bool]] = None,
    table: Optional[SpfTable] = None,
) -> Iterator[AbcTriple]:
    """All canonical triples with a + b <= bound, ordered by a + b and then a."""
    for s in range(2, bound + 1):
        for a in range(1, s // 2 + 1):
            if math.gcd(a, s) != 1:
                continue
            t = AbcTriple(a, s - a, -s, factorize(a, table), factorize(s - a, table), factorize(-s, table))
            if filter is None or filter(t):
                yield t


def count_triples(bound: int) -> int:
    return sum(1 for s in range(2, bound + 1) for a in range(1, s // 2 + 1) if math.gcd(a, s) == 1)


@dataclass(frozen=True)
class PowerDecomposition:
    """``parts = (x_1, ..., x_n)`` with ``x_1 * x_2**2 * ... * x_n**n == target``."""

    target: int
    parts: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.parts)

    def product(self) -> int:
        return math.prod(x**i for i, x in enumerate(self.parts, start=1))


def decompose(a: int, n: int, fact: Optional[Factorization] = None) -> PowerDecomposition:
    """Split ``a`` so that, for each p | a with e = ord_p(a), p^(e // n) sits in x_n
    and one extra p sits in x_(e mod n).  The sign goes on x_1."""
    if a == 0:
        raise DomainError("cannot decompose 0")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    f = fact if fact is not None else factorize(a)
    parts = [1] * (n + 1)
    for p, e in f.exponents.items():
        q, r = divmod(e, n)
        parts[n] *= p**q
        if r:
            parts[r] *= p
    parts[1] *= f.sign
    return PowerDecomposition(a, tuple(parts[1:]))


@dataclass(frozen=True)
class GammaPoint:
    triple: AbcTriple
    n: int
    point: MultiProjPoint

    @property
    def blocks(self):
        return self.point.blocks

    def divisor_D(self) -> CoordinateDivisor:
        return CoordinateDivisor.of(*((i, j) for i in range(1, self.n + 1) for j in range(3)))

    def __str__(self):
        return str(self.point)


def divisor_E() -> CoordinateDivisor:
    return CoordinateDivisor.single_block(0, 1, 2)


def build_gamma_point(t: AbcTriple, n: int) -> GammaPoint:
    """The point P* over P_{a,b,c}, using the triple in the order it was given."""
    a, b, c = t.original
    xs, ys, zs = (decompose(v, n, t.factorization_of(v)).parts for v in (a, b, c))
    blocks = [normalize_point((a, b, c))]
    blocks += [normalize_point((xs[i], ys[i], zs[i])) for i in range(n)]
    return GammaPoint(t, n, MultiProjPoint(tuple(blocks)))


def _block_products(P: GammaPoint | MultiProjPoint) -> tuple[int, int, int]:
    blocks = P.blocks
    X = Y = Z = 1
    for i, blk in enumerate(blocks[1:], start=1):
        X *= blk[0] ** i
        Y *= blk[1] ** i
        Z *= blk[2] ** i
    return X, Y, Z


def check_gamma_equations(P: GammaPoint | MultiProjPoint) -> bool:
    """The three defining equations of Gamma_n, in exact integer arithmetic."""
    a, b, c = P.blocks[0].coords
    X, Y, Z = _block_products(P)
    return X + Y + Z == 0 and a + b + c == 0 and a * Y == b * X


def apply_action(P: GammaPoint, u: Sequence[Fraction | int], v: Sequence[Fraction | int]) -> GammaPoint:
    """Action of (u_2..u_n, v_2..v_n) in G_m^(2n-2): block i >= 2 scales by (u_i, v_i, 1),
    block 1 by (prod u_i^-i, prod v_i^-i, 1), block 0 is fixed."""
    n = P.n
    if len(u) != n - 1 or len(v) != n - 1:
        raise DomainError(f"action needs {n - 1} scalars per side, got {len(u)} and {len(v)}")
    u = [Fraction(x) for x in u]
    v = [Fraction(x) for x in v]
    if any(x == 0 for x in u + v):
        raise DomainError("action scalars must be nonzero")
    blocks = P.blocks
    su = math.prod((u[i - 2] ** -i for i in range(2, n + 1)), start=Fraction(1))
    sv = math.prod((v[i - 2] ** -i for i in range(2, n + 1)), start=Fraction(1))
    x1, y1, z1 = blocks[1].coords
    new = [blocks[0], normalize_point((x1 * su, y1 * sv, z1))]
    for i in range(2, n + 1):
        x, y, z = blocks[i].coords
        new.append(normalize_point((x * u[i - 2], y * v[i - 2], z)))
    return GammaPoint(P.triple, n, MultiProjPoint(tuple(new)))


def zero_pattern(P: GammaPoint | MultiProjPoint) -> tuple[tuple[bool, ...], ...]:
    return tuple(tuple(x == 0 for x in blk) for blk in P.blocks)


def counting_N_D_ledger(P: GammaPoint, table: Optional[SpfTable] = None) -> LogSum:
    return heights.counting_ledger(P.point, P.divisor_D(), table)


def counting_N_E_ledger(t: AbcTriple, table: Optional[SpfTable] = None) -> LogSum:
    return heights.counting_ledger(heights.multi_point(t.original), divisor_E(), table)


def counting_N_D(P: GammaPoint) -> float:
    """N(D, P*) = log |prod x_i y_i z_i|."""
    return float(counting_N_D_ledger(P))


def counting_N_E(t: AbcTriple) -> float:
    """N(E, [a:b:c]) = log |abc|."""
    return float(counting_N_E_ledger(t))


def _lograd_ledger(t: AbcTriple) -> LogSum:
    return LogSum({p: 1 for f in (t.fa, t.fb, t.fc) for p in f.exponents})


def _xyz_orders(P: GammaPoint) -> dict[int, int]:
    out: dict[int, int] = {}
    for blk in P.blocks[1:]:
        for x in blk:
            for p, e in factorize(x).exponents.items():
                out[p] = out.get(p, 0) + e
    return out


def verify_lemma35(t: AbcTriple, n: int) -> tuple[bool, float]:
    """N(D,P*) <= n(abc) + N(E,[a:b:c])/n, checked prime by prime:
    n * ord_p(prod x_i y_i z_i) <= n + ord_p(abc) for every p | abc."""
    P = build_gamma_point(t, n)
    ords = _xyz_orders(P)
    ok = True
    for f in (t.fa, t.fb, t.fc):
        for p, e in f.exponents.items():
            if n * ords.get(p, 0) > n + e:
                ok = False
    # primes dividing some x_i but not abc would be a construction error
    if set(ords) - set(t.fa.exponents) - set(t.fb.exponents) - set(t.fc.exponents):
        ok = False
    slack = _lograd_ledger(t) + counting_N_E_ledger(t) * Fraction(1, n) - counting_N_D_ledger(P)
    return ok, float(slack)


def verify_cor36(t: AbcTriple, n: int) -> tuple[bool, float]:
    """N(D,P*) <= n(abc) + (3/n) h([a:b:c]) with zero constant, i.e.
    |prod x_i y_i z_i|^n <= rad(abc)^n * max(|a|,|b|,|c|)^3."""
    P = build_gamma_point(t, n)
    prod_xyz = abs(math.prod(x for blk in P.blocks[1:] for x in blk))
    M = t.max_abs()
    ok = prod_xyz**n <= t.radical() ** n * M**3
    slack = _lograd_ledger(t) + LogSum.log(M) * Fraction(3, n) - counting_N_D_ledger(P)
    return ok, float(slack)


def verify_lemma311(P: GammaPoint) -> tuple[bool, float]:
    """h_{O(1,...,1)}(P*) <= 4 h([a:b:c]) without constant:
    M * prod_i max(|x_i|,|y_i|,|z_i|) <= M^4."""
    M = P.blocks[0].max_abs()
    lhs = M * math.prod(blk.max_abs() for blk in P.blocks[1:])
    ok = lhs <= M**4
    slack = 4 * math.log(M) - heights.height(P.point)
    return ok, slack


def verify_eq34(P: GammaPoint) -> bool:
    """h([a:b:c]) equals the height of the image of P* under projection to block 0."""
    a, b, c = P.triple.original
    direct = normalize_point((a, b, c))
    return heights.height_ledger(P.blocks[0]) == heights.height_ledger(direct)


def quality(t: AbcTriple) -> float:
    """h([a:b:c]) / n(abc)."""
    return t.height() / t.log_radical()


def abc_margin(t: AbcTriple, eps: float) -> float:
    """n(abc) - (1 - eps) h([a:b:c]); negative means the triple beats exponent 1 - eps."""
    return t.log_radical() - (1.0 - eps) * t.height()


@dataclass(frozen=True)
class VerificationReport:
    triple: tuple[int, int, int]
    n: int
    equations_ok: bool
    reconstruction_ok: bool
    eq34_ok: bool
    lemma35_ok: bool
    lemma35_slack: float
    cor36_ok: bool
    cor36_slack: float
    lemma311_ok: bool
    lemma311_slack: float
    quality: float
    margin: float

    @property
    def all_ok(self) -> bool:
        return (
            self.equations_ok
            and self.reconstruction_ok
            and self.eq34_ok
            and self.lemma35_ok
            and self.cor36_ok
            and self.lemma311_ok
        )


def verify_triple(t: AbcTriple, n: int, eps: float = 0.0) -> VerificationReport:
    P = build_gamma_point(t, n)
    recon = all(decompose(v, n, t.factorization_of(v)).product() == v for v in t.original)
    l35, s35 = verify_lemma35(t, n)
    c36, s36 = verify_cor36(t, n)
    l311, s311 = verify_lemma311(P)
    return VerificationReport(
        triple=t.original,
        n=n,
        equations_ok=check_gamma_equations(P),
        reconstruction_ok=recon,
        eq34_ok=verify_eq34(P),
        lemma35_ok=l35,
        lemma35_slack=s35,
        cor36_ok=c36,
        cor36_slack=s36,
        lemma311_ok=l311,
        lemma311_slack=s311,
        quality=quality(t),
        margin=abc_margin(t, eps),
    )


@dataclass(frozen=True)
class Thm312Report:
    """Measurable lines of the chain h <= n(abc) + eps*h for a single triple."""

    triple: tuple[int, int, int]
    n: int
    eps: float
    h: float
    N_D: float
    log_rad: float
    bound_cor36: float
    conjectural_gap: float

    @property
    def eps_admissible(self) -> bool:
        return self.eps > 3.0 / self.n


def thm312_report(t: AbcTriple, n: int, eps: float) -> Thm312Report:
    """``conjectural_gap = h - n(abc) - (3/n) h - eps h``.  Its sign is reported, not judged:
    nonpositivity for large h is exactly what the conjectural step would have to supply."""
    if n < 1 or eps <= 0:
        raise DomainError("need n >= 1 and eps > 0")
    P = build_gamma_point(t, n)
    h = t.height()
    lr = t.log_radical()
    return Thm312Report(
        triple=t.original,
        n=n,
        eps=eps,
        h=h,
        N_D=counting_N_D(P),
        log_rad=lr,
        bound_cor36=lr + 3.0 / n * h,
        conjectural_gap=h - lr - 3.0 / n * h - eps * h,
    )
