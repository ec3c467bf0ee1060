"""Fifth (or m-th) power points u x^m + v y^m + w z^m = 0 and Pell's equation x^2 - d y^2 = +-4."""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Optional, Sequence

from .arith import SpfTable, largest_nth_power_divisor, largest_square_factor
from .errors import DomainError, UsageError
from .gamma import AbcTriple


@dataclass(frozen=True)
class PowerPoint:
    """``u x^m = a``, ``v y^m = b``, ``w z^m = c`` with x, y, z maximal."""

    triple: AbcTriple
    m: int
    u: int
    v: int
    w: int
    x: int
    y: int
    z: int

    def satisfies_equation(self) -> bool:
        m = self.m
        return self.u * self.x**m + self.v * self.y**m + self.w * self.z**m == 0

    def reconstructs(self) -> bool:
        a, b, c = self.triple.original
        m = self.m
        return (self.u * self.x**m, self.v * self.y**m, self.w * self.z**m) == (a, b, c)


def is_power_free(u: int, m: int, table: Optional[SpfTable] = None) -> bool:
    return largest_nth_power_divisor(u, m, table)[1] == 1


def build_power_point(t: AbcTriple, m: int = 5, table: Optional[SpfTable] = None) -> PowerPoint:
    if m < 2:
        raise UsageError(f"exponent m must be >= 2, got {m}")
    (u, x), (v, y), (w, z) = (largest_nth_power_divisor(val, m, table) for val in t.original)
    return PowerPoint(t, m, u, v, w, x, y, z)


@dataclass(frozen=True)
class PowerChainReport:
    triple: tuple[int, int, int]
    m: int
    h_abc: float
    h_uvw: float
    h_xyz: float
    n_abc: float
    chain1_ok: bool
    chain2_ok: bool
    eps_emp: float
    weak_abc_exponent: float
    target_exponent: Optional[int]


# weak-abc exponents obtained from the m-th power construction (m=5 and m=4)
TARGET_EXPONENT = {5: 24, 4: 27}


def power_chain_report(pp: PowerPoint) -> PowerChainReport:
    """Unconditional steps, checked on integers:

    (1) max(|u|,|v|,|w|) <= rad(abc)^(m-1)
    (2) max(|a|,|b|,|c|) <= max(|u|,|v|,|w|) * max(x,y,z)^m

    plus the empirical ratio eps_emp = (h_xyz - h_uvw) / h_abc, which the
    conditional step would need to be at most eps + o(1).
    """
    t = pp.triple
    M = t.max_abs()
    U = max(abs(pp.u), abs(pp.v), abs(pp.w))
    X = max(pp.x, pp.y, pp.z)
    rad = t.radical()
    h_abc = math.log(M)
    h_uvw = math.log(U)
    h_xyz = math.log(X)
    n_abc = t.log_radical()
    return PowerChainReport(
        triple=t.original,
        m=pp.m,
        h_abc=h_abc,
        h_uvw=h_uvw,
        h_xyz=h_xyz,
        n_abc=n_abc,
        chain1_ok=U <= rad ** (pp.m - 1),
        chain2_ok=M <= U * X**pp.m,
        eps_emp=(h_xyz - h_uvw) / h_abc,
        weak_abc_exponent=h_abc / n_abc,
        target_exponent=TARGET_EXPONENT.get(pp.m),
    )


@dataclass(frozen=True)
class PellSolution:
    d: int
    x: int
    y: int
    rhs: int

    def __post_init__(self):
        if self.x * self.x - self.d * self.y * self.y != self.rhs or self.rhs not in (4, -4):
            raise DomainError(f"({self.x}, {self.y}) does not solve x^2 - {self.d} y^2 = +-4")


def _check_d(d: int) -> None:
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if math.isqrt(d) ** 2 == d:
        raise DomainError(f"d = {d} is a perfect square")


def _pell_unit(D: int) -> tuple[int, int]:
    """Least p, q > 0 with p^2 - D q^2 = +-1, from the continued fraction of sqrt(D)."""
    a0 = math.isqrt(D)
    m, den, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while p * p - D * q * q not in (1, -1):
        m = den * a - m
        den = (D - m * m) // den
        a = (a0 + m) // den
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q


def _half_unit(d: int) -> tuple[int, int]:
    """d = 1 (mod 4): walk the convergents P/Q of (1 + sqrt d)/2.  The element
    P - Q(1 + sqrt d)/2 equals ((2P - Q) - Q sqrt d)/2, so x = 2P - Q, y = Q."""
    # continued fraction of (P0 + sqrt d)/Q0 with P0 = 1, Q0 = 2
    r = math.isqrt(d)
    P0, Q0 = 1, 2
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while True:
        a = (P0 + r) // Q0
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        x, y = 2 * p - q, q
        if x > 0 and x * x - d * y * y in (4, -4):
            return x, y
        P0 = a * Q0 - P0
        Q0 = (d - P0 * P0) // Q0


def pell_fundamental(d: int) -> PellSolution:
    """Least positive solution of x^2 - d y^2 = +-4 via continued fractions.

    d = 2, 3 (mod 4) forces x, y even, so it is twice the +-1 unit of Z[sqrt d];
    d = 0 (mod 4) reduces to the +-1 equation for d/4; d = 1 (mod 4) uses the
    convergents of (1 + sqrt d)/2 directly.
    """
    _check_d(d)
    r = d % 4
    if r in (2, 3):
        p, q = _pell_unit(d)
        x, y = 2 * p, 2 * q
    elif r == 0:
        p, q = _pell_unit(d // 4)
        x, y = 2 * p, q
    else:
        x, y = _half_unit(d)
    return PellSolution(d, x, y, x * x - d * y * y)


def pell_fundamental_search(d: int, y_max: int = 10**6) -> PellSolution:
    """Ascending search on y; the smallest x wins when both signs solve at the same y."""
    _check_d(d)
    for y in range(1, y_max + 1):
        best = None
        for rhs in (-4, 4):
            t = d * y * y + rhs
            if t > 0:
                x = math.isqrt(t)
                if x * x == t and (best is None or x < best[0]):
                    best = (x, rhs)
        if best is not None:
            return PellSolution(d, best[0], y, best[1])
    raise UsageError(f"no solution with y <= {y_max} for d = {d}")


def pell_solve(d: int, count: int, method: str = "cf", y_max: int = 10**6) -> list[PellSolution]:
    """The first ``count`` positive solutions of x^2 - d y^2 = +-4 in increasing x.

    Successive solutions come from composing with the fundamental one:
    x' = (x1 x + d y1 y)/2, y' = (x1 y + y1 x)/2.
    """
    if count < 1:
        raise UsageError("count must be >= 1")
    if method == "cf":
        first = pell_fundamental(d)
    elif method == "search":
        first = pell_fundamental_search(d, y_max)
    else:
        raise UsageError(f"unknown method {method!r}")
    x1, y1 = first.x, first.y
    out = [first]
    x, y = x1, y1
    while len(out) < count:
        nx, ny = x1 * x + d * y1 * y, x1 * y + y1 * x
        if nx % 2 or ny % 2:
            raise ArithmeticError(f"composition not divisible by 2 at d={d}, ({x}, {y})")
        x, y = nx // 2, ny // 2
        out.append(PellSolution(d, x, y, x * x - d * y * y))
    return out


@dataclass(frozen=True)
class SquareRow:
    solution: PellSolution
    s_x: int
    s_y: int
    ratio: float


@dataclass(frozen=True)
class SquareStats:
    rows: tuple[SquareRow, ...]
    max_ratio: float
    mean_ratio: float


def square_ratio(x: int, y: int, s_x: int, s_y: int) -> float:
    """log max(s_x, s_y) / log max(x, y); 0 when max(x, y) = 1."""
    top = max(x, y)
    if top <= 1:
        return 0.0
    return math.log(max(s_x, s_y)) / math.log(top)


def square_free_stats(solutions: Sequence[PellSolution], table: Optional[SpfTable] = None) -> SquareStats:
    if not solutions:
        raise UsageError("square_free_stats needs at least one solution")
    rows = []
    for sol in solutions:
        s_x = largest_square_factor(sol.x, table)
        s_y = largest_square_factor(sol.y, table)
        rows.append(SquareRow(sol, s_x, s_y, square_ratio(sol.x, sol.y, s_x, s_y)))
    ratios = [r.ratio for r in rows]
    return SquareStats(tuple(rows), max(ratios), statistics.fmean(ratios))
