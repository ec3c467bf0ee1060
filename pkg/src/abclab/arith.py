"""Exact integer arithmetic: sieve, factorization, ord_p, radicals, power divisors.

All logarithms are natural.  ``LogSum`` keeps linear combinations of ``log p``
as an exponent ledger so that identities and inequalities between heights can
be decided exactly instead of in floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional

import numpy as np

from .errors import DomainError, UsageError

# Upper limit for a sieve table; an int32 table of this size is ~400 MB.
MAX_SIEVE_BOUND = 100_000_000

# Cofactors that survive trial division up to this limit go to Miller-Rabin.
TRIAL_LIMIT = 10_000


@dataclass(frozen=True)
class Factorization:
    """Signed prime-exponent map of a nonzero integer."""

    sign: int
    exponents: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        for p, e in self.exponents.items():
            if p < 2 or e < 1:
                raise ValueError(f"bad factor {p}^{e}")

    def reconstruct(self) -> int:
        out = self.sign
        for p, e in self.exponents.items():
            out *= p**e
        return out

    @property
    def primes(self) -> list[int]:
        return sorted(self.exponents)

    def radical(self) -> int:
        return math.prod(self.exponents)

    def log_radical(self) -> float:
        return sum(math.log(p) for p in self.exponents)

    def __str__(self):
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(self.exponents.items()))
        return ("-" if self.sign < 0 else "") + (body or "1")


@dataclass(frozen=True)
class SpfTable:
    """Smallest-prime-factor table: ``spf[m]`` for ``2 <= m <= bound``."""

    bound: int
    spf: np.ndarray = field(repr=False)

    def __getitem__(self, m: int) -> int:
        return int(self.spf[m])

    @property
    def primes(self) -> np.ndarray:
        idx = np.arange(self.spf.shape[0])
        return idx[(idx >= 2) & (self.spf == idx)]


def build_spf_sieve(bound: int) -> SpfTable:
    """Smallest prime factor of every integer up to ``bound`` (inclusive).

    Entries 0 and 1 hold 0 and 1 and carry no meaning.
    """
    if bound < 2:
        raise UsageError(f"sieve bound must be >= 2, got {bound}")
    if bound > MAX_SIEVE_BOUND:
        raise UsageError(f"sieve bound {bound} exceeds the supported maximum {MAX_SIEVE_BOUND}")
    spf = np.zeros(bound + 1, dtype=np.int32)
    spf[1] = 1
    for p in range(2, math.isqrt(bound) + 1):
        if spf[p] == 0:
            tail = spf[p * p :: p]
            tail[tail == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    return SpfTable(bound, spf)


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    return tuple(int(p) for p in build_spf_sieve(TRIAL_LIMIT).primes)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases.

    Deterministic for n < 3.3e24; beyond that it is a strong probable-prime test.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _split_cofactor(n: int, out: dict[int, int]) -> None:
    # n > 1 with no prime factor below TRIAL_LIMIT
    if n < TRIAL_LIMIT * TRIAL_LIMIT or is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    from sympy import factorint

    for p, e in factorint(n).items():
        out[int(p)] = out.get(int(p), 0) + int(e)


def factorize(m: int, table: Optional[SpfTable] = None) -> Factorization:
    """Factor a nonzero integer.

    Uses the sieve table when ``|m| <= table.bound``; otherwise trial division
    by small primes, Miller-Rabin on the cofactor, and sympy for composite
    cofactors that survive both.
    """
    m = int(m)
    if m == 0:
        raise DomainError("cannot factor 0")
    sign = 1 if m > 0 else -1
    n = abs(m)
    exps: dict[int, int] = {}
    if table is not None and n <= table.bound:
        spf = table.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            exps[p] = e
        return Factorization(sign, exps)
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            exps[p] = e
    if n > 1:
        _split_cofactor(n, exps)
    return Factorization(sign, dict(sorted(exps.items())))


def ord_p(m: int, p: int) -> int:
    if m == 0:
        raise DomainError("ord_p(0) is infinite")
    if p < 2:
        raise DomainError(f"{p} is not a prime")
    m = abs(m)
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return e


def radical(m: int, table: Optional[SpfTable] = None) -> int:
    return factorize(m, table).radical()


def log_radical(m: int, table: Optional[SpfTable] = None) -> float:
    """n(m) = sum of log p over the distinct primes p dividing m; 0 for units."""
    return factorize(m, table).log_radical()


def largest_nth_power_divisor(m: int, e: int, table: Optional[SpfTable] = None) -> tuple[int, int]:
    """Write ``m = u * x**e`` with ``x > 0`` maximal; the sign stays on ``u``."""
    if e < 2:
        raise UsageError(f"exponent must be >= 2, got {e}")
    f = factorize(m, table)
    u, x = f.sign, 1
    for p, k in f.exponents.items():
        q, r = divmod(k, e)
        x *= p**q
        u *= p**r
    return u, x


def largest_square_factor(m: int, table: Optional[SpfTable] = None) -> int:
    """Largest s with s**2 dividing m."""
    return largest_nth_power_divisor(m, 2, table)[1]


class LogSum:
    """Exact linear combination ``sum_p c_p * log p`` with rational coefficients.

    Zero coefficients are never stored, so ``LogSum() == 0`` is a structural test.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[int, Fraction | int]] = None):
        self._terms: dict[int, Fraction] = {}
        if terms:
            for p, c in terms.items():
                c = Fraction(c)
                if c:
                    self._terms[int(p)] = c

    @classmethod
    def log(cls, m: int | Fraction, table: Optional[SpfTable] = None) -> "LogSum":
        """log|m| for a nonzero integer or rational m."""
        m = Fraction(m)
        if m == 0:
            raise DomainError("log of 0")
        terms: dict[int, int] = dict(factorize(m.numerator, table).exponents)
        for p, k in factorize(m.denominator, table).exponents.items():
            terms[p] = terms.get(p, 0) - k
        return cls(terms)

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def __add__(self, other: "LogSum") -> "LogSum":
        out = dict(self._terms)
        for p, c in other._terms.items():
            out[p] = out.get(p, 0) + c
        return LogSum(out)

    def __neg__(self) -> "LogSum":
        return LogSum({p: -c for p, c in self._terms.items()})

    def __sub__(self, other: "LogSum") -> "LogSum":
        return self + (-other)

    def __mul__(self, k: int | Fraction) -> "LogSum":
        k = Fraction(k)
        return LogSum({p: c * k for p, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, LogSum):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __float__(self) -> float:
        return math.fsum(float(c) * math.log(p) for p, c in self._terms.items())

    def sign(self) -> int:
        """Exact sign of the real number represented, via one big-integer comparison."""
        if not self._terms:
            return 0
        den = math.lcm(*(c.denominator for c in self._terms.values()))
        pos, neg = 1, 1
        for p, c in self._terms.items():
            k = c.numerator * (den // c.denominator)
            if k > 0:
                pos *= p**k
            else:
                neg *= p ** (-k)
        return (pos > neg) - (pos < neg)

    def __repr__(self):
        inner = " + ".join(f"{c}*log({p})" for p, c in sorted(self._terms.items()))
        return f"LogSum({inner or '0'})"


def log_sum(values: Iterable[int], table: Optional[SpfTable] = None) -> LogSum:
    out = LogSum()
    for v in values:
        out = out + LogSum.log(v, table)
    return out
