r"""Nevanlinna functionals of rational functions f: C -> P^1.

Conventions (the standard ones):

    N(r, a)  = sum_{0 < |z| <= r} mult * ln(r / |z|)  +  mult_0 * ln r
    m(r, a)  = mean over |z| = r of ln+ 1/|f - a|      (a finite)
    m(r, oo) = mean over |z| = r of ln+ |f|
    T(r)     = m(r, oo) + N(r, oo)

The sum runs over zeros of f - a (poles of f for a = oo) in the finite plane.
The point at infinity of the source is never counted.  Circle means use the
trapezoidal rule on equally spaced nodes, which is spectrally accurate as
long as no zero or pole sits near the circle.  When one does (closer than
1e-6 r), the radius is nudged outward by half an angular step, r * exp(pi/nodes).

For X = P^1 and D = [0] + [oo] the ramification counting function counts the
zeros of f'/f, and the logarithmic-derivative proximity is the mean of
ln+ |f'/f|.  Since the log cotangent sheaf of (P^1, [0] + [oo]) is trivial,
the characteristic of the lifted derivative is bounded, so the surviving
content of the second-main-theorem type inequality is N1(D, r) >= N_Ram(D, r)
up to lower-order terms.  That is what ``check_residuals`` measures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DomainError, NumericError

INF = math.inf
Target = Union[complex, float, int, None]  # None or math.inf means the point at infinity

_NEAR_CIRCLE = 1e-6


def _trim(c: np.ndarray, rel: float = 0.0) -> np.ndarray:
    """Drop trailing (highest-degree) coefficients that are zero, or tiny relative to the largest."""
    c = np.asarray(c, dtype=complex)
    if c.size == 0:
        return c
    scale = np.max(np.abs(c))
    k = c.size
    while k > 0 and abs(c[k - 1]) <= rel * scale:
        k -= 1
    return c[:k]


@dataclass(frozen=True)
class RootSet:
    locations: np.ndarray
    multiplicities: np.ndarray
    residual: float

    def __len__(self) -> int:
        return len(self.locations)

    @property
    def degree(self) -> int:
        return int(self.multiplicities.sum())

    def expanded(self) -> np.ndarray:
        return np.repeat(self.locations, self.multiplicities)


def _scaled_residual(c: np.ndarray, z: np.ndarray) -> float:
    if z.size == 0:
        return 0.0
    num = np.abs(P.polyval(z, c))
    den = P.polyval(np.abs(z), np.abs(c))
    return float(np.max(num / np.maximum(den, np.finfo(float).tiny)))


def _aberth(a: np.ndarray, maxiter: int) -> tuple[np.ndarray, bool]:
    n = a.size - 1
    da = P.polyder(a)
    # start on a circle of the Fujiwara-type radius, rotated off the real axis
    mags = np.abs(a[:-1] / a[-1])
    R = 2.0 * max(mags[k] ** (1.0 / (n - k)) for k in range(n)) if np.any(mags) else 1.0
    R = max(R, 1e-3)
    z = R * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    for _ in range(maxiter):
        p = P.polyval(z, a)
        dp = P.polyval(z, da)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(w)
        if bad.any():
            w[bad] = 1e-8 * (1 + np.abs(z[bad]))
        z = z - w
        if np.all(np.abs(w) <= 4 * np.finfo(float).eps * np.maximum(np.abs(z), 1.0)):
            return z, True
    return z, False


def _cluster(z: np.ndarray, rel: float) -> list[list[int]]:
    """Single-linkage groups of approximations closer than rel * max(1, |z|)."""
    n = z.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= rel * max(1.0, abs(z[i]), abs(z[j])):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _polish(a: np.ndarray, z0: complex, m: int, radius: float) -> complex:
    """Newton on the (m-1)-th derivative, where a root of multiplicity m becomes simple."""
    q = P.polyder(a, m - 1) if m > 1 else a
    dq = P.polyder(q)
    z = z0
    best, best_val = z0, abs(P.polyval(z0, q))
    for _ in range(20):
        d = P.polyval(z, dq)
        if d == 0:
            break
        step = P.polyval(z, q) / d
        z = z - step
        if abs(z - z0) > radius:
            break
        val = abs(P.polyval(z, q))
        if val < best_val:
            best, best_val = z, val
        if abs(step) <= 2 * np.finfo(float).eps * max(1.0, abs(z)):
            break
    return complex(best)


def roots(coeffs: Sequence[complex], tol: float = 1e-9, maxiter: int = 500, cluster: float = 1e-5) -> RootSet:
    """Roots of sum coeffs[k] z^k with multiplicities (Aberth iteration plus clustering).

    Exact zero roots are split off first.  Approximations closer than ``cluster``
    (relative) are merged; each merged root is polished by Newton's method on the
    derivative of matching order.  Raises NumericError if the scaled residual
    max |p(z)| / sum |c_k| |z|^k exceeds ``tol``.
    """
    c = _trim(coeffs)
    if c.size < 2:
        raise DomainError("roots of a constant polynomial")
    k0 = 0
    while c[k0] == 0:
        k0 += 1
    a = c[k0:]
    locs: list[complex] = []
    mults: list[int] = []
    if k0:
        locs.append(0j)
        mults.append(k0)
    if a.size > 1:
        if a.size == 2:
            z, ok = np.array([-a[0] / a[1]]), True
        else:
            z, ok = _aberth(a, maxiter)
        for grp in _cluster(z, cluster):
            m = len(grp)
            centre = complex(np.mean(z[grp]))
            spread = max(abs(z[i] - centre) for i in grp)
            rad = max(10 * spread, cluster * max(1.0, abs(centre)))
            locs.append(_polish(a, centre, m, rad))
            mults.append(m)
    loc_arr = np.array(locs, dtype=complex)
    mult_arr = np.array(mults, dtype=int)
    res = 0.0
    if a.size > 1:
        nz = loc_arr[1:] if k0 else loc_arr
        # a multiple root only solves p to about eps^(1/m); judge it on the matching derivative
        res_list = []
        for zz, m in zip(nz, mult_arr[1:] if k0 else mult_arr):
            q = P.polyder(a, m - 1) if m > 1 else a
            res_list.append(_scaled_residual(q, np.array([zz])))
        res = max(res_list)
    if not np.isfinite(res) or res > tol:
        raise NumericError(f"root finder residual {res:.3g} exceeds {tol:g}", best_residual=res)
    order = np.lexsort((loc_arr.imag, loc_arr.real))
    return RootSet(loc_arr[order], mult_arr[order], res)


class RatFuncC:
    """f = num/den with complex coefficients, constant term first.

    The two polynomials are expected to be coprime; common factors are not cancelled.
    """

    def __init__(self, num: Sequence[complex], den: Sequence[complex] = (1,)):
        self.num = _trim(num)
        self.den = _trim(den)
        if self.den.size == 0:
            raise DomainError("denominator is identically zero")
        if self.num.size == 0:
            self.num = np.zeros(1, dtype=complex)
        self._cache: dict = {}

    @classmethod
    def poly(cls, coeffs: Sequence[complex]) -> "RatFuncC":
        return cls(coeffs, (1,))

    def __repr__(self) -> str:
        return f"RatFuncC(num={self.num.tolist()}, den={self.den.tolist()})"

    @property
    def deg_num(self) -> int:
        return self.num.size - 1 if np.any(self.num) else -1

    @property
    def deg_den(self) -> int:
        return self.den.size - 1

    @property
    def degree(self) -> int:
        return max(self.deg_num, self.deg_den)

    def is_constant(self) -> bool:
        return self.deg_num <= 0 and self.deg_den == 0

    def __call__(self, z):
        return P.polyval(z, self.num) / P.polyval(z, self.den)

    def minus(self, a: complex) -> np.ndarray:
        """Numerator of f - a."""
        n = max(self.num.size, self.den.size)
        out = np.zeros(n, dtype=complex)
        out[: self.num.size] += self.num
        out[: self.den.size] -= a * self.den
        return _trim(out)

    def _roots_of(self, key, coeffs) -> Optional[RootSet]:
        if key not in self._cache:
            c = _trim(coeffs)
            self._cache[key] = roots(c) if c.size > 1 else None
        return self._cache[key]

    def zeros(self, target: Target = 0) -> Optional[RootSet]:
        """Finite zeros of f - target (poles of f for target at infinity); None if there are none."""
        if _is_inf(target):
            return self._roots_of("poles", self.den)
        c = self.minus(complex(target))
        if c.size == 0:
            raise DomainError(f"f is identically {target}")
        return self._roots_of(("zeros", complex(target)), c)

    def log_derivative_numerator(self) -> np.ndarray:
        """Numerator W of f'/f = W / (prod (z - a_i) prod (z - b_j)) over distinct zeros a_i and poles b_j."""
        if self.is_constant():
            raise DomainError("f is constant")
        if "W" in self._cache:
            return self._cache["W"]
        Z = self.zeros(0)
        Q = self.zeros(INF)
        pts, wts = [], []
        if Z is not None:
            pts += list(Z.locations)
            wts += list(Z.multiplicities)
        if Q is not None:
            pts += list(Q.locations)
            wts += [-m for m in Q.multiplicities]
        W = np.zeros(max(len(pts), 1), dtype=complex)
        for i, w in enumerate(wts):
            others = [p for j, p in enumerate(pts) if j != i]
            term = P.polyfromroots(others) if others else np.ones(1, dtype=complex)
            W[: term.size] += w * term
        # cancellation in the leading coefficient (sum of weights = 0) leaves rounding dust
        W = _trim(W, rel=1e-10)
        self._cache["W"] = W
        return W

    def laurent_lead(self, a: Target) -> complex:
        """Leading Laurent coefficient at 0 of f - a (of f when a is infinity)."""
        c = self.num if _is_inf(a) else self.minus(complex(a))
        return _lowest(c) / _lowest(self.den)


def _lowest(c: np.ndarray) -> complex:
    scale = np.max(np.abs(c))
    for x in c:
        if abs(x) > 1e-14 * scale:
            return complex(x)
    raise DomainError("zero polynomial")


def _is_inf(a: Target) -> bool:
    return a is None or (isinstance(a, (int, float)) and math.isinf(a))


def _count(rs: Optional[RootSet], r: float, truncate: bool) -> float:
    if rs is None:
        return 0.0
    total = 0.0
    lr = math.log(r)
    for z, m in zip(rs.locations, rs.multiplicities):
        w = 1 if truncate else int(m)
        az = abs(z)
        if az == 0.0:
            total += w * lr
        elif az <= r:
            total += w * (lr - math.log(az))
    return total


def counting_N(f: RatFuncC, target: Target, r: float, truncate: bool = False) -> float:
    if r <= 0:
        raise DomainError("radius must be positive")
    return _count(f.zeros(target), r, truncate)


def _singular_moduli(f: RatFuncC, targets: Sequence[Target]) -> list[float]:
    out = []
    for t in targets:
        rs = f.zeros(t)
        if rs is not None:
            out += [abs(z) for z in rs.locations]
    return out


def safe_radius(f: RatFuncC, r: float, nodes: int, targets: Sequence[Target] = (0, INF)) -> float:
    """r, or r nudged by half an angular step if a zero/pole of f - a is within 1e-6 r of the circle."""
    mods = _singular_moduli(f, targets)

    def close(rr):
        return any(abs(m - rr) <= _NEAR_CIRCLE * rr for m in mods)

    if not close(r):
        return r
    r2 = r * math.exp(math.pi / nodes)
    if close(r2):
        raise NumericError(f"singularity on the circle |z| = {r} even after perturbation", best_residual=0.0)
    return r2


def _circle(r: float, nodes: int) -> np.ndarray:
    return r * np.exp(2j * np.pi * np.arange(nodes) / nodes)


def _log_plus(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.maximum(np.log(x), 0.0)


def proximity_m(f: RatFuncC, target: Target, r: float, nodes: int = 2048) -> float:
    if r <= 0:
        raise DomainError("radius must be positive")
    targets = (INF,) if _is_inf(target) else (target, INF)
    r = safe_radius(f, r, nodes, targets)
    z = _circle(r, nodes)
    if _is_inf(target):
        vals = _log_plus(np.abs(f(z)))
    else:
        num = P.polyval(z, f.minus(complex(target)))
        vals = _log_plus(np.abs(P.polyval(z, f.den)) / np.abs(num))
    return float(vals.mean())


def characteristic_T(f: RatFuncC, r: float, nodes: int = 2048, target: Target = INF) -> float:
    """T(r) = m(r, oo) + N(r, oo); with a finite target, m(r, a) + N(r, a) instead."""
    r = safe_radius(f, r, nodes, (target, INF) if not _is_inf(target) else (INF,))
    return proximity_m(f, target, r, nodes) + counting_N(f, target, r)


def log_derivative_proximity(f: RatFuncC, r: float, nodes: int = 2048) -> float:
    """Mean over |z| = r of ln+ |f'/f|."""
    if f.is_constant():
        raise DomainError("f is constant")
    r = safe_radius(f, r, nodes)
    z = _circle(r, nodes)
    ld = P.polyval(z, P.polyder(f.num)) / P.polyval(z, f.num) - P.polyval(z, P.polyder(f.den)) / P.polyval(z, f.den)
    return float(_log_plus(np.abs(ld)).mean())


def ramification_counting(f: RatFuncC, r: float) -> float:
    """Counting function of the zeros of f'/f."""
    W = f.log_derivative_numerator()
    if W.size <= 1:
        return 0.0
    if "W_roots" not in f._cache:
        f._cache["W_roots"] = roots(W)
    return _count(f._cache["W_roots"], r, truncate=False)


def jensen_residual(f: RatFuncC, r: float, nodes: int = 4096) -> float:
    """|mean of ln|f| on |z| = r  -  closed form| with the closed form from root data:

    ln|lc(num)/lc(den)| + sum m ln max(r, |alpha|) - sum n ln max(r, |beta|).
    """
    z = _circle(r, nodes)
    quad = float(np.log(np.abs(f(z))).mean())
    closed = math.log(abs(f.num[-1] / f.den[-1]))
    Z, Q = f.zeros(0), f.zeros(INF)
    if Z is not None:
        closed += sum(int(m) * math.log(max(r, abs(a))) for a, m in zip(Z.locations, Z.multiplicities))
    if Q is not None:
        closed -= sum(int(m) * math.log(max(r, abs(b))) for b, m in zip(Q.locations, Q.multiplicities))
    return abs(quad - closed)


def fmt_bound(f: RatFuncC, a: complex) -> float:
    """Bound on |T(r, a) - T(r)| from the first main theorem: |ln|c_a|| + ln+|a| + ln 2."""
    log_plus_a = math.log(abs(a)) if abs(a) > 1 else 0.0
    return abs(math.log(abs(f.laurent_lead(a)))) + log_plus_a + math.log(2.0)


NEV_COLUMNS = ("r", "T", "m_inf", "N_inf", "N1_D", "N_ram", "m_logderiv")


@dataclass
class NevTable:
    r: np.ndarray
    T: np.ndarray
    m_inf: np.ndarray
    N_inf: np.ndarray
    N_0: np.ndarray
    N1_D: np.ndarray
    N_ram: np.ndarray
    m_logderiv: np.ndarray

    def rows(self) -> list[dict]:
        return [{k: float(getattr(self, k)[i]) for k in NEV_COLUMNS} for i in range(len(self.r))]

    def slope(self, lo: float = 0.0, hi: float = INF) -> float:
        """Least-squares slope of T against ln r on lo <= r <= hi."""
        sel = (self.r >= lo) & (self.r <= hi)
        if sel.sum() < 2:
            raise DomainError("need at least two radii for a slope")
        return float(np.polyfit(np.log(self.r[sel]), self.T[sel], 1)[0])


def nev_table(f: RatFuncC, radii: Sequence[float], nodes: int = 2048) -> NevTable:
    cols: dict[str, list[float]] = {k: [] for k in ("r", "T", "m_inf", "N_inf", "N_0", "N1_D", "N_ram", "m_logderiv")}
    for r0 in radii:
        r = safe_radius(f, float(r0), nodes)
        m_inf = proximity_m(f, INF, r, nodes)
        N_inf = counting_N(f, INF, r)
        cols["r"].append(r)
        cols["T"].append(m_inf + N_inf)
        cols["m_inf"].append(m_inf)
        cols["N_inf"].append(N_inf)
        cols["N_0"].append(counting_N(f, 0, r))
        cols["N1_D"].append(counting_N(f, 0, r, truncate=True) + counting_N(f, INF, r, truncate=True))
        cols["N_ram"].append(ramification_counting(f, r))
        cols["m_logderiv"].append(log_derivative_proximity(f, r, nodes))
    return NevTable(**{k: np.asarray(v, dtype=float) for k, v in cols.items()})


@dataclass
class NevReport:
    table: NevTable
    fmt_spread: dict
    fmt_bounds: dict
    fmt_ok: bool
    residual: np.ndarray
    C_needed: float
    residual_ok: bool
    logderiv_ratio: np.ndarray
    logderiv_ok: bool
    monotone_ok: bool
    truncation_ok: bool
    verdicts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


DEFAULT_TARGETS = (0, 1, -1, 1j, 2.5)


def check_residuals(
    f: RatFuncC,
    radii: Sequence[float],
    nodes: int = 2048,
    targets: Sequence[complex] = DEFAULT_TARGETS,
    C: float = 1.0,
    logderiv_tol: float = 0.05,
    exceptional_fraction: float = 0.0,
    atol: float = 1e-6,
) -> NevReport:
    """Tabulate the functionals on ``radii`` and judge three inequalities.

    fmt:       |T(r, a) - T(r)| <= fmt_bound(f, a) for every sampled target a.
    residual:  N1(D, r) - N_Ram(D, r) >= -C (ln+ T(r) + ln r); C_needed is the smallest C that works.
    logderiv:  m(r, f'/f) / ln r <= logderiv_tol for r > 1.

    A verdict tolerates failures at up to ``exceptional_fraction`` of the radii.
    """
    if f.is_constant():
        raise DomainError("f is constant")
    tab = nev_table(f, radii, nodes)
    n = len(tab.r)
    allowed = math.floor(exceptional_fraction * n)

    spreads, bounds = {}, {}
    fmt_fail = np.zeros(n, dtype=bool)
    for a in targets:
        if f.minus(complex(a)).size == 0:
            continue
        Ta = np.array([characteristic_T(f, r, nodes, target=a) for r in tab.r])
        diff = np.abs(Ta - tab.T)
        spreads[a] = float(diff.max())
        bounds[a] = fmt_bound(f, a)
        fmt_fail |= diff > bounds[a] + atol
    fmt_ok = int(fmt_fail.sum()) <= allowed

    residual = tab.N1_D - tab.N_ram
    gauge = np.maximum(np.log(np.maximum(tab.T, 1.0)), 0.0) + np.log(tab.r)
    with np.errstate(divide="ignore", invalid="ignore"):
        need = np.where(gauge > 0, np.maximum(-residual, 0.0) / gauge, np.where(residual < -atol, np.inf, 0.0))
    C_needed = float(need.max()) if n else 0.0
    residual_ok = int((need > C).sum()) <= allowed

    big = tab.r > 1.0
    ratio = np.full(n, np.nan)
    ratio[big] = tab.m_logderiv[big] / np.log(tab.r[big])
    logderiv_ok = int((ratio[big] > logderiv_tol).sum()) <= allowed

    order = np.argsort(tab.r)
    monotone_ok = all(
        bool(np.all(np.diff(getattr(tab, k)[order]) >= -atol)) for k in ("N_inf", "N_0", "N1_D", "N_ram")
    )
    trunc_ok = bool(np.all(tab.N1_D <= tab.N_0 + tab.N_inf + atol))
    verdicts = {
        "fmt": fmt_ok,
        "residual": residual_ok,
        "logderiv": logderiv_ok,
        "monotone": monotone_ok,
        "truncation": trunc_ok,
    }
    return NevReport(
        tab, spreads, bounds, fmt_ok, residual, C_needed, residual_ok, ratio, logderiv_ok, monotone_ok, trunc_ok, verdicts
    )


def geometric_radii(rmin: float, rmax: float, points: int) -> np.ndarray:
    if rmin <= 0 or rmax < rmin or points < 1:
        raise DomainError("need 0 < rmin <= rmax and points >= 1")
    return np.geomspace(rmin, rmax, points)
