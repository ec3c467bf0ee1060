"""Partitioned sweeps over all canonical triples with a + b <= bound.

The range of s = a + b is cut into contiguous chunks of roughly equal work,
each chunk is handed to a kernel (optionally in a process pool), and results
are merged in chunk order so output never depends on the worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .arith import build_spf_sieve

_worker_spf = None


def partition(bound: int, parts: int) -> list[tuple[int, int]]:
    """Split 2..bound into at most ``parts`` ranges with about equal sum of s/2."""
    if bound < 2:
        return []
    parts = max(1, min(parts, bound - 1))
    total = (bound * bound - 4) / 4.0
    out = []
    lo = 2
    for k in range(1, parts + 1):
        if k == parts:
            hi = bound
        else:
            hi = int(math.sqrt(4.0 * total * k / parts + 4))
            hi = min(max(hi, lo), bound)
        if lo <= hi:
            out.append((lo, hi))
        lo = hi + 1
        if lo > bound:
            break
    return out


def _init_worker(bound):
    global _worker_spf
    _worker_spf = build_spf_sieve(max(bound, 2)).spf


def _call(args):
    backend, fn, bound, s_lo, s_hi, extra = args
    global _worker_spf
    if _worker_spf is None or _worker_spf.shape[0] <= bound:
        _init_worker(bound)
    impl = kernels.get_backend(backend)
    return getattr(impl, fn)(_worker_spf, s_lo, s_hi, *extra)


def _pick_backend(backend: Optional[str], bound: int, n: int) -> str:
    """The requested backend, or Python when the compiled one cannot take these inputs."""
    if backend is not None:
        return backend
    impl = kernels.active
    if impl.NAME != "python" and (bound > impl.MAX_BOUND or n > impl.MAX_N):
        return "python"
    return impl.NAME


def _run(fn: str, bound: int, extra: tuple, jobs: int, backend: Optional[str]):
    n = extra[0] if fn in ("gamma_sweep", "power_sweep") else 1
    backend = _pick_backend(backend, bound, n)
    chunks = partition(bound, max(jobs, 1) * 4 if jobs > 1 else 1)
    tasks = [(backend, fn, bound, lo, hi, extra) for lo, hi in chunks]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(bound,)) as ex:
            return list(ex.map(_call, tasks))
    return [_call(t) for t in tasks]


def _concat_rows(parts: Sequence[Optional[dict]]) -> Optional[dict]:
    parts = [p for p in parts if p is not None]
    if not parts:
        return None
    return {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}


def merge_gamma_stats(stats: Sequence[dict]) -> dict:
    out: dict = {}
    for st in stats:
        for k, v in st.items():
            if k.startswith("min_"):
                out[k] = min(out.get(k, math.inf), v)
            else:
                out[k] = out.get(k, 0) + v
    return out


def merge_power_stats(stats: Sequence[dict]) -> dict:
    out: dict = {}
    for st in stats:
        for k, v in st.items():
            if k == "eps_min":
                out[k] = min(out.get(k, math.inf), v)
            elif k == "eps_max":
                out[k] = max(out.get(k, -math.inf), v)
            elif k == "hist":
                out[k] = out[k] + v if k in out else v.copy()
            else:
                out[k] = out.get(k, 0) + v
    return out


GAMMA_CHECKS = (
    "reconstruction_violations",
    "equations_violations",
    "eq34_violations",
    "lemma35_violations",
    "cor36_violations",
    "lemma311_violations",
)


@dataclass
class GammaSweep:
    bound: int
    n: int
    stats: dict
    rows: Optional[dict] = field(default=None, repr=False)

    @property
    def violations(self) -> int:
        return sum(self.stats[k] for k in GAMMA_CHECKS)


def gamma_sweep(
    bound: int,
    n: int,
    jobs: int = 1,
    mode: int = 0,
    fault: bool = False,
    backend: Optional[str] = None,
) -> GammaSweep:
    res = _run("gamma_sweep", bound, (n, mode, fault), jobs, backend)
    return GammaSweep(bound, n, merge_gamma_stats([r[0] for r in res]), _concat_rows([r[1] for r in res]))


@dataclass
class PowerSweep:
    bound: int
    m: int
    stats: dict
    rows: Optional[dict] = field(default=None, repr=False)

    @property
    def violations(self) -> int:
        s = self.stats
        return s["chain1_violations"] + s["chain2_violations"] + s["powerfree_violations"]

    def eps_summary(self) -> dict:
        """Mean, spread and histogram-based quantiles of eps_emp."""
        s = self.stats
        n = s["triples"]
        mean = s["eps_sum"] / n
        var = max(s["eps_sumsq"] / n - mean * mean, 0.0)
        hist = s["hist"]
        edges = np.linspace(kernels.EPS_LO, kernels.EPS_HI, kernels.EPS_BINS + 1)
        cum = np.cumsum(hist) / n
        quant = {}
        for q in (0.01, 0.1, 0.5, 0.9, 0.99):
            k = int(np.searchsorted(cum, q))
            quant[f"q{int(q * 100):02d}"] = float(edges[min(k + 1, len(edges) - 1)])
        return {
            "count": n,
            "min": s["eps_min"],
            "max": s["eps_max"],
            "mean": mean,
            "std": math.sqrt(var),
            "quantile_upper_edges": quant,
            "bin_edges": edges.tolist(),
            "hist": hist.tolist(),
        }


def power_sweep(bound: int, m: int, jobs: int = 1, mode: int = 0, backend: Optional[str] = None) -> PowerSweep:
    res = _run("power_sweep", bound, (m, mode), jobs, backend)
    return PowerSweep(bound, m, merge_power_stats([r[0] for r in res]), _concat_rows([r[1] for r in res]))


def triple_table(
    bound: int, eps: float = 0.0, min_quality: float = 0.0, jobs: int = 1, backend: Optional[str] = None
) -> dict:
    res = _run("triple_rows", bound, (eps, min_quality), jobs, backend)
    return _concat_rows(res) or {
        k: np.empty(0) for k in ("a", "b", "h", "log_rad", "quality", "margin")
    }


def count_triples_oracle(bound: int) -> int:
    """Independent count: vectorized gcd over every pair 1 <= a <= s/2, s <= bound."""
    total = 0
    for s in range(2, bound + 1):
        a = np.arange(1, s // 2 + 1)
        total += int(np.count_nonzero(np.gcd(a, s - a) == 1))
    return total
