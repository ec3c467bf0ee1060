"""Pure-Python sweep kernels.  Same contract as the compiled ``_ckernels`` module.

Triples are the canonical (a, s - a, -s) with gcd(a, s) = 1 and s in [s_lo, s_hi].
``mode``: 0 = statistics only, 1 = also rows of violating triples, 2 = rows of all triples.
"""
import math

import numpy as np

NAME = "python"

# histogram of eps_emp over [EPS_LO, EPS_HI) in EPS_BINS equal bins (values outside are clamped)
EPS_LO, EPS_HI, EPS_BINS = -1.0, 0.5, 60


def count_pairs(s_lo, s_hi):
    return sum(1 for s in range(max(s_lo, 2), s_hi + 1) for a in range(1, s // 2 + 1) if math.gcd(a, s) == 1)


def _factor(spf, m):
    out = []
    while m > 1:
        p = spf[m]
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return out


def _pairs(s_lo, s_hi):
    for s in range(max(s_lo, 2), s_hi + 1):
        for a in range(1, s // 2 + 1):
            if math.gcd(a, s) == 1:
                yield a, s


def triple_rows(spf, s_lo, s_hi, eps, min_quality):
    spf = spf.tolist() if hasattr(spf, "tolist") else spf
    cols = {k: [] for k in ("a", "b", "h", "log_rad", "quality", "margin")}
    for a, s in _pairs(s_lo, s_hi):
        b = s - a
        lr = 0.0
        for v in (a, b, s):
            for p, _ in _factor(spf, v):
                lr += math.log(p)
        h = math.log(s)
        q = h / lr
        if q < min_quality:
            continue
        cols["a"].append(a)
        cols["b"].append(b)
        cols["h"].append(h)
        cols["log_rad"].append(lr)
        cols["quality"].append(q)
        cols["margin"].append(lr - (1.0 - eps) * h)
    return {
        k: np.asarray(v, dtype=np.int64 if k in ("a", "b") else np.float64)
        for k, v in cols.items()
    }


GAMMA_COLS = ("a", "b", "lemma35_ok", "lemma35_slack", "cor36_ok", "lemma311_ok", "eq34_ok", "equations_ok")


def _gamma_rows_to_arrays(rows):
    out = {}
    for i, k in enumerate(GAMMA_COLS):
        vals = [r[i] for r in rows]
        if k in ("a", "b"):
            out[k] = np.asarray(vals, dtype=np.int64)
        elif k == "lemma35_slack":
            out[k] = np.asarray(vals, dtype=np.float64)
        else:
            out[k] = np.asarray(vals, dtype=bool)
    return out


def gamma_sweep(spf, s_lo, s_hi, n, mode=0, fault=False):
    spf = spf.tolist() if hasattr(spf, "tolist") else spf
    st = dict(
        triples=0,
        reconstruction_violations=0,
        equations_violations=0,
        eq34_violations=0,
        lemma35_violations=0,
        cor36_violations=0,
        lemma311_violations=0,
        min_lemma35_slack=math.inf,
        min_cor36_slack=math.inf,
        min_lemma311_slack=math.inf,
    )
    rows = []
    for a, s in _pairs(s_lo, s_hi):
        b = s - a
        vals = (a, b, -s)
        st["triples"] += 1
        parts = [[1] * (n + 1) for _ in range(3)]
        lograd = 0.0
        l35 = True
        cor_lhs = 1  # prod over p | abc of p^(n * (ord_p(prod xyz) - 1))
        for k, v in enumerate(vals):
            blk = parts[k]
            for p, e in _factor(spf, abs(v)):
                lograd += math.log(p)
                q, r = divmod(e, n)
                blk[n] *= p**q
                if r:
                    blk[r] *= p
                e_d = q + (1 if r else 0)
                if n * e_d > n + e:
                    l35 = False
                cor_lhs *= p ** (n * (e_d - 1))
            if v < 0:
                blk[1] = -blk[1]
        if fault:
            parts[0][1] = -parts[0][1]
        prods = [math.prod(blk[i] ** i for i in range(1, n + 1)) for blk in parts]
        recon = prods[0] == a and prods[1] == b and prods[2] == -s
        eqs = prods[0] + prods[1] + prods[2] == 0 and a + b - s == 0 and a * prods[1] == b * prods[0]
        g = math.gcd(a, b, s)
        eq34 = g == 1 and max(a // g, b // g, s // g) == max(a, b, s)
        M = s
        maxprod = 1
        nd_abs = 1
        for i in range(1, n + 1):
            col = (abs(parts[0][i]), abs(parts[1][i]), abs(parts[2][i]))
            maxprod *= max(col)
            nd_abs *= col[0] * col[1] * col[2]
        l311 = maxprod <= M**3
        c36 = cor_lhs <= M**3
        N_D = math.log(nd_abs)
        N_E = math.log(a) + math.log(b) + math.log(s)
        h = math.log(M)
        s35 = lograd + N_E / n - N_D
        s36 = lograd + 3.0 / n * h - N_D
        s311 = 3.0 * h - math.log(maxprod)
        st["reconstruction_violations"] += not recon
        st["equations_violations"] += not eqs
        st["eq34_violations"] += not eq34
        st["lemma35_violations"] += not l35
        st["cor36_violations"] += not c36
        st["lemma311_violations"] += not l311
        st["min_lemma35_slack"] = min(st["min_lemma35_slack"], s35)
        st["min_cor36_slack"] = min(st["min_cor36_slack"], s36)
        st["min_lemma311_slack"] = min(st["min_lemma311_slack"], s311)
        ok = recon and eqs and eq34 and l35 and c36 and l311
        if mode == 2 or (mode == 1 and not ok):
            rows.append((a, b, l35, s35, c36, l311, eq34, recon and eqs))
    return st, (_gamma_rows_to_arrays(rows) if mode else None)


POWER_COLS = ("a", "b", "h_abc", "h_uvw", "h_xyz", "n_abc", "chain1_ok", "chain2_ok", "eps_emp")


def _eps_bin(x):
    k = int((x - EPS_LO) / (EPS_HI - EPS_LO) * EPS_BINS)
    return min(max(k, 0), EPS_BINS - 1)


def power_sweep(spf, s_lo, s_hi, m, mode=0):
    spf = spf.tolist() if hasattr(spf, "tolist") else spf
    st = dict(
        triples=0,
        chain1_violations=0,
        chain2_violations=0,
        powerfree_violations=0,
        eps_min=math.inf,
        eps_max=-math.inf,
        eps_sum=0.0,
        eps_sumsq=0.0,
    )
    hist = np.zeros(EPS_BINS, dtype=np.int64)
    rows = []
    for a, s in _pairs(s_lo, s_hi):
        b = s - a
        st["triples"] += 1
        rad = 1
        lograd = 0.0
        U = X = 1
        pf = True
        for v in (a, b, -s):
            u = x = 1
            for p, e in _factor(spf, abs(v)):
                rad *= p
                lograd += math.log(p)
                q, r = divmod(e, m)
                x *= p**q
                u *= p**r
                if r >= m:
                    pf = False
            if v < 0:
                u = -u
            if u * x**m != v:
                pf = False
            U = max(U, abs(u))
            X = max(X, x)
        M = s
        c1 = U <= rad ** (m - 1)
        c2 = M <= U * X**m
        h_abc, h_uvw, h_xyz = math.log(M), math.log(U), math.log(X)
        eps = (h_xyz - h_uvw) / h_abc
        st["chain1_violations"] += not c1
        st["chain2_violations"] += not c2
        st["powerfree_violations"] += not pf
        st["eps_min"] = min(st["eps_min"], eps)
        st["eps_max"] = max(st["eps_max"], eps)
        st["eps_sum"] += eps
        st["eps_sumsq"] += eps * eps
        hist[_eps_bin(eps)] += 1
        if mode == 2 or (mode == 1 and not (c1 and c2 and pf)):
            rows.append((a, b, h_abc, h_uvw, h_xyz, lograd, c1, c2, eps))
    st["hist"] = hist
    out = None
    if mode:
        out = {}
        for i, k in enumerate(POWER_COLS):
            vals = [r[i] for r in rows]
            dt = np.int64 if k in ("a", "b") else bool if k.endswith("_ok") else np.float64
            out[k] = np.asarray(vals, dtype=dt)
    return st, out
