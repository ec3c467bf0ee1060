# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep kernels.  Same contract as ``_pykernels``.

Integer checks run in 64-bit arithmetic with saturation at 2**62; every
quantity that is legitimately compared stays far below that for a + b <= MAX_BOUND,
and a saturated value is always reported as a violation, never as a pass.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport log

cnp.import_array()

NAME = "cython"

cdef extern from *:
    """
    #define ABCLAB_SAT 4611686018427387904LL
    """
    const long long SAT "ABCLAB_SAT"  # 2**62

cdef enum:
    MAXN = 64

# M**3 must fit below SAT
MAX_BOUND = 1_600_000
MAX_N = MAXN

EPS_LO, EPS_HI, EPS_BINS = -1.0, 0.5, 60

cdef extern from *:
    ctypedef long long i128 "__int128"


cdef inline long long smul(long long a, long long b) nogil:
    if a == 0 or b == 0:
        return 0
    if a >= SAT or b >= SAT or a > SAT // b:
        return SAT
    return a * b


cdef inline long long spow(long long p, long long k) nogil:
    cdef long long out = 1
    while k > 0:
        out = smul(out, p)
        k -= 1
    return out


cdef inline long long cgcd(long long a, long long b) nogil:
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef inline long long lmax(long long a, long long b) nogil:
    return a if a > b else b


cdef long long _count(long long s_lo, long long s_hi) nogil:
    cdef long long s, a, total = 0
    if s_lo < 2:
        s_lo = 2
    for s in range(s_lo, s_hi + 1):
        for a in range(1, s // 2 + 1):
            if cgcd(s, a) == 1:
                total += 1
    return total


def count_pairs(long long s_lo, long long s_hi):
    return _count(s_lo, s_hi)


def _check_args(spf, long long s_hi, int n=1):
    if s_hi > MAX_BOUND:
        raise ValueError(f"compiled kernels support a + b <= {MAX_BOUND}")
    if s_hi >= spf.shape[0]:
        raise ValueError("sieve table too small for this range")
    if n < 1 or n > MAXN:
        raise ValueError(f"compiled kernels support 1 <= n <= {MAXN}")


def triple_rows(const cnp.int32_t[::1] spf, long long s_lo, long long s_hi, double eps, double min_quality):
    _check_args(spf, s_hi)
    cdef long long cap = _count(s_lo, s_hi)
    out_a = np.empty(cap, dtype=np.int64)
    out_b = np.empty(cap, dtype=np.int64)
    out_h = np.empty(cap, dtype=np.float64)
    out_lr = np.empty(cap, dtype=np.float64)
    out_q = np.empty(cap, dtype=np.float64)
    out_mg = np.empty(cap, dtype=np.float64)
    cdef long long[::1] va = out_a
    cdef long long[::1] vb = out_b
    cdef double[::1] vh = out_h
    cdef double[::1] vlr = out_lr
    cdef double[::1] vq = out_q
    cdef double[::1] vmg = out_mg
    cdef long long s, a, k = 0, v, mm, p
    cdef int j
    cdef double lr, h, q
    if s_lo < 2:
        s_lo = 2
    with nogil:
        for s in range(s_lo, s_hi + 1):
            h = log(<double>s)
            for a in range(1, s // 2 + 1):
                if cgcd(s, a) != 1:
                    continue
                lr = 0.0
                for j in range(3):
                    v = a if j == 0 else (s - a if j == 1 else s)
                    mm = v
                    while mm > 1:
                        p = spf[mm]
                        lr += log(<double>p)
                        while mm % p == 0:
                            mm //= p
                q = h / lr
                if q < min_quality:
                    continue
                va[k] = a
                vb[k] = s - a
                vh[k] = h
                vlr[k] = lr
                vq[k] = q
                vmg[k] = lr - (1.0 - eps) * h
                k += 1
    return {
        "a": out_a[:k].copy(),
        "b": out_b[:k].copy(),
        "h": out_h[:k].copy(),
        "log_rad": out_lr[:k].copy(),
        "quality": out_q[:k].copy(),
        "margin": out_mg[:k].copy(),
    }


def gamma_sweep(const cnp.int32_t[::1] spf, long long s_lo, long long s_hi, int n, int mode=0, bint fault=False):
    _check_args(spf, s_hi, n)
    cdef long long parts[3][MAXN + 1]
    cdef long long prods[3]
    cdef int sat[3]
    cdef int neg[3]
    cdef long long vals[3]
    cdef long long s, a, b, v, mm, p, e, q, r, e_d, M, M3, maxprod, cor_lhs, nd_abs, g, t
    cdef int i, j, rec, eqs, eq34, l35, c36, l311, ok
    cdef double lograd, N_D, N_E, h, s35, s36, s311, lognd, logmax
    cdef i128 wide
    cdef long long n_tri = 0, v_rec = 0, v_eqs = 0, v_eq34 = 0, v_l35 = 0, v_c36 = 0, v_l311 = 0
    cdef double m35 = 1e300, m36 = 1e300, m311 = 1e300
    cdef long long cap = _count(s_lo, s_hi) if mode == 2 else 0
    cdef long long k = 0
    ra = np.empty(cap, dtype=np.int64)
    rb = np.empty(cap, dtype=np.int64)
    r35 = np.empty(cap, dtype=np.uint8)
    rs35 = np.empty(cap, dtype=np.float64)
    r36 = np.empty(cap, dtype=np.uint8)
    r311 = np.empty(cap, dtype=np.uint8)
    r34 = np.empty(cap, dtype=np.uint8)
    req = np.empty(cap, dtype=np.uint8)
    cdef long long[::1] va = ra
    cdef long long[::1] vb = rb
    cdef unsigned char[::1] v35 = r35
    cdef double[::1] vs35 = rs35
    cdef unsigned char[::1] v36 = r36
    cdef unsigned char[::1] v311 = r311
    cdef unsigned char[::1] v34 = r34
    cdef unsigned char[::1] veq = req
    viol = []
    if s_lo < 2:
        s_lo = 2
    for s in range(s_lo, s_hi + 1):
        M = s
        M3 = smul(smul(M, M), M)
        h = log(<double>M)
        for a in range(1, s // 2 + 1):
            if cgcd(s, a) != 1:
                continue
            b = s - a
            n_tri += 1
            vals[0] = a
            vals[1] = b
            vals[2] = -s
            lograd = 0.0
            l35 = 1
            cor_lhs = 1
            for j in range(3):
                for i in range(n + 1):
                    parts[j][i] = 1
                neg[j] = 1 if vals[j] < 0 else 0
                mm = vals[j] if vals[j] > 0 else -vals[j]
                while mm > 1:
                    p = spf[mm]
                    e = 0
                    while mm % p == 0:
                        mm //= p
                        e += 1
                    lograd += log(<double>p)
                    q = e // n
                    r = e % n
                    parts[j][n] = smul(parts[j][n], spow(p, q))
                    if r:
                        parts[j][r] = smul(parts[j][r], p)
                    e_d = q + (1 if r else 0)
                    if n * e_d > n + e:
                        l35 = 0
                    cor_lhs = smul(cor_lhs, spow(p, n * (e_d - 1)))
            if fault:
                neg[0] = 1 - neg[0]
            # prod_i x_i^i with the sign carried by x_1
            for j in range(3):
                t = 1
                for i in range(1, n + 1):
                    t = smul(t, spow(parts[j][i], i))
                sat[j] = t >= SAT
                prods[j] = -t if neg[j] else t
            rec = (not sat[0] and not sat[1] and not sat[2]
                   and prods[0] == a and prods[1] == b and prods[2] == -s)
            if sat[0] or sat[1] or sat[2]:
                eqs = 0
            else:
                wide = <i128>prods[0] + <i128>prods[1] + <i128>prods[2]
                eqs = wide == 0 and a + b - s == 0
                if eqs:
                    eqs = (<i128>a) * (<i128>prods[1]) == (<i128>b) * (<i128>prods[0])
            g = cgcd(cgcd(a, b), s)
            eq34 = g == 1 and lmax(lmax(a // g, b // g), s // g) == M
            maxprod = 1
            nd_abs = 1
            lognd = 0.0
            logmax = 0.0
            for i in range(1, n + 1):
                t = lmax(lmax(parts[0][i], parts[1][i]), parts[2][i])
                maxprod = smul(maxprod, t)
                logmax += log(<double>t)
                lognd += log(<double>parts[0][i]) + log(<double>parts[1][i]) + log(<double>parts[2][i])
            l311 = maxprod < SAT and maxprod <= M3
            c36 = cor_lhs < SAT and cor_lhs <= M3
            N_D = lognd
            N_E = log(<double>a) + log(<double>b) + h
            s35 = lograd + N_E / n - N_D
            s36 = lograd + 3.0 / n * h - N_D
            s311 = 3.0 * h - logmax
            v_rec += not rec
            v_eqs += not eqs
            v_eq34 += not eq34
            v_l35 += not l35
            v_c36 += not c36
            v_l311 += not l311
            if s35 < m35:
                m35 = s35
            if s36 < m36:
                m36 = s36
            if s311 < m311:
                m311 = s311
            ok = rec and eqs and eq34 and l35 and c36 and l311
            if mode == 2:
                va[k] = a
                vb[k] = b
                v35[k] = l35
                vs35[k] = s35
                v36[k] = c36
                v311[k] = l311
                v34[k] = eq34
                veq[k] = rec and eqs
                k += 1
            elif mode == 1 and not ok:
                viol.append((a, b, bool(l35), s35, bool(c36), bool(l311), bool(eq34), bool(rec and eqs)))
    stats = dict(
        triples=n_tri,
        reconstruction_violations=v_rec,
        equations_violations=v_eqs,
        eq34_violations=v_eq34,
        lemma35_violations=v_l35,
        cor36_violations=v_c36,
        lemma311_violations=v_l311,
        min_lemma35_slack=m35 if n_tri else float("inf"),
        min_cor36_slack=m36 if n_tri else float("inf"),
        min_lemma311_slack=m311 if n_tri else float("inf"),
    )
    if mode == 0:
        return stats, None
    if mode == 2:
        rows = dict(a=ra, b=rb, lemma35_ok=r35.view(bool), lemma35_slack=rs35, cor36_ok=r36.view(bool),
                    lemma311_ok=r311.view(bool), eq34_ok=r34.view(bool), equations_ok=req.view(bool))
        return stats, rows
    cols = ("a", "b", "lemma35_ok", "lemma35_slack", "cor36_ok", "lemma311_ok", "eq34_ok", "equations_ok")
    rows = {}
    for i, key in enumerate(cols):
        data = [row[i] for row in viol]
        if key in ("a", "b"):
            rows[key] = np.asarray(data, dtype=np.int64)
        elif key == "lemma35_slack":
            rows[key] = np.asarray(data, dtype=np.float64)
        else:
            rows[key] = np.asarray(data, dtype=bool)
    return stats, rows


def power_sweep(const cnp.int32_t[::1] spf, long long s_lo, long long s_hi, int m, int mode=0):
    _check_args(spf, s_hi)
    if m < 2:
        raise ValueError("m must be >= 2")
    cdef long long vals[3]
    cdef long long s, a, b, v, mm, p, e, q, r, u, x, U, X, rad, M, absv
    cdef int j, c1, c2, pf
    cdef double lograd, h_abc, h_uvw, h_xyz, eps
    cdef long long n_tri = 0, v1 = 0, v2 = 0, vpf = 0
    cdef double emin = 1e300, emax = -1e300, esum = 0.0, esq = 0.0
    cdef int kbin
    hist = np.zeros(EPS_BINS, dtype=np.int64)
    cdef long long[::1] vh = hist
    cdef long long cap = _count(s_lo, s_hi) if mode == 2 else 0
    cdef long long k = 0
    cols = ("a", "b", "h_abc", "h_uvw", "h_xyz", "n_abc", "chain1_ok", "chain2_ok", "eps_emp")
    arrs = {
        "a": np.empty(cap, dtype=np.int64), "b": np.empty(cap, dtype=np.int64),
        "h_abc": np.empty(cap), "h_uvw": np.empty(cap), "h_xyz": np.empty(cap), "n_abc": np.empty(cap),
        "chain1_ok": np.empty(cap, dtype=np.uint8), "chain2_ok": np.empty(cap, dtype=np.uint8),
        "eps_emp": np.empty(cap),
    }
    cdef long long[::1] wa = arrs["a"]
    cdef long long[::1] wb = arrs["b"]
    cdef double[::1] wh1 = arrs["h_abc"]
    cdef double[::1] wh2 = arrs["h_uvw"]
    cdef double[::1] wh3 = arrs["h_xyz"]
    cdef double[::1] wn = arrs["n_abc"]
    cdef unsigned char[::1] wc1 = arrs["chain1_ok"]
    cdef unsigned char[::1] wc2 = arrs["chain2_ok"]
    cdef double[::1] we = arrs["eps_emp"]
    viol = []
    if s_lo < 2:
        s_lo = 2
    for s in range(s_lo, s_hi + 1):
        M = s
        h_abc = log(<double>M)
        for a in range(1, s // 2 + 1):
            if cgcd(s, a) != 1:
                continue
            b = s - a
            n_tri += 1
            vals[0] = a
            vals[1] = b
            vals[2] = -s
            rad = 1
            lograd = 0.0
            U = 1
            X = 1
            pf = 1
            for j in range(3):
                absv = vals[j] if vals[j] > 0 else -vals[j]
                mm = absv
                u = 1
                x = 1
                while mm > 1:
                    p = spf[mm]
                    e = 0
                    while mm % p == 0:
                        mm //= p
                        e += 1
                    rad = smul(rad, p)
                    lograd += log(<double>p)
                    q = e // m
                    r = e % m
                    x = smul(x, spow(p, q))
                    u = smul(u, spow(p, r))
                    if r >= m:
                        pf = 0
                if smul(u, spow(x, m)) != absv:
                    pf = 0
                U = lmax(U, u)
                X = lmax(X, x)
            c1 = U <= spow(rad, m - 1)
            c2 = M <= smul(U, spow(X, m))
            h_uvw = log(<double>U)
            h_xyz = log(<double>X)
            eps = (h_xyz - h_uvw) / h_abc
            v1 += not c1
            v2 += not c2
            vpf += not pf
            if eps < emin:
                emin = eps
            if eps > emax:
                emax = eps
            esum += eps
            esq += eps * eps
            kbin = <int>((eps - EPS_LO) / (EPS_HI - EPS_LO) * EPS_BINS)
            if kbin < 0:
                kbin = 0
            if kbin > EPS_BINS - 1:
                kbin = EPS_BINS - 1
            vh[kbin] += 1
            if mode == 2:
                wa[k] = a
                wb[k] = b
                wh1[k] = h_abc
                wh2[k] = h_uvw
                wh3[k] = h_xyz
                wn[k] = lograd
                wc1[k] = c1
                wc2[k] = c2
                we[k] = eps
                k += 1
            elif mode == 1 and not (c1 and c2 and pf):
                viol.append((a, b, h_abc, h_uvw, h_xyz, lograd, bool(c1), bool(c2), eps))
    stats = dict(
        triples=n_tri,
        chain1_violations=v1,
        chain2_violations=v2,
        powerfree_violations=vpf,
        eps_min=emin if n_tri else float("inf"),
        eps_max=emax if n_tri else float("-inf"),
        eps_sum=esum,
        eps_sumsq=esq,
        hist=hist,
    )
    if mode == 0:
        return stats, None
    if mode == 2:
        arrs["chain1_ok"] = arrs["chain1_ok"].view(bool)
        arrs["chain2_ok"] = arrs["chain2_ok"].view(bool)
        return stats, arrs
    rows = {}
    for i, key in enumerate(cols):
        data = [row[i] for row in viol]
        dt = np.int64 if key in ("a", "b") else (bool if key.endswith("_ok") else np.float64)
        rows[key] = np.asarray(data, dtype=dt)
    return stats, rows
