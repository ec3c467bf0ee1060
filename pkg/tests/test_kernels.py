import math

import numpy as np
import pytest

from abclab import kernels
from abclab.arith import build_spf_sieve
from abclab.complements import build_power_point, power_chain_report
from abclab.gamma import enumerate_triples, verify_triple

BOUND = 300
needs_c = pytest.mark.skipif("cython" not in kernels.BACKENDS, reason="compiled kernels not built")


@pytest.fixture(scope="module")
def spf():
    return build_spf_sieve(BOUND).spf


def _same(x, y):
    if isinstance(x, dict):
        return x.keys() == y.keys() and all(_same(x[k], y[k]) for k in x)
    if isinstance(x, tuple):
        return len(x) == len(y) and all(_same(a, b) for a, b in zip(x, y))
    if hasattr(x, "tolist"):
        return np.allclose(x, y, rtol=1e-12, atol=1e-12) if x.dtype.kind == "f" else x.tolist() == y.tolist()
    if isinstance(x, float):
        return math.isclose(x, y, rel_tol=1e-12, abs_tol=1e-12)
    return x == y


def test_backend_lookup():
    assert kernels.get_backend("python").NAME == "python"
    assert kernels.get_backend() is kernels.active
    with pytest.raises(LookupError):
        kernels.get_backend("fortran")


@needs_c
@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
@pytest.mark.parametrize("mode", [0, 2])
def test_gamma_backends_agree(spf, n, mode):
    py = kernels.get_backend("python").gamma_sweep(spf, 2, BOUND, n, mode)
    cy = kernels.get_backend("cython").gamma_sweep(spf, 2, BOUND, n, mode)
    assert _same(py[0], cy[0])
    assert (py[1] is None and cy[1] is None) or _same(py[1], cy[1])


@needs_c
@pytest.mark.parametrize("fault", [False, True])
def test_gamma_fault_rows_agree(spf, fault):
    py = kernels.get_backend("python").gamma_sweep(spf, 2, 100, 3, 1, fault)
    cy = kernels.get_backend("cython").gamma_sweep(spf, 2, 100, 3, 1, fault)
    assert _same(py, cy)
    assert (py[0]["reconstruction_violations"] > 0) == fault


@needs_c
@pytest.mark.parametrize("m", [2, 4, 5])
def test_power_backends_agree(spf, m):
    py = kernels.get_backend("python").power_sweep(spf, 2, BOUND, m, 2)
    cy = kernels.get_backend("cython").power_sweep(spf, 2, BOUND, m, 2)
    assert _same(py, cy)


@needs_c
def test_triple_rows_agree(spf):
    py = kernels.get_backend("python").triple_rows(spf, 2, BOUND, 0.1, 1.0)
    cy = kernels.get_backend("cython").triple_rows(spf, 2, BOUND, 0.1, 1.0)
    assert _same(py, cy)
    assert kernels.get_backend("cython").count_pairs(2, BOUND) == kernels.get_backend("python").count_pairs(2, BOUND)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_kernel_matches_object_level(spf, n):
    stats, rows = kernels.active.gamma_sweep(spf, 2, 120, n, 2)
    triples = list(enumerate_triples(120))
    assert stats["triples"] == len(triples) == len(rows["a"])
    for i, t in enumerate(triples):
        rep = verify_triple(t, n)
        assert (rows["a"][i], rows["b"][i]) == (t.a, t.b)
        assert bool(rows["lemma35_ok"][i]) == rep.lemma35_ok
        assert bool(rows["cor36_ok"][i]) == rep.cor36_ok
        assert bool(rows["lemma311_ok"][i]) == rep.lemma311_ok
        assert rows["lemma35_slack"][i] == pytest.approx(rep.lemma35_slack, abs=1e-9)


def test_power_kernel_matches_object_level(spf):
    stats, rows = kernels.active.power_sweep(spf, 2, 120, 5, 2)
    for i, t in enumerate(enumerate_triples(120)):
        r = power_chain_report(build_power_point(t, 5))
        assert rows["eps_emp"][i] == pytest.approx(r.eps_emp, abs=1e-12)
        assert rows["h_uvw"][i] == pytest.approx(r.h_uvw, abs=1e-12)
        assert bool(rows["chain1_ok"][i]) == r.chain1_ok and bool(rows["chain2_ok"][i]) == r.chain2_ok


def test_gamma_rows_violations_only_empty_when_clean(spf):
    stats, rows = kernels.active.gamma_sweep(spf, 2, BOUND, 3, 1)
    assert stats["lemma35_violations"] == 0 and len(rows["a"]) == 0


@needs_c
def test_compiled_kernel_rejects_oversized_inputs(spf):
    ck = kernels.get_backend("cython")
    with pytest.raises(ValueError):
        ck.gamma_sweep(spf, 2, BOUND + 5, 3)
