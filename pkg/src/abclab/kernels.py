"""Backend selection for the sweep kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise, or when
``ABCLAB_PURE_PYTHON=1`` is set, the pure-Python ``_pykernels`` takes over.
Both expose ``NAME``, ``count_pairs``, ``triple_rows``, ``gamma_sweep`` and
``power_sweep`` with identical results.
"""
import importlib
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

if os.environ.get("ABCLAB_PURE_PYTHON") or _ckernels is None:
    active = _pykernels
else:
    active = _ckernels

BACKEND = active.NAME
EPS_LO, EPS_HI, EPS_BINS = _pykernels.EPS_LO, _pykernels.EPS_HI, _pykernels.EPS_BINS
GAMMA_COLS, POWER_COLS = _pykernels.GAMMA_COLS, _pykernels.POWER_COLS


def get_backend(name=None):
    """The named backend module, or the active one when ``name`` is None."""
    if name is None:
        return active
    if name not in BACKENDS:
        raise LookupError(f"kernel backend {name!r} is not available (have {sorted(BACKENDS)})")
    return BACKENDS[name]


def reload():
    """Re-run backend selection (after changing ABCLAB_PURE_PYTHON)."""
    from . import kernels

    return importlib.reload(kernels)
