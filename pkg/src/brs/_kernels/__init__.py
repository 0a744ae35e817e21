"""Kernel backend selection: compiled extension when available, numpy fallback
otherwise.  Set BRS_PURE_PYTHON=1 to force the fallback.
"""
from __future__ import annotations

import os

from . import pure

CHUNK = pure.CHUNK

_FAST_KINDS = {"intervals1d", "ppiped", "convex_polygon"}

if os.environ.get("BRS_PURE_PYTHON"):
    _fast = None
else:
    try:
        from . import _fast
    except ImportError:
        _fast = None

BACKEND = "compiled" if _fast is not None else "pure"


def have_fast() -> bool:
    return _fast is not None


def discrepancy_scan(spec, vol, bases, alpha, N, checkpoints):
    if _fast is not None and spec["kind"] in _FAST_KINDS:
        return _fast.discrepancy_scan(spec, float(vol), bases, alpha,
                                      int(N), checkpoints)
    return pure.discrepancy_scan(spec, float(vol), bases, alpha,
                                 int(N), checkpoints)


def multiplicity_batch(spec, X):
    if _fast is not None and spec["kind"] in _FAST_KINDS:
        return _fast.multiplicity_batch(spec, X)
    return pure.multiplicity_batch(spec, X)


def indicator(spec, Y):
    return pure.indicator(spec, Y)


def transfer_crossings_batch(targets, x0, facets, tol=1e-12):
    if _fast is not None:
        return _fast.transfer_crossings_batch(targets, x0, facets, float(tol))
    return pure.transfer_crossings_batch(targets, x0, facets, tol)
