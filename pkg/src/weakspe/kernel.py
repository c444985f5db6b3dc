"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set ``WEAKSPE_PURE_KERNEL=1`` to force the pure twin (used by the backend
equivalence tests and the benchmark).  The compiled kernel packs pair masks
into 64-bit words, so constraint systems with more than 64 pairs always take
the pure lane.
"""

from __future__ import annotations

import os
from array import array

from . import _pykernel

_cimpl = None
if os.environ.get("WEAKSPE_PURE_KERNEL") != "1":
    try:
        from . import _ckernel as _cimpl  # type: ignore[no-redef]
    except ImportError:
        _cimpl = None

BACKEND = "c" if _cimpl is not None else "pure"


def sccs(nv, succ_flat, succ_off, members):
    if _cimpl is not None:
        return _cimpl.sccs(nv, succ_flat, succ_off, list(members))
    return _pykernel.sccs(nv, succ_flat, succ_off, members)


def streett_good_sets(nv, succ_flat, succ_off, members, g_masks, r_masks, npairs):
    if _cimpl is not None and npairs <= 64:
        return _cimpl.streett_good_sets(
            nv, succ_flat, succ_off, list(members), array("Q", g_masks), array("Q", r_masks)
        )
    return _pykernel.streett_good_sets(nv, succ_flat, succ_off, members, g_masks, r_masks)


def closure_to(nv, pred_flat, pred_off, allowed, seeds):
    if _cimpl is not None:
        return _cimpl.closure_to(nv, pred_flat, pred_off, allowed, list(seeds))
    return _pykernel.closure_to(nv, pred_flat, pred_off, allowed, seeds)


def reach_from(nv, succ_flat, succ_off, allowed, start):
    if _cimpl is not None:
        return _cimpl.reach_from(nv, succ_flat, succ_off, allowed, start)
    return _pykernel.reach_from(nv, succ_flat, succ_off, allowed, start)
