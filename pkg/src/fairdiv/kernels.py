"""Backend selection for the enumeration kernels.

The compiled Cython module is used when it was built and the scaled utility
matrix fits in int64; otherwise the numpy fallback runs (on object arrays of
Python ints if necessary).  Set ``FAIRDIV_PURE_PYTHON=1`` to force the
fallback.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from fairdiv import _pykernels

try:
    if os.environ.get("FAIRDIV_PURE_PYTHON"):
        raise ImportError("fallback forced by FAIRDIV_PURE_PYTHON")
    from fairdiv import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

# per-agent utilities are at most the common scale, sums at most n * scale
INT64_SAFE = 2**62


def integer_matrix(scale: int, rows: list[list[int]]) -> np.ndarray:
    n = len(rows)
    if n * scale < INT64_SAFE:
        return np.ascontiguousarray(np.array(rows, dtype=np.int64).reshape(n, -1))
    out = np.empty((n, len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out


def _impl(A: np.ndarray):
    if _compiled is not None and A.dtype == np.int64:
        return _compiled
    return _pykernels


def _ranges(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, total or 1))
    step = -(-total // workers) if total else 0
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)] if total else []


def _run(fn, total: int, workers: int, *args) -> None:
    spans = _ranges(total, workers)
    if len(spans) <= 1:
        for lo, hi in spans:
            fn(*args, lo, hi)
        return
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        for fut in [pool.submit(fn, *args, lo, hi) for lo, hi in spans]:
            fut.result()


def utility_table(A: np.ndarray, workers: int = 1, backend=None) -> np.ndarray:
    """(n**m, n) table of every allocation's scaled utility vector."""
    impl = backend or _impl(A)
    n, m = A.shape
    total = n**m
    out = np.zeros((total, n), dtype=A.dtype)
    _run(impl.fill_utility_table, total, workers, A, out)
    return out


def envy_flags(A: np.ndarray, workers: int = 1, backend=None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-allocation EF1, EFX and balancedness flags."""
    impl = backend or _impl(A)
    n, m = A.shape
    total = n**m
    ef1 = np.zeros(total, dtype=np.uint8)
    efx = np.zeros(total, dtype=np.uint8)
    bal = np.zeros(total, dtype=np.uint8)
    _run(impl.fill_envy_flags, total, workers, A, ef1, efx, bal)
    return ef1.astype(bool), efx.astype(bool), bal.astype(bool)


def pareto_mask(U: np.ndarray, backend=None) -> np.ndarray:
    """Mask of non-dominated rows among distinct utility vectors ``U``."""
    impl = backend or _impl(U)
    sums = U.sum(axis=1)
    order = np.argsort(-sums, kind="stable").astype(np.int64)
    if impl is _compiled:
        return impl.pareto_mask_sorted(np.ascontiguousarray(U), order, np.ascontiguousarray(sums))
    return impl.pareto_mask_sorted(U, order, sums)
