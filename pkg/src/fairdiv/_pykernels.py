"""Pure-Python (numpy) implementations of the enumeration kernels.

Same contract as the compiled ``_kernels`` module.  These also accept
``dtype=object`` matrices of Python ints, which is how instances whose scaled
utilities do not fit in int64 are handled.

Allocation ``k`` of an (n, m) instance is the base-n expansion of ``k`` with
good 0 as the most significant digit, so index order is lexicographic order
of owner vectors.
"""

import numpy as np

_CHUNK = 1 << 15


def owner_digits(start, stop, n, m):
    idx = np.arange(start, stop, dtype=np.int64)
    powers = n ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % n


def fill_utility_table(A, out, start, stop):
    n, m = A.shape
    for lo in range(start, stop, _CHUNK):
        hi = min(stop, lo + _CHUNK)
        digits = owner_digits(lo, hi, n, m)
        for i in range(n):
            out[lo:hi, i] = np.where(digits == i, A[i][None, :], 0).sum(axis=1)


def fill_envy_flags(A, ef1, efx, bal, start, stop):
    n, m = A.shape
    big = int(A.sum()) + 1
    for lo in range(start, stop, _CHUNK):
        hi = min(stop, lo + _CHUNK)
        digits = owner_digits(lo, hi, n, m)
        masks = [digits == o for o in range(n)]
        counts = np.stack([mk.sum(axis=1) for mk in masks], axis=1)
        ok1 = np.ones(hi - lo, dtype=bool)
        okx = np.ones(hi - lo, dtype=bool)
        for i in range(n):
            row = A[i][None, :]
            own = np.where(masks[i], row, 0).sum(axis=1)
            for o in range(n):
                if o == i:
                    continue
                vals = np.where(masks[o], row, 0)
                other = vals.sum(axis=1)
                ok1 &= own >= other - vals.max(axis=1)
                least = np.where(masks[o], row, big).min(axis=1)
                okx &= own >= other - least
        ef1[lo:hi] = ok1
        efx[lo:hi] = okx
        bal[lo:hi] = counts.max(axis=1) - counts.min(axis=1) <= 1


def pareto_mask_sorted(U, order, sums):
    """Non-dominated rows of ``U`` (rows distinct), visiting rows in ``order``.

    ``order`` must list rows by non-increasing ``sums``; a dominating row
    always has a strictly larger sum, so only earlier front members matter.
    """
    K, n = U.shape
    mask = np.zeros(K, dtype=bool)
    front = np.empty_like(U)
    front_sums = np.empty_like(sums)
    f = 0
    for r in order:
        row = U[r]
        if f:
            dominated = np.all(front[:f] >= row, axis=1) & (front_sums[:f] > sums[r])
            if dominated.any():
                continue
        mask[r] = True
        front[f] = row
        front_sums[f] = sums[r]
        f += 1
    return mask
