import os
import random
import subprocess
import sys

import numpy as np
import pytest

import oracles
from fairdiv import _pykernels, kernels
from fairdiv.core import Instance, random_instance

compiled = pytest.importorskip("fairdiv._kernels") if kernels.BACKEND == "cython" else None


def matrix(inst):
    return kernels.integer_matrix(*inst.scaled())


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_fallback_table_matches_oracle():
    inst = random_instance(3, 4, random.Random(2))
    table = kernels.utility_table(matrix(inst), backend=_pykernels)
    scale, _ = inst.scaled()
    for k, owner in enumerate(oracles.allocations(3, 4)):
        assert tuple(int(v) for v in table[k]) == tuple(int(u * scale) for u in oracles.utilities(inst.utilities, owner))


def test_flags_match_oracle():
    inst = random_instance(3, 4, random.Random(8))
    u = inst.utilities
    ef1, efx, bal = kernels.envy_flags(matrix(inst), backend=_pykernels)
    for k, owner in enumerate(oracles.allocations(3, 4)):
        assert ef1[k] == oracles.ef1(u, owner)
        assert efx[k] == oracles.efx(u, owner)
        assert bal[k] == oracles.balanced(u, owner)


@pytest.mark.skipif(compiled is None, reason="compiled kernels not built")
def test_compiled_and_fallback_agree():
    rng = random.Random(17)
    for _ in range(25):
        n = rng.randint(1, 4)
        inst = random_instance(n, rng.randint(1, 6), rng)
        A = matrix(inst)
        for workers in (1, 3):
            t_py = kernels.utility_table(A, workers, backend=_pykernels)
            t_cy = kernels.utility_table(A, workers, backend=compiled)
            assert np.array_equal(t_py, t_cy)
            for a, b in zip(kernels.envy_flags(A, workers, backend=_pykernels), kernels.envy_flags(A, workers, backend=compiled)):
                assert np.array_equal(a, b)
        uniq = np.unique(t_py, axis=0)
        assert np.array_equal(kernels.pareto_mask(uniq, backend=_pykernels), kernels.pareto_mask(uniq, backend=compiled))


def test_worker_split_does_not_change_results():
    inst = random_instance(3, 5, random.Random(4))
    A = matrix(inst)
    base = kernels.utility_table(A, 1)
    for workers in (2, 5, 300):
        assert np.array_equal(kernels.utility_table(A, workers), base)
        for a, b in zip(kernels.envy_flags(A, 1), kernels.envy_flags(A, workers)):
            assert np.array_equal(a, b)


def test_huge_denominators_use_python_ints():
    p, q = 2**61 - 1, 2**59 - 55
    inst = Instance.from_rows([[1, p - 1], [q - 1, 1], [1, 1]])
    A = matrix(inst)
    assert A.dtype == object
    table = kernels.utility_table(A)
    scale, rows = inst.scaled()
    assert int(table[-1].sum()) == rows[2][0] + rows[2][1]
    ef1, _, _ = kernels.envy_flags(A)
    for k, owner in enumerate(oracles.allocations(3, 2)):
        assert ef1[k] == oracles.ef1(inst.utilities, owner)


def test_pareto_mask_small():
    U = np.array([[3, 0], [2, 2], [1, 1], [0, 3], [2, 1]], dtype=np.int64)
    assert kernels.pareto_mask(U).tolist() == [True, True, False, True, False]


def test_forced_fallback_via_environment():
    env = dict(os.environ, FAIRDIV_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from fairdiv import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
