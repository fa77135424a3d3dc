"""The numba kernels and the numpy fallbacks must agree entry for entry."""

import os
import random
import subprocess
import sys

import numpy as np
import pytest

from tensorsym import _kernels_numpy

numba_kernels = pytest.importorskip("tensorsym._kernels_numba")


def _random_int_matrix(rng, rows, cols, lo, hi):
    return np.array(
        [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], np.int64
    )


@pytest.mark.parametrize("p", [2, 5, 101, 1000003])
def test_rref_mod_backends_agree(p):
    rng = random.Random(p)
    for _ in range(20):
        rows, cols = rng.randint(1, 12), rng.randint(1, 12)
        m = _random_int_matrix(rng, rows, cols, 0, p - 1)
        r1, rank1, piv1 = numba_kernels.rref_mod(m.copy(), p)
        r2, rank2, piv2 = _kernels_numpy.rref_mod(m.copy(), p)
        assert rank1 == rank2
        assert np.array_equal(np.asarray(piv1), np.asarray(piv2))
        assert np.array_equal(r1, r2)


def test_rref_int_backends_agree():
    rng = random.Random(0)
    for _ in range(30):
        rows, cols = rng.randint(1, 10), rng.randint(1, 8)
        m = _random_int_matrix(rng, rows, cols, -5, 5)
        ok1, rank1, piv1 = numba_kernels.rref_int(m.copy())
        ok2, rank2, piv2 = _kernels_numpy.rref_int(m.copy())
        assert ok1 == ok2
        if ok1:
            assert rank1 == rank2 and np.array_equal(np.asarray(piv1), np.asarray(piv2))
            m1 = m.copy()
            m2 = m.copy()
            numba_kernels.rref_int(m1)
            _kernels_numpy.rref_int(m2)
            assert np.array_equal(m1, m2)


def test_rref_int_overflow_guard_trips():
    rng = random.Random(1)
    m = _random_int_matrix(rng, 40, 40, -9, 9)
    ok_nb = numba_kernels.rref_int(m.copy())[0]
    ok_np = _kernels_numpy.rref_int(m.copy())[0]
    # dense random 40x40 blows past int64 under cross-multiplication
    assert ok_nb == ok_np
    assert not ok_nb


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, TENSORSYM_BACKEND="numpy")
    out = subprocess.run(
        [sys.executable, "-c", "import tensorsym.backend as b; print(b.BACKEND_NAME)"],
        env=env,
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "numpy"


def test_env_flag_rejects_unknown():
    env = dict(os.environ, TENSORSYM_BACKEND="cuda")
    out = subprocess.run(
        [sys.executable, "-c", "import tensorsym.backend"],
        env=env,
        capture_output=True,
        text=True,
    )
    assert out.returncode != 0
    assert "TENSORSYM_BACKEND" in out.stderr
