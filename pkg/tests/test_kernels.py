import os
import subprocess
import sys

import numpy as np
from hypothesis import given, settings, strategies as st

from ionic_cdw import _kernels
from ionic_cdw.contours import neighbour_table
from ionic_cdw.lattice import geometric_torus


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.booleans()), min_size=1, max_size=5))
def test_monomial_paths_agree(ops):
    modes = [m for m, _ in ops]
    daggers = [d for _, d in ops]
    a = _kernels.monomial_action(modes, daggers, 256, use_numba=True)
    b = _kernels.monomial_action(modes, daggers, 256, use_numba=False)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_occupations_paths_agree():
    assert np.array_equal(_kernels.occupations(8, True), _kernels.occupations(8, False))


def test_redelmeier_paths_agree():
    t = geometric_torus(4)
    nbr, deg = neighbour_table(t)
    out = []
    for flag in (True, False):
        hist = np.zeros((7, 25), dtype=np.int64)
        buf = np.empty((4096, 6), dtype=np.int64)
        n = _kernels.redelmeier(nbr, deg, 0, True, 6, 6, buf, hist, use_numba=flag)
        out.append((n, hist.copy(), np.sort(buf[:n], axis=1)))
    assert out[0][0] == out[1][0]
    assert np.array_equal(out[0][1], out[1][1])
    assert np.array_equal(out[0][2], out[1][2])


def test_env_flag_selects_numpy_path():
    env = dict(os.environ, IONIC_CDW_NUMBA="0")
    code = "from ionic_cdw._accel import USE_NUMBA; print(USE_NUMBA)"
    res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "False"
