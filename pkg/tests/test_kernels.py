import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scottkit import _kernels_py, kernels


def _compiled():
    try:
        from scottkit import _kernels
    except ImportError:
        pytest.skip("compiled kernel not built")
    return _kernels


@st.composite
def tables(draw):
    n = draw(st.integers(1, 40))
    cls = np.array(draw(st.lists(st.integers(0, 5), min_size=n, max_size=n)), dtype=np.int64)
    counts = draw(st.lists(st.integers(0, 4), min_size=n, max_size=n))
    ptr = np.zeros(n + 1, dtype=np.int64)
    ptr[1:] = np.cumsum(counts)
    idx = np.array(draw(st.lists(st.integers(0, n - 1), min_size=int(ptr[-1]), max_size=int(ptr[-1]))),
                   dtype=np.int64)
    return cls, ptr, idx


@settings(max_examples=200, deadline=None)
@given(tables())
def test_compiled_and_python_kernels_agree(t):
    ext = _compiled()
    a, m = _kernels_py.refine_step(*t)
    b, m2 = ext.refine_step(*t)
    assert m == m2 and np.array_equal(a, b)


@settings(max_examples=100, deadline=None)
@given(tables())
def test_refine_step_refines(t):
    cls, _, _ = t
    new, m = _kernels_py.refine_step(*t)
    assert m == len(set(new.tolist()))
    seen = {}
    for old, nw in zip(cls.tolist(), new.tolist()):
        assert seen.setdefault(nw, old) == old
    assert new[0] == 0


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_environment_forces_python_fallback():
    import os
    import subprocess
    import sys
    env = dict(os.environ, SCOTTKIT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from scottkit import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
