import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from qtatoms import _kernels_py, exactpoly

compiled = pytest.importorskip("qtatoms._kernels")

vec_st = st.dictionaries(st.integers(0, 40), st.integers(-6, 6).filter(bool), max_size=6)


def test_default_selection_prefers_compiled():
    assert exactpoly.kernels.IMPLEMENTATION in ("cython", "python")
    assert compiled.IMPLEMENTATION == "cython"


def test_pure_python_env_forces_fallback():
    code = "from qtatoms import exactpoly; print(exactpoly.kernels.IMPLEMENTATION)"
    env = dict(os.environ, QTATOMS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.integers(0, 2**24 - 1), st.integers(-9, 9).filter(bool), max_size=8),
       st.sampled_from([0, 8, 16]), st.integers(1, 3))
def test_diff_dict_agrees(terms, shift, order):
    assert compiled.diff_dict(terms, shift, order) == _kernels_py.diff_dict(terms, shift, order)


@settings(max_examples=100, deadline=None)
@given(st.lists(vec_st, max_size=8))
def test_echelon_agrees(vectors):
    r1, r2 = {}, {}
    for v in vectors:
        assert compiled.insert_row(r1, dict(v)) == _kernels_py.insert_row(r2, dict(v))
    assert r1 == r2
    assert compiled.nullspace_tags(vectors) == _kernels_py.nullspace_tags(vectors)


def test_large_coefficients():
    big = 3**200
    terms = {pack_: big for pack_ in (5, 9)}
    assert compiled.diff_dict(terms, 0, 2) == _kernels_py.diff_dict(terms, 0, 2)
