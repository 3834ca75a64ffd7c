import importlib
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from album import _core, _pure

kernels = pytest.importorskip("album._kernels")

finite = st.floats(-1e3, 1e3, allow_nan=False)
vectors = st.integers(1, 12).flatmap(lambda n: arrays(np.float64, n, elements=finite))


@pytest.mark.skipif(os.environ.get("ALBUM_PURE_PYTHON") in ("1", "true", "yes"),
                    reason="fallback forced by environment")
def test_cython_backend_selected_when_built():
    assert _core.BACKEND == "cython"


def test_env_var_forces_fallback(monkeypatch):
    monkeypatch.setenv("ALBUM_PURE_PYTHON", "1")
    mod = importlib.reload(_core)
    try:
        assert mod.BACKEND == "python"
        assert mod.soft_threshold is _pure.soft_threshold
    finally:
        monkeypatch.delenv("ALBUM_PURE_PYTHON")
        importlib.reload(_core)


@given(vectors, st.floats(0, 100))
def test_soft_threshold_backends_agree(v, t):
    np.testing.assert_array_equal(kernels.soft_threshold(v, t), _pure.soft_threshold(v, t))


@given(vectors, st.integers(0, 15))
def test_hard_threshold_backends_agree(v, s):
    np.testing.assert_array_equal(kernels.hard_threshold(v, s), _pure.hard_threshold(v, s))


@given(vectors, st.floats(0.1, 10))
def test_projections_backends_agree(v, r):
    c = np.linspace(-1, 1, v.size)
    np.testing.assert_allclose(kernels.project_ball(v, c, r), _pure.project_ball(v, c, r), rtol=1e-14, atol=1e-12)
    np.testing.assert_allclose(kernels.project_sphere(v, c, r), _pure.project_sphere(v, c, r), rtol=1e-14, atol=1e-12)


@settings(max_examples=50)
@given(st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_jacobi_backends_agree(n, seed):
    A = np.random.default_rng(seed).standard_normal((n, n))
    A = A + A.T
    ref = np.linalg.eigvalsh(A)
    for impl in (kernels, _pure):
        np.testing.assert_allclose(impl.jacobi_eigenvalues(A, 1e-12), ref, atol=1e-10 * (1 + np.abs(ref).max()))


def test_hard_threshold_ties_keep_lowest_indices():
    v = np.array([1.0, -2.0, 2.0, 1.0, -2.0])
    for impl in (kernels, _pure):
        np.testing.assert_array_equal(impl.hard_threshold(v, 2), [0, -2.0, 2.0, 0, 0])


def test_sphere_projection_of_center_is_first_axis():
    for impl in (kernels, _pure):
        np.testing.assert_array_equal(impl.project_sphere(np.zeros(3), np.zeros(3), 2.0), [2.0, 0, 0])


def test_read_only_inputs_accepted():
    v = np.arange(4.0)
    v.setflags(write=False)
    w = np.broadcast_to(0.5, (4,))
    np.testing.assert_array_equal(kernels.soft_threshold(v, w), [0, 0.5, 1.5, 2.5])
