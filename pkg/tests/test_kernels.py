import math

import numpy as np
import pytest

from twobody_dot import _pykernels, kernels

try:
    from twobody_dot import _ckernels
except ImportError:  # extension not built in this environment
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None:
        assert kernels.BACKEND == "cython"


def test_python_vstar_boundary_cases():
    assert _pykernels.vstar_bisect(0.0, 3.0, 1.0) == math.sqrt(10)
    v = _pykernels.vstar_bisect(1.0, 6.0, 1.0)
    assert v ** (8 / 3) + v * v == pytest.approx(37, rel=1e-14)
    # enormous momentum pushes v* below the default lower bracket
    tiny = _pykernels.vstar_bisect(1e12, 0.0, 1.0)
    assert 0 <= tiny < 1e-8


def test_python_veff_special_points():
    assert _pykernels.veff(0.0, 0.0, 0.0, 1, 1, 1) == math.inf
    assert _pykernels.veff(0.0, 1.0, 0.5, 1, 1, 1) == math.inf
    assert _pykernels.veff(0.0, 1.0, 0.0, 1, 2, 1) == pytest.approx(0.5 * 4 + 1)


def test_python_grid_shape():
    g = _pykernels.veff_grid(np.array([0.5, 1.0]), np.array([0.0, 0.1, 0.2]), 1.0, 1.0, 1.0, 1.0)
    assert g.shape == (2, 3)
    assert g[1, 0] == _pykernels.veff(1.0, 0.0, 1.0, 1.0, 1.0, 1.0)


@needs_ext
def test_backends_bit_identical_vstar():
    rng = np.random.default_rng(7)
    p = rng.uniform(0, 10, 2000)
    u = rng.uniform(0, 10, 2000)
    for M in (0.5, 1.0, 3.0, 6.0):
        a = _ckernels.vstar_bisect_array(p, u, M)
        b = _pykernels.vstar_bisect_array(p, u, M)
        assert np.array_equal(a, b)
        assert _ckernels.vstar_bisect(1e12, 0.0, M) == _pykernels.vstar_bisect(1e12, 0.0, M)


@needs_ext
def test_backends_bit_identical_veff():
    rho = np.concatenate(([0.0], np.geomspace(1e-3, 5, 50)))
    z = np.linspace(0, 3, 40)
    for p in (0.0, 1.3):
        a = _ckernels.veff_grid(rho, z, p, 6.0, 2.75, 1.0)
        b = _pykernels.veff_grid(rho, z, p, 6.0, 2.75, 1.0)
        assert np.array_equal(a, b)


def test_array_broadcasting():
    out = kernels.vstar_bisect_array(np.array([[0.5, 1.0], [2.0, 3.0]]), 2.0, 1.0)
    assert out.shape == (2, 2)
    assert out[0, 1] == kernels.vstar_bisect(1.0, 2.0, 1.0)
