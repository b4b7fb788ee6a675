"""The compiled and numpy kernels must agree; selection honours the env switch."""
import os
import subprocess
import sys

import numpy as np
import numpy.testing as npt
import pytest

from gradiometry import _pykernels, kernels

needs_cython = pytest.mark.skipif("cython" not in kernels.IMPLEMENTATIONS, reason="extension not built")


def _random_problem(rng, n=300, m=17):
    points = rng.uniform(-50, 50, (n, 3))
    centers = rng.uniform(-5, 5, (m, 3))
    masses = rng.uniform(-1e6, 1e6, m)
    radii = rng.uniform(0, 2, m)
    return points, centers, masses, radii


@needs_cython
@pytest.mark.parametrize("name", ["potential", "acceleration", "tensor"])
def test_backends_agree(rng, name):
    points, centers, masses, _ = _random_problem(rng)
    ref = getattr(_pykernels, name)(points, centers, masses)
    fast = getattr(kernels.IMPLEMENTATIONS["cython"], name)(points, centers, masses)
    scale = np.max(np.abs(ref))
    npt.assert_allclose(fast, ref, rtol=0, atol=1e-13 * scale)


@needs_cython
def test_clearance_agrees(rng):
    points, centers, _, radii = _random_problem(rng)
    npt.assert_allclose(
        kernels.IMPLEMENTATIONS["cython"].clearance(points, centers, radii),
        _pykernels.clearance(points, centers, radii),
        rtol=1e-14,
    )


def test_empty_sources(backend):
    pts = np.ones((4, 3))
    empty = np.zeros((0, 3))
    assert np.all(kernels.potential(pts, empty, np.zeros(0)) == 0)
    assert np.all(kernels.tensor(pts, empty, np.zeros(0)) == 0)
    assert np.all(np.isinf(kernels.clearance(pts, empty, np.zeros(0))))


def test_readonly_inputs_accepted(backend):
    pts = np.ones((2, 3))
    c = np.zeros((1, 3))
    m = np.ones(1)
    for arr in (pts, c, m):
        arr.setflags(write=False)
    npt.assert_allclose(kernels.potential(pts, c, m), -1 / np.sqrt(3))


def test_pure_python_switch():
    env = dict(os.environ, GRADIOMETRY_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import gradiometry; print(gradiometry.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"
