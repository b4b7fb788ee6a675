"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
implementation is used. Set ``GRADIOMETRY_PURE_PYTHON=1`` to force the
fallback.
"""
import os

import numpy as np

from . import _pykernels

if os.environ.get("GRADIOMETRY_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

IMPLEMENTATIONS = {"python": _pykernels}
if BACKEND == "cython":
    IMPLEMENTATIONS["cython"] = _impl
else:
    try:
        from . import _ckernels

        IMPLEMENTATIONS["cython"] = _ckernels
    except ImportError:
        pass


def _prep(points, centers, values):
    return (
        np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 3),
        np.ascontiguousarray(centers, dtype=np.float64).reshape(-1, 3),
        np.ascontiguousarray(values, dtype=np.float64).reshape(-1),
    )


def potential(points, centers, masses):
    return _impl.potential(*_prep(points, centers, masses))


def acceleration(points, centers, masses):
    return _impl.acceleration(*_prep(points, centers, masses))


def tensor(points, centers, masses):
    return _impl.tensor(*_prep(points, centers, masses))


def clearance(points, centers, radii):
    return _impl.clearance(*_prep(points, centers, radii))
