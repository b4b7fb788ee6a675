"""Pure-numpy point-source field kernels.

Every source is a point of (possibly negative) effective mass; uniform
spheres reduce to this outside their surface. All functions take
``points`` of shape (n, 3), ``centers`` of shape (m, 3) and ``masses`` of
shape (m,), and return fields for unit G (the caller multiplies by G).
"""
import numpy as np

_CHUNK = 4096


def _chunks(n):
    for start in range(0, n, _CHUNK):
        yield slice(start, min(start + _CHUNK, n))


def potential(points, centers, masses):
    out = np.zeros(points.shape[0])
    for sl in _chunks(points.shape[0]):
        d = points[sl, None, :] - centers[None, :, :]
        r = np.sqrt(np.einsum("nmk,nmk->nm", d, d))
        out[sl] = -(masses[None, :] / r).sum(axis=1)
    return out


def acceleration(points, centers, masses):
    out = np.zeros((points.shape[0], 3))
    for sl in _chunks(points.shape[0]):
        d = points[sl, None, :] - centers[None, :, :]
        r2 = np.einsum("nmk,nmk->nm", d, d)
        w = masses[None, :] / (r2 * np.sqrt(r2))
        out[sl] = -np.einsum("nm,nmk->nk", w, d)
    return out


def tensor(points, centers, masses):
    out = np.zeros((points.shape[0], 3, 3))
    eye = np.eye(3)
    for sl in _chunks(points.shape[0]):
        d = points[sl, None, :] - centers[None, :, :]
        r2 = np.einsum("nmk,nmk->nm", d, d)
        inv_r5 = masses[None, :] / (r2 * r2 * np.sqrt(r2))
        terms = 3.0 * d[..., :, None] * d[..., None, :] - r2[..., None, None] * eye
        t = np.einsum("nm,nmij->nij", inv_r5, terms)
        # einsum may sum mirrored entries in different orders; mirror the upper triangle
        upper = np.triu(t)
        out[sl] = upper + np.swapaxes(np.triu(t, 1), -1, -2)
    return out


def clearance(points, centers, radii):
    """Smallest distance from each point to any body surface."""
    if centers.shape[0] == 0:
        return np.full(points.shape[0], np.inf)
    out = np.empty(points.shape[0])
    for sl in _chunks(points.shape[0]):
        d = points[sl, None, :] - centers[None, :, :]
        r = np.sqrt(np.einsum("nmk,nmk->nm", d, d))
        out[sl] = (r - radii[None, :]).min(axis=1)
    return out
