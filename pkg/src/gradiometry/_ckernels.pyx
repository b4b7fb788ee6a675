# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled point-source field kernels; same contract as ``_pykernels``."""
import numpy as np
from libc.math cimport sqrt, INFINITY


def potential(const double[:, ::1] points, const double[:, ::1] centers, const double[::1] masses):
    cdef Py_ssize_t n = points.shape[0], m = centers.shape[0], i, j
    cdef double dx, dy, dz, acc
    out = np.zeros(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(m):
                dx = points[i, 0] - centers[j, 0]
                dy = points[i, 1] - centers[j, 1]
                dz = points[i, 2] - centers[j, 2]
                acc = acc + masses[j] / sqrt(dx * dx + dy * dy + dz * dz)
            o[i] = -acc
    return out


def acceleration(const double[:, ::1] points, const double[:, ::1] centers, const double[::1] masses):
    cdef Py_ssize_t n = points.shape[0], m = centers.shape[0], i, j
    cdef double dx, dy, dz, r2, w, ax, ay, az
    out = np.zeros((n, 3))
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            ax = 0.0
            ay = 0.0
            az = 0.0
            for j in range(m):
                dx = points[i, 0] - centers[j, 0]
                dy = points[i, 1] - centers[j, 1]
                dz = points[i, 2] - centers[j, 2]
                r2 = dx * dx + dy * dy + dz * dz
                w = masses[j] / (r2 * sqrt(r2))
                ax = ax + w * dx
                ay = ay + w * dy
                az = az + w * dz
            o[i, 0] = -ax
            o[i, 1] = -ay
            o[i, 2] = -az
    return out


def tensor(const double[:, ::1] points, const double[:, ::1] centers, const double[::1] masses):
    cdef Py_ssize_t n = points.shape[0], m = centers.shape[0], i, j
    cdef double dx, dy, dz, r2, w
    cdef double txx, txy, txz, tyy, tyz, tzz
    out = np.zeros((n, 3, 3))
    cdef double[:, :, ::1] o = out
    with nogil:
        for i in range(n):
            txx = 0.0
            txy = 0.0
            txz = 0.0
            tyy = 0.0
            tyz = 0.0
            tzz = 0.0
            for j in range(m):
                dx = points[i, 0] - centers[j, 0]
                dy = points[i, 1] - centers[j, 1]
                dz = points[i, 2] - centers[j, 2]
                r2 = dx * dx + dy * dy + dz * dz
                w = masses[j] / (r2 * r2 * sqrt(r2))
                txx = txx + w * (3.0 * dx * dx - r2)
                tyy = tyy + w * (3.0 * dy * dy - r2)
                tzz = tzz + w * (3.0 * dz * dz - r2)
                txy = txy + w * (3.0 * dx * dy)
                txz = txz + w * (3.0 * dx * dz)
                tyz = tyz + w * (3.0 * dy * dz)
            o[i, 0, 0] = txx
            o[i, 1, 1] = tyy
            o[i, 2, 2] = tzz
            o[i, 0, 1] = txy
            o[i, 1, 0] = txy
            o[i, 0, 2] = txz
            o[i, 2, 0] = txz
            o[i, 1, 2] = tyz
            o[i, 2, 1] = tyz
    return out


def clearance(const double[:, ::1] points, const double[:, ::1] centers, const double[::1] radii):
    cdef Py_ssize_t n = points.shape[0], m = centers.shape[0], i, j
    cdef double dx, dy, dz, c, best
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            best = INFINITY
            for j in range(m):
                dx = points[i, 0] - centers[j, 0]
                dy = points[i, 1] - centers[j, 1]
                dz = points[i, 2] - centers[j, 2]
                c = sqrt(dx * dx + dy * dy + dz * dz) - radii[j]
                if c < best:
                    best = c
            o[i] = best
    return out
