# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled elementwise kernels.  Signatures mirror ``_reference``."""
import numpy as np
from libc.math cimport cos, sin, pow, fabs


cdef inline double[::1] _as_real(arr):
    return np.ascontiguousarray(arr).reshape(-1).view(np.float64)


def nonlinear_rotate(u, double dt):
    if not u.flags.c_contiguous:
        raise ValueError("u must be C-contiguous")
    cdef double[::1] v = u.reshape(-1).view(np.float64)
    cdef Py_ssize_t i, n = v.shape[0] // 2
    cdef double re, im, a, cs, sn, total = 0.0
    with nogil:
        for i in range(n):
            re = v[2 * i]
            im = v[2 * i + 1]
            a = re * re + im * im
            total += a
            cs = cos(a * dt)
            sn = sin(a * dt)
            v[2 * i] = re * cs + im * sn
            v[2 * i + 1] = im * cs - re * sn
    return total


def abs2_sum(u):
    cdef double[::1] v = _as_real(u)
    cdef Py_ssize_t i, n = v.shape[0], n4 = n - n % 4
    # four accumulators break the add dependency chain
    cdef double t0 = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0
    with nogil:
        for i in range(0, n4, 4):
            t0 += v[i] * v[i]
            t1 += v[i + 1] * v[i + 1]
            t2 += v[i + 2] * v[i + 2]
            t3 += v[i + 3] * v[i + 3]
        for i in range(n4, n):
            t0 += v[i] * v[i]
    return (t0 + t1) + (t2 + t3)


def quartic_sum(u):
    cdef double[::1] v = _as_real(u)
    cdef Py_ssize_t i, n = v.shape[0] // 2
    cdef double a, total = 0.0
    with nogil:
        for i in range(n):
            a = v[2 * i] * v[2 * i] + v[2 * i + 1] * v[2 * i + 1]
            total += a * a
    return total


def weighted_abs2_sum(c, w):
    cdef double[::1] v = _as_real(c)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64).reshape(-1)
    cdef Py_ssize_t i, n = wv.shape[0]
    cdef double total = 0.0
    if v.shape[0] != 2 * n:
        raise ValueError("shape mismatch")
    with nogil:
        for i in range(n):
            total += wv[i] * (v[2 * i] * v[2 * i] + v[2 * i + 1] * v[2 * i + 1])
    return total


def xsb_weighted_sum(c, tau, symbol, space_weight, double b):
    c = np.ascontiguousarray(c)
    cdef Py_ssize_t nt = c.shape[0]
    cdef Py_ssize_t m = c.size // nt if nt else 0
    symbol = np.ascontiguousarray(symbol, dtype=np.float64).reshape(-1)
    if symbol.shape[0] != m:
        raise ValueError("shape mismatch")
    # modes sharing xi^2 + n^2 share the modulation weight: one pow per distinct symbol
    uniq, inv = np.unique(symbol, return_inverse=True)
    cdef double[::1] v = c.reshape(-1).view(np.float64)
    cdef double[::1] tv = np.ascontiguousarray(tau, dtype=np.float64)
    cdef double[::1] uv = uniq
    cdef Py_ssize_t[::1] iv = inv.astype(np.intp).reshape(-1)
    cdef double[::1] wv = np.ascontiguousarray(space_weight, dtype=np.float64).reshape(-1)
    cdef double[::1] acc = np.zeros(uniq.shape[0])
    if wv.shape[0] != m or tv.shape[0] != nt:
        raise ValueError("shape mismatch")
    cdef Py_ssize_t i, k, u, base, nu = uniq.shape[0]
    cdef double row, a, total = 0.0, two_b = 2.0 * b, t
    with nogil:
        for i in range(nt):
            t = tv[i]
            base = 2 * i * m
            for k in range(m):
                a = v[base + 2 * k] * v[base + 2 * k] + v[base + 2 * k + 1] * v[base + 2 * k + 1]
                acc[iv[k]] += a * wv[k]
            row = 0.0
            for u in range(nu):
                if acc[u] != 0.0:
                    row += acc[u] * pow(1.0 + fabs(t - uv[u]), two_b)
                    acc[u] = 0.0
            total += row
    return total


def triple_product(u1, u2, u3, out):
    cdef double[::1] a = _as_real(u1)
    cdef double[::1] b = _as_real(u2)
    cdef double[::1] c = _as_real(u3)
    if not out.flags.c_contiguous:
        raise ValueError("out must be C-contiguous")
    cdef double[::1] o = out.reshape(-1).view(np.float64)
    cdef Py_ssize_t i, n = o.shape[0] // 2
    cdef double pr, pi
    if a.shape[0] != 2 * n or b.shape[0] != 2 * n or c.shape[0] != 2 * n:
        raise ValueError("shape mismatch")
    with nogil:
        for i in range(n):
            # (a * conj(b))
            pr = a[2 * i] * b[2 * i] + a[2 * i + 1] * b[2 * i + 1]
            pi = a[2 * i + 1] * b[2 * i] - a[2 * i] * b[2 * i + 1]
            o[2 * i] = pr * c[2 * i] - pi * c[2 * i + 1]
            o[2 * i + 1] = pr * c[2 * i + 1] + pi * c[2 * i]
    return out
