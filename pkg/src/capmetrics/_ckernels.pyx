# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled CIDEr similarity kernel. Mirrors ``_pykernels`` exactly."""

from libc.math cimport exp

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef double _segment_dot(const long long[:] a_ids, const double[:] a_w,
                         Py_ssize_t a0, Py_ssize_t a1,
                         const long long[:] b_ids, const double[:] b_w,
                         Py_ssize_t b0, Py_ssize_t b1, bint clip) nogil:
    cdef double acc = 0.0
    cdef double ca, rb
    cdef Py_ssize_t i = a0, j = b0
    while i < a1 and j < b1:
        if a_ids[i] < b_ids[j]:
            i += 1
        elif a_ids[i] > b_ids[j]:
            j += 1
        else:
            ca = a_w[i]
            rb = b_w[j]
            if clip and ca > rb:
                ca = rb
            acc += ca * rb
            i += 1
            j += 1
    return acc


def reference_similarity(const long long[:] c_ids, const double[:] c_w,
                         const long long[:] c_off, const double[:] c_norm,
                         long long c_len,
                         const long long[:] r_ids, const double[:] r_w,
                         const long long[:] r_off, const double[:] r_norm,
                         const long long[:] r_len,
                         double sigma, bint clip, bint use_penalty):
    cdef Py_ssize_t n_orders = c_norm.shape[0]
    cdef Py_ssize_t n_refs = r_len.shape[0]
    cdef Py_ssize_t j, n, seg
    cdef double total = 0.0, ref_total, dot, pen, delta
    cdef double two_sigma_sq = 2.0 * sigma * sigma
    if n_refs == 0:
        raise ValueError("no references")
    with nogil:
        for j in range(n_refs):
            ref_total = 0.0
            for n in range(n_orders):
                seg = j * n_orders + n
                if c_norm[n] == 0.0 or r_norm[seg] == 0.0:
                    continue
                dot = _segment_dot(c_ids, c_w, c_off[n], c_off[n + 1],
                                   r_ids, r_w, r_off[seg], r_off[seg + 1], clip)
                # cosine <= 1; clamp rounding overshoot
                ref_total += min(1.0, dot / (c_norm[n] * r_norm[seg]))
            if use_penalty:
                delta = <double>(c_len - r_len[j])
                pen = exp(-(delta * delta) / two_sigma_sq)
                ref_total *= pen
            total += ref_total
    return total / (n_refs * n_orders)
