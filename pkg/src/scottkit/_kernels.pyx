# cython: boundscheck=False, wraparound=False
"""Compiled back-and-forth refinement kernel; see ``_kernels_py`` for the contract."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef void _insertion_sort(long long* buf, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef long long v
    for i in range(1, n):
        v = buf[i]
        j = i - 1
        while j >= 0 and buf[j] > v:
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = v


def refine_step(cnp.int64_t[::1] cls, cnp.int64_t[::1] ptr, cnp.int64_t[::1] idx):
    cdef Py_ssize_t n = cls.shape[0]
    cdef Py_ssize_t t, u, m, k, width = 0
    cdef long long* buf
    out = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] out_v = out
    ids = {}
    for t in range(n):
        if ptr[t + 1] - ptr[t] > width:
            width = ptr[t + 1] - ptr[t]
    buf = <long long*> malloc((width + 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    try:
        for t in range(n):
            m = 0
            for u in range(ptr[t], ptr[t + 1]):
                buf[m] = cls[idx[u]]
                m += 1
            _insertion_sort(buf, m)
            key = [cls[t]]
            for k in range(m):
                if k == 0 or buf[k] != buf[k - 1]:
                    key.append(buf[k])
            key = tuple(key)
            out_v[t] = ids.setdefault(key, len(ids))
    finally:
        free(buf)
    return out, len(ids)
