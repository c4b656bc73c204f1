# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the routines in ``_pykernels``.

Loop indices and the divisor-sum table live in C; the big integers stay Python
objects, so results are identical to the fallback.
"""

from libc.stdlib cimport malloc, free


cdef long *_sigma_array(sigma, Py_ssize_t n) except NULL:
    cdef long *s = <long *> malloc((n + 1) * sizeof(long))
    cdef Py_ssize_t i
    if s == NULL:
        raise MemoryError()
    for i in range(n + 1):
        s[i] = sigma[i]
    return s


def int_convolve(list a, list b):
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    if na == 0 or nb == 0:
        return []
    cdef list out = [0] * (na + nb - 1)
    cdef object ai
    for i in range(na):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(nb):
            out[i + j] = out[i + j] + ai * b[j]
    return out


def eta_numerators(Py_ssize_t n_max, sigma):
    cdef long *sg = _sigma_array(sigma, n_max)
    cdef Py_ssize_t n, k, m, lp
    cdef list table = [[1]], acc, prev
    cdef object f, c
    try:
        for n in range(1, n_max + 1):
            acc = [0] * (n + 1)
            f = 1
            for k in range(1, n + 1):
                c = sg[k] * f
                prev = <list> table[n - k]
                lp = len(prev)
                for m in range(lp):
                    acc[m + 1] = acc[m + 1] + c * prev[m]
                f = f * (n - k)
            table.append(acc)
    finally:
        free(sg)
    return table


def int_values(x, Py_ssize_t n_max, sigma):
    cdef long *sg = _sigma_array(sigma, n_max)
    cdef Py_ssize_t n, k
    cdef list vals = [1]
    cdef object s, q, r
    try:
        for n in range(1, n_max + 1):
            s = 0
            for k in range(1, n + 1):
                s = s + sg[k] * vals[n - k]
            q, r = divmod(x * s, n)
            if r:
                raise ArithmeticError("non-integral value at n=%d" % n)
            vals.append(q)
    finally:
        free(sg)
    return vals


def scaled_values(p, q, Py_ssize_t n_max, sigma):
    cdef long *sg = _sigma_array(sigma, n_max)
    cdef Py_ssize_t n, k
    cdef list vals = [1]
    cdef object s, f
    try:
        for n in range(1, n_max + 1):
            s = 0
            f = 1
            for k in range(1, n + 1):
                s = s + sg[k] * f * vals[n - k]
                f = f * ((n - k) * q)
            vals.append(p * s)
    finally:
        free(sg)
    return vals


cdef inline int _sign_at(list a, object p, object q):
    cdef Py_ssize_t i
    cdef object acc = 0, qpow = 1
    for i in range(len(a) - 1, -1, -1):
        acc = acc * p + a[i] * qpow
        qpow = qpow * q
    if acc > 0:
        return 1
    if acc < 0:
        return -1
    return 0


def sign_at(list a, p, q):
    return _sign_at(a, p, q)


def sign_variations(list seq, p, q):
    cdef int last = 0, s
    cdef long count = 0
    cdef list a
    for a in seq:
        s = _sign_at(a, p, q)
        if s == 0:
            continue
        if last != 0 and s != last:
            count += 1
        last = s
    return count
