# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration of deterministic local strategies.

The value of every strategy mask is ``sum_t w_t (-1)^popcount(mask & m_t)``,
i.e. a Walsh-Hadamard transform of the weights scattered onto the term
masks. Masks are processed in blocks of ``2^block_bits``: the high bits of a
block fix a sign per term, the low bits are resolved by an in-place fast
transform.
"""
import numpy as np

from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int64_t _signed(int64_t w, uint64_t bits) noexcept nogil:
    return -w if __builtin_popcountll(bits) & 1 else w


cdef void _fwht(int64_t* buf, Py_ssize_t size) noexcept nogil:
    cdef Py_ssize_t half = 1, i, j
    cdef int64_t a, b
    while half < size:
        i = 0
        while i < size:
            for j in range(i, i + half):
                a = buf[j]
                b = buf[j + half]
                buf[j] = a + b
                buf[j + half] = a - b
            i += 2 * half
        half *= 2


def lhv_max_range(const int64_t[::1] term_masks, const int64_t[::1] weights,
                  int64_t start, int64_t stop, int block_bits=16):
    """Best ``(value, mask)`` over strategy masks in ``[start, stop)``; ties keep the lowest mask."""
    if stop <= start:
        return None
    cdef int L = min(block_bits, max(int(stop - 1).bit_length(), 0))
    cdef Py_ssize_t size = 1 << L
    cdef int64_t low = size - 1
    cdef Py_ssize_t nterms = term_masks.shape[0]
    cdef int64_t[::1] buf = np.empty(size, dtype=np.int64)
    cdef int64_t h, base, lo, hi, l, t
    cdef int64_t best = 0, best_mask = -1
    with nogil:
        for h in range(start >> L, ((stop - 1) >> L) + 1):
            base = h << L
            for l in range(size):
                buf[l] = 0
            for t in range(nterms):
                buf[term_masks[t] & low] += _signed(weights[t], <uint64_t>(h & (term_masks[t] >> L)))
            _fwht(&buf[0], size)
            lo = start - base if start > base else 0
            hi = stop - base if stop - base < size else size
            for l in range(lo, hi):
                if best_mask < 0 or buf[l] > best:
                    best = buf[l]
                    best_mask = base + l
    return best, best_mask


def lhv_value_mask(const int64_t[::1] term_masks, const int64_t[::1] weights, int64_t mask):
    cdef Py_ssize_t t
    cdef int64_t total = 0
    for t in range(term_masks.shape[0]):
        total += _signed(weights[t], <uint64_t>(mask & term_masks[t]))
    return total
