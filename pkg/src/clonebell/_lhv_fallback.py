"""Numpy implementation of the strategy enumeration kernel.

Same contract and algorithm as the compiled ``_lhv_kernel`` module (blocked
fast Walsh-Hadamard transform); used when the extension is not built.
"""
import numpy as np


def _fwht(buf):
    size = buf.shape[0]
    half = 1
    while half < size:
        a = buf.reshape(-1, 2, half)
        top = a[:, 0, :].copy()
        a[:, 0, :] += a[:, 1, :]
        a[:, 1, :] = top - a[:, 1, :]
        half *= 2
    return buf


def lhv_max_range(term_masks, weights, start, stop, block_bits=16):
    """Best ``(value, mask)`` over strategy masks in ``[start, stop)``; ties keep the lowest mask."""
    if stop <= start:
        return None
    term_masks = np.asarray(term_masks, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.int64)
    L = min(block_bits, max(int(stop - 1).bit_length(), 0))
    size = 1 << L
    low_idx = term_masks & (size - 1)
    high = term_masks >> L
    best = None
    for h in range((start >> L), ((stop - 1) >> L) + 1):
        base = h << L
        signed = np.where(np.bitwise_count(high & h) & 1, -weights, weights)
        buf = np.zeros(size, dtype=np.int64)
        np.add.at(buf, low_idx, signed)
        _fwht(buf)
        lo, hi = max(start - base, 0), min(stop - base, size)
        i = lo + int(np.argmax(buf[lo:hi]))
        if best is None or buf[i] > best[0]:
            best = (int(buf[i]), base + i)
    return best


def lhv_value_mask(term_masks, weights, mask):
    total = 0
    for tm, w in zip(np.asarray(term_masks).tolist(), np.asarray(weights).tolist()):
        total += -w if bin(mask & tm).count("1") & 1 else w
    return total
