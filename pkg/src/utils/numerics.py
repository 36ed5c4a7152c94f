"""
Numeric kernels
Entropy of weight vectors, grouping of integer rows and dyadic flooring
"""
import itertools
from typing import Tuple

import numpy as np

# Coordinates are rounded to this many decimals before flooring so that
# values such as 0.3 * 2**3 land in the intended cell.
SNAP_DECIMALS = 9


def entropy_bits(weights: np.ndarray) -> float:
    """Shannon entropy in bits of a (not necessarily normalized) weight vector"""
    w = np.asarray(weights, dtype=float)
    w = w[w > 0]
    if w.size == 0:
        return 0.0
    total = w.sum()
    p = w / total
    return float(-(p * np.log2(p)).sum())


def group_rows(keys: np.ndarray, weights: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Merges equal integer rows, summing their weights

    Args:
        keys: (N, k) integer array
        weights: (N,) weights

    Returns:
        (unique rows sorted lexicographically, accumulated weights)
    """
    keys = np.asarray(keys, dtype=np.int64)
    if keys.ndim == 1:
        keys = keys[:, None]
    if keys.shape[0] == 0:
        return keys.reshape(0, keys.shape[1]), np.zeros(0)
    if keys.shape[1] == 0:
        return np.zeros((1, 0), dtype=np.int64), np.array([float(np.sum(weights))])
    encoded = _encode_rows(keys)
    if encoded is not None:
        flat, lows, strides = encoded
        unique_flat, inverse = np.unique(flat, return_inverse=True)
        summed = np.bincount(inverse.reshape(-1), weights=weights, minlength=unique_flat.shape[0])
        return _decode_rows(unique_flat, lows, strides), summed
    unique, inverse = np.unique(keys, axis=0, return_inverse=True)
    summed = np.bincount(inverse.reshape(-1), weights=weights, minlength=unique.shape[0])
    return unique, summed


def _encode_rows(keys: np.ndarray):
    """Row-major mixed-radix code of integer rows, or None when it would overflow int64"""
    lows = keys.min(axis=0)
    spans = keys.max(axis=0) - lows + 1
    total = 1
    for span in spans[::-1]:
        total *= int(span)
        if total >= 2 ** 62:
            return None
    strides = np.ones(keys.shape[1], dtype=np.int64)
    for c in range(keys.shape[1] - 2, -1, -1):
        strides[c] = strides[c + 1] * spans[c + 1]
    return (keys - lows) @ strides, lows, strides


def _decode_rows(flat: np.ndarray, lows: np.ndarray, strides: np.ndarray) -> np.ndarray:
    rows = np.empty((flat.shape[0], strides.shape[0]), dtype=np.int64)
    rest = flat.copy()
    for c in range(strides.shape[0]):
        rows[:, c], rest = np.divmod(rest, strides[c])
    return rows + lows


def row_labels(keys: np.ndarray) -> np.ndarray:
    """Integer label per row such that equal rows share a label"""
    keys = np.asarray(keys, dtype=np.int64)
    if keys.ndim == 1:
        keys = keys[:, None]
    if keys.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if keys.shape[1] == 0:
        return np.zeros(keys.shape[0], dtype=np.int64)
    encoded = _encode_rows(keys)
    if encoded is not None:
        _, inverse = np.unique(encoded[0], return_inverse=True)
    else:
        _, inverse = np.unique(keys, axis=0, return_inverse=True)
    return inverse.reshape(-1).astype(np.int64)


def dyadic_floor(values: np.ndarray, level: int) -> np.ndarray:
    """
    floor(2**level * values) as int64

    The scaled values are rounded to SNAP_DECIMALS (9) places before flooring,
    so a point on a cell boundary up to float error lands in the upper cell.
    """
    scaled = np.round(np.asarray(values, dtype=float) * (2.0 ** level), SNAP_DECIMALS)
    return np.floor(scaled).astype(np.int64)


def matching_pairs(labels_src: np.ndarray, labels_dst: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """All index pairs (p, q) with labels_src[q] == labels_dst[p]"""
    order = np.argsort(labels_src, kind="stable")
    ordered = labels_src[order]
    low = np.searchsorted(ordered, labels_dst, side="left")
    high = np.searchsorted(ordered, labels_dst, side="right")
    counts = high - low
    total = int(counts.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    p = np.repeat(np.arange(labels_dst.shape[0]), counts)
    within = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    q = order[np.repeat(low, counts) + within]
    return p, q


def neighbor_offsets(k: int):
    """The zero offset plus one representative of each pair {o, -o} in {-1, 0, 1}**k"""
    zero = tuple([0] * k)
    return [o for o in itertools.product((-1, 0, 1), repeat=k) if o >= zero]


def close_pairs(buckets: np.ndarray):
    """
    Candidate pairs of rows whose integer buckets are equal or adjacent

    Yields:
        (p, q) index arrays per offset; each unordered pair appears once, p != q
    """
    size = buckets.shape[0]
    for offset in neighbor_offsets(buckets.shape[1]):
        labels = row_labels(np.vstack((buckets, buckets + np.asarray(offset, dtype=np.int64))))
        p, q = matching_pairs(labels[:size], labels[size:])
        if not any(offset):
            keep = p < q
            p, q = p[keep], q[keep]
        yield p, q
