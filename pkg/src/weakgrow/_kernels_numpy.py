"""Pure-numpy kernel implementations.

Fallback path for environments without numba (or with WEAKGROW_NO_NUMBA
set). Signatures are identical to the numba backend; results must be
bit-identical.
"""

import numpy as np


def mean_smooth_core(padded, k):
    # padded: int64, already edge-replicated by k//2 on each side.
    h = padded.shape[0] - (k - 1)
    w = padded.shape[1] - (k - 1)
    ii = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1), dtype=np.int64)
    np.cumsum(np.cumsum(padded, axis=0), axis=1, out=ii[1:, 1:])
    s = ii[k : k + h, k : k + w] - ii[:h, k : k + w] - ii[k : k + h, :w] + ii[:h, :w]
    k2 = k * k
    # round half-up on the exact rational mean
    return (2 * s + k2) // (2 * k2)


def dilate_core(padded, k):
    # padded: bool, zero-padded by k//2.
    h = padded.shape[0] - (k - 1)
    w = padded.shape[1] - (k - 1)
    out = np.zeros((h, w), dtype=np.bool_)
    for dr in range(k):
        for dc in range(k):
            np.logical_or(out, padded[dr : dr + h, dc : dc + w], out=out)
    return out


def erode_core(padded, k):
    h = padded.shape[0] - (k - 1)
    w = padded.shape[1] - (k - 1)
    out = np.ones((h, w), dtype=np.bool_)
    for dr in range(k):
        for dc in range(k):
            np.logical_and(out, padded[dr : dr + h, dc : dc + w], out=out)
    return out


def grow_core(passmask, init, eight):
    # Reachability fixpoint: repeatedly expand into passable neighbors.
    grown = init.copy()
    if eight:
        offsets = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
    else:
        offsets = [(-1, 0), (0, -1), (0, 1), (1, 0)]
    h, w = grown.shape
    while True:
        frontier = np.zeros_like(grown)
        for dr, dc in offsets:
            src = grown[
                max(0, -dr) : h - max(0, dr),
                max(0, -dc) : w - max(0, dc),
            ]
            frontier[
                max(0, dr) : h - max(0, -dr),
                max(0, dc) : w - max(0, -dc),
            ] |= src
        new = frontier & passmask & ~grown
        if not new.any():
            return grown
        grown |= new
