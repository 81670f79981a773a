"""Numba-accelerated kernels. See _kernels_numpy for the reference path."""

import numpy as np
from numba import njit


@njit(cache=True)
def mean_smooth_core(padded, k):
    h = padded.shape[0] - (k - 1)
    w = padded.shape[1] - (k - 1)
    k2 = k * k
    out = np.empty((h, w), np.int64)
    for i in range(h):
        for j in range(w):
            s = 0
            for a in range(k):
                for b in range(k):
                    s += padded[i + a, j + b]
            out[i, j] = (2 * s + k2) // (2 * k2)
    return out


@njit(cache=True)
def dilate_core(padded, k):
    h = padded.shape[0] - (k - 1)
    w = padded.shape[1] - (k - 1)
    out = np.zeros((h, w), np.bool_)
    for i in range(h):
        for j in range(w):
            hit = False
            for a in range(k):
                if hit:
                    break
                for b in range(k):
                    if padded[i + a, j + b]:
                        hit = True
                        break
            out[i, j] = hit
    return out


@njit(cache=True)
def erode_core(padded, k):
    h = padded.shape[0] - (k - 1)
    w = padded.shape[1] - (k - 1)
    out = np.zeros((h, w), np.bool_)
    for i in range(h):
        for j in range(w):
            keep = True
            for a in range(k):
                if not keep:
                    break
                for b in range(k):
                    if not padded[i + a, j + b]:
                        keep = False
                        break
            out[i, j] = keep
    return out


@njit(cache=True)
def grow_core(passmask, init, eight):
    h, w = passmask.shape
    grown = init.copy()
    qr = np.empty(h * w, np.int64)
    qc = np.empty(h * w, np.int64)
    head = 0
    tail = 0
    for i in range(h):
        for j in range(w):
            if grown[i, j]:
                qr[tail] = i
                qc[tail] = j
                tail += 1
    while head < tail:
        i = qr[head]
        j = qc[head]
        head += 1
        for di in range(-1, 2):
            for dj in range(-1, 2):
                if di == 0 and dj == 0:
                    continue
                if not eight and di != 0 and dj != 0:
                    continue
                ni = i + di
                nj = j + dj
                if ni < 0 or nj < 0 or ni >= h or nj >= w:
                    continue
                if grown[ni, nj] or not passmask[ni, nj]:
                    continue
                grown[ni, nj] = True
                qr[tail] = ni
                qc[tail] = nj
                tail += 1
    return grown
