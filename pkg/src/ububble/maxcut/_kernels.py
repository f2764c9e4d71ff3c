"""Inner loops of the MaxCut solvers, in a numba and a pure-numpy flavour.

``dp_step`` advances the heavy-part table by one bubble slot and
``brute_maxcut`` enumerates all cuts.  The ``*_numba`` and ``*_numpy``
variants compute bit-identical results; the module-level names point at the
flavour picked by :mod:`ububble._accel`.
"""

from __future__ import annotations

import numpy as np

from .._accel import USE_NUMBA, njit

NEG = -(1 << 60)
NEG_HALF = NEG // 2


# --------------------------------------------------------------------------
# DP slot step
# --------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _dp_step_numba(
    f, sdims, a1, c, cn, bi, above_c, above_n, pred, ztot, lt, tb, ta, tli, tconst, lvals, out
):
    l = sdims.shape[0]
    n_s = 1
    for j in range(l):
        n_s *= sdims[j]
    stride_c = 1
    for j in range(c + 1, l):
        stride_c *= sdims[j]
    stride_n = 1
    if cn >= 0:
        for j in range(cn + 1, l):
            stride_n *= sdims[j]
    dc = sdims[c]
    n_l = lvals.shape[0]

    g = np.full((n_l, n_s), NEG, dtype=np.int64)
    for s in range(n_s):
        base = s * a1
        for z in range(a1):
            v = f[base + z]
            if v <= NEG_HALF:
                continue
            for li in range(n_l):
                w = v
                if pred:
                    L = lvals[li]
                    w += z * (lt - L) + (ztot - z) * L
                if w > g[li, s]:
                    g[li, s] = w

    for idx in range(out.shape[0]):
        out[idx] = NEG
    n_t = tb.shape[0]
    for s in range(n_s):
        sc = (s // stride_c) % dc
        sn = 0
        if cn >= 0:
            sn = (s // stride_n) % sdims[cn]
        for t in range(n_t):
            b = tb[t]
            if sc + b >= dc:
                continue
            v = g[tli[t], s]
            if v <= NEG_HALF:
                continue
            val = v + tconst[t] + b * (above_c - sc) + (bi - b) * sc
            if cn >= 0:
                val += b * (above_n - sn) + (bi - b) * sn
            idx = (s + b * stride_c) * a1 + ta[t]
            if val > out[idx]:
                out[idx] = val
    return out


def _dp_step_numpy(
    f, sdims, a1, c, cn, bi, above_c, above_n, pred, ztot, lt, tb, ta, tli, tconst, lvals, out
):
    l = len(sdims)
    shape = tuple(int(d) for d in sdims) + (int(a1),)
    F = f.reshape(shape)
    live = F > NEG_HALF
    if pred:
        z = np.arange(a1, dtype=np.int64)
        g = []
        for L in lvals:
            bonus = z * (lt - L) + (ztot - z) * L
            g.append(np.where(live, F + bonus, NEG).max(axis=-1))
    else:
        g = [np.where(live, F, NEG).max(axis=-1)]

    O = out.reshape(shape)
    O[...] = NEG
    dc = int(sdims[c])
    sc = np.arange(dc, dtype=np.int64)
    bshape_c = [1] * l
    bshape_c[c] = dc
    if cn >= 0:
        sn = np.arange(int(sdims[cn]), dtype=np.int64)
        bshape_n = [1] * l
        bshape_n[cn] = int(sdims[cn])

    for t in range(len(tb)):
        b = int(tb[t])
        if b >= dc:
            continue
        e3 = (b * (above_c - sc) + (bi - b) * sc).reshape(bshape_c)
        src_sl = [slice(None)] * l
        src_sl[c] = slice(0, dc - b)
        dst_sl = [slice(None)] * l
        dst_sl[c] = slice(b, dc)
        src = g[int(tli[t])][tuple(src_sl)]
        val = src + int(tconst[t]) + e3[tuple(src_sl)]
        if cn >= 0:
            e4 = (b * (above_n - sn) + (bi - b) * sn).reshape(bshape_n)
            val = val + e4
        val = np.where(src > NEG_HALF, val, NEG)
        dst = O[tuple(dst_sl) + (int(ta[t]),)]
        np.maximum(dst, val, out=dst)
    return out


# --------------------------------------------------------------------------
# brute force
# --------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _brute_numba(adj):
    """Gray-code sweep over cuts with vertex 0 fixed outside; returns (value, mask).

    Bit i of ``mask`` puts vertex i+1 into the cut; ties go to the smallest mask.
    """
    n = adj.shape[0]
    if n <= 1:
        return 0, 0
    side = np.zeros(n, dtype=np.int8)
    cur = 0
    best = 0
    best_mask = 0
    total = 1 << (n - 1)
    for t in range(1, total):
        bit = 0
        x = t
        while (x & 1) == 0:
            x >>= 1
            bit += 1
        v = bit + 1
        same = 0
        other = 0
        for u in range(n):
            if adj[v, u]:
                if side[u] == side[v]:
                    same += 1
                else:
                    other += 1
        cur += same - other
        side[v] ^= 1
        mask = t ^ (t >> 1)
        if cur > best or (cur == best and mask < best_mask):
            best = cur
            best_mask = mask
    return best, best_mask


def _brute_numpy(adj, chunk: int = 1 << 16):
    n = adj.shape[0]
    if n <= 1:
        return 0, 0
    iu, ju = np.nonzero(np.triu(adj))
    total = 1 << (n - 1)
    shifts = np.arange(n - 1, dtype=np.int64)
    best, best_mask = -1, 0
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        bits = np.zeros((masks.shape[0], n), dtype=np.int8)
        bits[:, 1:] = (masks[:, None] >> shifts) & 1
        vals = (bits[:, iu] != bits[:, ju]).sum(axis=1)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, best_mask = int(vals[k]), int(masks[k])
    return best, best_mask


if USE_NUMBA:
    dp_step = _dp_step_numba
    brute_maxcut = _brute_numba
else:
    dp_step = _dp_step_numpy
    brute_maxcut = _brute_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
