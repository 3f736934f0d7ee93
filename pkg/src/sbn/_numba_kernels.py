"""Numba @njit kernels, mirroring _numpy_kernels operation for operation.

Bit-identical output with the numpy backend is a tested contract: the same
multiplications happen in the same order, uniforms come from the same
splitmix64 steps, and searchsorted semantics match. Keep the two files in
sync.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U_GAMMA = np.uint64(0x9E3779B97F4A7C15)
U_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
U_MIX2 = np.uint64(0x94D049BB133111EB)
U30 = np.uint64(30)
U27 = np.uint64(27)
U31 = np.uint64(31)
U11 = np.uint64(11)
TWO53INV = 2.0 ** -53


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> U30)) * U_MIX1
    z = (z ^ (z >> U27)) * U_MIX2
    return z ^ (z >> U31)


@njit(cache=True)
def row_indices(vals, parent_pos, feat_flat, feat_off, strides):
    k = vals.shape[0]
    out = np.zeros(k, dtype=np.int64)
    for i in range(parent_pos.shape[0]):
        base = feat_off[i]
        p = parent_pos[i]
        s = strides[i]
        for r in range(k):
            out[r] += feat_flat[base + vals[r, p]] * s
    return out


@njit(cache=True)
def count_dense_branches(ridx, table):
    total = 0
    d = table.shape[1]
    for r in range(ridx.shape[0]):
        row = ridx[r]
        for c in range(d):
            if table[row, c] > 0.0:
                total += 1
    return total


@njit(cache=True)
def expand_dense(ridx, probs, table):
    k = ridx.shape[0]
    d = table.shape[1]
    total = 0
    for r in range(k):
        row = ridx[r]
        for c in range(d):
            if table[row, c] > 0.0:
                total += 1
    rep = np.empty(total, dtype=np.int64)
    cols = np.empty(total, dtype=np.int64)
    new_probs = np.empty(total, dtype=np.float64)
    t = 0
    for r in range(k):
        row = ridx[r]
        pr = probs[r]
        for c in range(d):
            v = table[row, c]
            if v > 0.0:
                rep[t] = r
                cols[t] = c
                new_probs[t] = pr * v
                t += 1
    return rep, cols, new_probs


@njit(cache=True)
def expand_urange(ridx, probs, lo, hi):
    k = ridx.shape[0]
    total = 0
    for r in range(k):
        total += hi[ridx[r]] - lo[ridx[r]]
    rep = np.empty(total, dtype=np.int64)
    cols = np.empty(total, dtype=np.int64)
    new_probs = np.empty(total, dtype=np.float64)
    t = 0
    for r in range(k):
        l = lo[ridx[r]]
        h = hi[ridx[r]]
        cnt = h - l
        pr = probs[r]
        for c in range(l, h):
            rep[t] = r
            cols[t] = c
            new_probs[t] = pr / cnt
            t += 1
    return rep, cols, new_probs


@njit(cache=True)
def draw_dense(states, ridx, table, cdf):
    n = states.shape[0]
    d = table.shape[1]
    vals = np.empty(n, dtype=np.int64)
    new_states = np.empty_like(states)
    for i in range(n):
        st = states[i] + U_GAMMA
        new_states[i] = st
        u = (_mix64(st) >> U11) * TWO53INV
        r = ridx[i]
        v = np.searchsorted(cdf[r], u, side="right")
        if v >= d:
            v = d - 1
        while table[r, v] <= 0.0:
            v -= 1
        vals[i] = v
    return vals, new_states


@njit(cache=True)
def draw_urange(states, ridx, lo, hi):
    n = states.shape[0]
    vals = np.empty(n, dtype=np.int64)
    new_states = np.empty_like(states)
    for i in range(n):
        st = states[i] + U_GAMMA
        new_states[i] = st
        u = (_mix64(st) >> U11) * TWO53INV
        l = lo[ridx[i]]
        cnt = hi[ridx[i]] - l
        off = np.int64(u * cnt)
        if off > cnt - 1:
            off = cnt - 1
        vals[i] = l + off
    return vals, new_states


def warm_up():
    """Compile every kernel on tiny inputs (useful before timing)."""
    vals = np.zeros((1, 1), dtype=np.int64)
    pp = np.zeros(1, dtype=np.int64)
    ff = np.zeros(1, dtype=np.int64)
    fo = np.array([0, 1], dtype=np.int64)
    st = np.ones(1, dtype=np.int64)
    row_indices(vals, pp, ff, fo, st)
    ridx = np.zeros(1, dtype=np.int64)
    probs = np.ones(1)
    table = np.array([[0.5, 0.5]])
    count_dense_branches(ridx, table)
    expand_dense(ridx, probs, table)
    lo = np.zeros(1, dtype=np.int64)
    hi = np.full(1, 2, dtype=np.int64)
    expand_urange(ridx, probs, lo, hi)
    states = np.zeros(1, dtype=np.uint64)
    draw_dense(states, ridx, table, np.cumsum(table, axis=1))
    draw_urange(states, ridx, lo, hi)
