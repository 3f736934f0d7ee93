"""Pure-numpy kernels for enumeration and ancestral sampling.

This is the reference backend. The numba backend mirrors every function
here operation for operation so that results are bit-identical; change the
two files together.
"""

from __future__ import annotations

import numpy as np

from . import rng


def row_indices(vals: np.ndarray, parent_pos: np.ndarray, feat_flat: np.ndarray,
                feat_off: np.ndarray, strides: np.ndarray) -> np.ndarray:
    """CPD row index for each frontier entry / sample (vals is (k, nodes))."""
    out = np.zeros(vals.shape[0], dtype=np.int64)
    for i in range(len(parent_pos)):
        feat = feat_flat[feat_off[i]:feat_off[i + 1]]
        out += feat[vals[:, parent_pos[i]]] * strides[i]
    return out


def count_dense_branches(ridx: np.ndarray, table: np.ndarray,
                         chunk: int = 1 << 16) -> int:
    """Number of positive-probability branches without a full gather."""
    total = 0
    for s in range(0, len(ridx), chunk):
        total += int((table[ridx[s:s + chunk]] > 0.0).sum())
    return total


def expand_dense(ridx, probs, table):
    """Branch every frontier entry over its row's positive-probability values.

    Returns (rep, cols, new_probs) in row-major branch order: rep[t] is the
    source frontier entry, cols[t] the domain index, new_probs[t] the
    accumulated path probability.
    """
    rows = table[ridx]
    nz = rows > 0.0
    counts = nz.sum(axis=1)
    rep = np.repeat(np.arange(len(ridx), dtype=np.int64), counts)
    cols = np.nonzero(nz)[1].astype(np.int64)
    new_probs = probs[rep] * rows[nz]
    return rep, cols, new_probs


def expand_urange(ridx, probs, lo, hi):
    l, h = lo[ridx], hi[ridx]
    cnt = h - l
    k = len(ridx)
    rep = np.repeat(np.arange(k, dtype=np.int64), cnt)
    starts = np.zeros(k, dtype=np.int64)
    np.cumsum(cnt[:-1], out=starts[1:])
    t = np.arange(rep.shape[0], dtype=np.int64)
    cols = t - starts[rep] + l[rep]
    new_probs = probs[rep] / cnt[rep]
    return rep, cols, new_probs


def draw_dense(states, ridx, table, cdf):
    """One inverse-CDF draw per sample; consumes one uniform per stream."""
    u, states = rng.next_uniforms(states)
    d = table.shape[1]
    vals = np.empty(len(ridx), dtype=np.int64)
    for r in np.unique(ridx):
        m = ridx == r
        vals[m] = np.searchsorted(cdf[r], u[m], side="right")
    # u >= cdf[-1] can land one past the end; step back over zero columns.
    np.minimum(vals, d - 1, out=vals)
    bad = table[ridx, vals] <= 0.0
    while bad.any():
        vals[bad] -= 1
        bad = table[ridx, vals] <= 0.0
    return vals, states


def draw_urange(states, ridx, lo, hi):
    u, states = rng.next_uniforms(states)
    l, h = lo[ridx], hi[ridx]
    cnt = h - l
    offs = (u * cnt).astype(np.int64)
    np.minimum(offs, cnt - 1, out=offs)
    return l + offs, states
