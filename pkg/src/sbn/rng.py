"""Counter-based pseudo-random streams for reproducible sampling.

The generator is splitmix64. Stream i of a 64-bit seed starts from

    state_0 = mix64((seed + (i + 1) * GAMMA) mod 2^64)

and each draw advances `state += GAMMA` before mixing, so draw j of stream
i is a pure function of (seed, i, j). Monte Carlo assigns one stream per
sample index, which makes results independent of chunking or worker count.
Uniforms take the top 53 bits; normals go through the inverse CDF.

Two implementations exist on purpose: scalar Python-int versions (the
reference, also used by the numba kernels) and vectorized numpy uint64
versions. They are bit-identical; tests assert it.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_U53 = 2.0 ** -53


def mix64(z: int) -> int:
    """splitmix64 finalizer on a Python int (mod 2^64)."""
    z &= MASK
    z = ((z ^ (z >> 30)) * _MIX1) & MASK
    z = ((z ^ (z >> 27)) * _MIX2) & MASK
    return z ^ (z >> 31)


def stream_state(seed: int, index: int) -> int:
    """Initial state of stream `index` under `seed`."""
    return mix64((seed + (index + 1) * GAMMA) & MASK)


def next_uint64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (output, new_state)."""
    state = (state + GAMMA) & MASK
    return mix64(state), state


def next_uniform(state: int) -> tuple[float, int]:
    out, state = next_uint64(state)
    return (out >> 11) * _U53, state


def stream_states(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorized stream_state for indices start..start+count-1."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = (np.uint64(seed & MASK) + idx * np.uint64(GAMMA))
    return _mix64_vec(z)


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def next_uniforms(states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Advance every stream one step; returns (uniforms in [0,1), new states)."""
    states = states + np.uint64(GAMMA)
    out = _mix64_vec(states)
    return (out >> np.uint64(11)).astype(np.float64) * _U53, states


def normals(seed: int, count: int, stream: int = 0) -> np.ndarray:
    """Standard normals via the inverse CDF, from one sequential stream."""
    state = stream_state(seed, stream)
    u = np.empty(count)
    for k in range(count):
        u[k], state = next_uniform(state)
    # ndtri(0) is -inf; the smallest representable uniform stands in for 0.
    u[u == 0.0] = _U53
    return ndtri(u)
