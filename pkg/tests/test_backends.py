"""The two kernel backends must produce bit-identical results."""

import numpy as np
import pytest

from sbn.backends import get_backend, numba_available
from sbn.errors import ContractError
from sbn.inference import enumerate_support, mc_expected_payoffs
from sbn.model import StrategyProfile, bind, enumerate_profiles
from sbn.games import make_two_player_nocount

from _random_nets import random_sbn

needs_numba = pytest.mark.skipif(not numba_available(),
                                 reason="numba not installed")


def test_backend_selection():
    assert get_backend("numpy").__name__.endswith("_numpy_kernels")
    with pytest.raises(ContractError):
        get_backend("nonsense")


@needs_numba
@pytest.mark.parametrize("seed", range(12))
def test_enumeration_bit_identical(seed):
    g = random_sbn(seed)
    for profile in enumerate_profiles(g):
        bound = bind(g, profile)
        v1, p1, _ = enumerate_support(bound, backend="numpy")
        v2, p2, _ = enumerate_support(bound, backend="numba")
        assert np.array_equal(v1, v2)
        assert np.array_equal(p1, p2)


@needs_numba
@pytest.mark.parametrize("seed", range(8))
def test_mc_bit_identical(seed):
    g = random_sbn(seed + 100)
    profile = next(enumerate_profiles(g))
    bound = bind(g, profile)
    a = mc_expected_payoffs(bound, 2000, seed, backend="numpy")
    b = mc_expected_payoffs(bound, 2000, seed, backend="numba")
    assert np.array_equal(a.mean, b.mean)
    assert np.array_equal(a.std_error, b.std_error)


@needs_numba
def test_mc_bit_identical_with_uniform_ranges():
    bundle = make_two_player_nocount(fixed_n=4, g_max=4)
    counter = bundle.graph.nodes["y"].family.index_of("counter")
    bound = bind(bundle.graph, StrategyProfile({"x": 2, "y": counter}))
    a = mc_expected_payoffs(bound, 5000, 42, backend="numpy")
    b = mc_expected_payoffs(bound, 5000, 42, backend="numba")
    assert np.array_equal(a.mean, b.mean)


@needs_numba
@pytest.mark.parametrize("chunks", [2, 3, 7])
def test_chunk_count_never_changes_results(chunks):
    g = random_sbn(4242)
    bound = bind(g, next(enumerate_profiles(g)))
    base = mc_expected_payoffs(bound, 999, 5, n_chunks=1, backend="numpy")
    for backend in ("numpy", "numba"):
        alt = mc_expected_payoffs(bound, 999, 5, n_chunks=chunks,
                                  backend=backend)
        assert np.array_equal(base.mean, alt.mean)
        assert np.array_equal(base.std_error, alt.std_error)


def test_draw_dense_tail_guard():
    """A uniform that lands on or past the final CDF entry must select the
    last positive column, never an index out of range or a zero column."""
    B = get_backend("numpy")
    table = np.array([[0.5, 0.5, 0.0]])
    cdf = np.cumsum(table, axis=1)
    # State chosen so the next uniform is extremely close to 1.
    states = np.arange(50_000, dtype=np.uint64)
    ridx = np.zeros(len(states), dtype=np.int64)
    vals, _ = B.draw_dense(states, ridx, table, cdf)
    assert vals.min() >= 0 and vals.max() <= 1
    if numba_available():
        vals2, _ = get_backend("numba").draw_dense(states, ridx, table, cdf)
        assert np.array_equal(vals, vals2)
