import numpy as np
import pytest

from sbn.model import (
    ChanceSpec, Domain, PayoffSpec, SbnGraph, StrategicSpec, StrategyFamily,
    TableCpd, payoff_vector,
)

RPS = np.array([[0., -1., 1.], [1., 0., -1.], [-1., 1., 0.]])


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load from cache) the numba kernels once per session."""
    from sbn.backends import get_backend, numba_available
    if numba_available():
        get_backend("numba").warm_up()


@pytest.fixture
def rps_matrix():
    return RPS.copy()


@pytest.fixture
def coin_graph():
    """Fair coin copied into a single payoff node."""
    coin = TableCpd((), {(): (0.5, 0.5)})
    pay = TableCpd(("a",), {(0,): (1.0, 0.0), (1,): (0.0, 1.0)})
    return SbnGraph(1, {
        "a": ChanceSpec(Domain([0, 1]), coin),
        "pi": PayoffSpec(Domain([payoff_vector(0), payoff_vector(1)]),
                         "all", pay),
    })


def point_mass_family(name, size):
    members = tuple(
        (f"set-{v}", TableCpd((), {(): tuple(1.0 if i == v else 0.0
                                             for i in range(size))}))
        for v in range(size))
    return StrategyFamily(name, members, deterministic=True)


@pytest.fixture
def xor_graph():
    """One 2-action strategic node, a fair coin, payoff = action XOR coin."""
    coin = ChanceSpec(Domain([0, 1]), TableCpd((), {(): (0.5, 0.5)}))
    x = StrategicSpec(Domain([0, 1]), 0, point_mass_family("bits", 2))
    rows = {(c, v): tuple(1.0 if k == (c ^ v) else 0.0 for k in range(2))
            for c in range(2) for v in range(2)}
    pi = PayoffSpec(Domain([payoff_vector(0), payoff_vector(1)]), "all",
                    TableCpd(("c", "x"), rows))
    return SbnGraph(1, {"c": coin, "x": x, "pi": pi})
