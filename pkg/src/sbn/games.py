"""The example games, built as SBN graphs with finite strategy families.

Guessing games
    make_nocount: one player receives a uniformly random bit string whose
    length is exponentially distributed (rounded up, truncated) and must
    guess its popcount using a constant strategy (the constant-time proxy).
    make_two_player_nocount: two guessers share the string; the second
    player's family also contains the exact counter (the linear-time
    proxy), and correct guessers split or take the prize.

Matrix-game game
    make_letsplay: a chance node draws a skew-symmetric subgame from a
    finite weighted pool; each player's strategic node maps the drawn
    subgame to a mixed strategy over its pure strategies, and the payoff
    node pays the matrix entry. Player A's family contains the LP
    equilibrium strategy ("lp-nash"); player B's family must not, which is
    the finite stand-in for B's tighter complexity budget.

Strategy families are explicit finite lists; complexity classes cannot be
enumerated, so each family documents in GameBundle.notes which class it
proxies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng
from .errors import CapacityError, ContractError
from .model import (
    ChanceSpec, DeterministicCpd, Domain, Feature, FeatureTableCpd,
    PayoffSpec, SbnGraph, StrategicSpec, StrategyFamily, TableCpd,
    UniformRangeCpd, payoff_vector,
)
from .solver import symmetric_nash_skew

DEFAULT_TAIL_TOL = 1e-6
DEFAULT_N_CAP = 20


@dataclass(frozen=True)
class GameBundle:
    """A constructed game graph plus notes on what each family proxies."""

    graph: SbnGraph
    notes: dict


@dataclass(frozen=True)
class TruncatedExponential:
    """Exponential(lam) rounded up to an integer, truncated at n_max.

    pmf[k-1] is proportional to the exponential mass on (k-1, k]; tail_mass
    is the pre-renormalization mass beyond n_max, reported so truncation
    error stays auditable.
    """

    lam: float
    n_max: int
    pmf: np.ndarray
    tail_mass: float

    @classmethod
    def fit(cls, lam: float, tail_tol: float = DEFAULT_TAIL_TOL,
            n_cap: int = DEFAULT_N_CAP,
            cap_mode: str = "error") -> "TruncatedExponential":
        """Smallest truncation with tail mass <= tail_tol.

        If that needs more than n_cap values, cap_mode decides: "error"
        raises (the joint support grows like 2^n), "truncate" caps at
        n_cap and reports the larger tail.
        """
        if lam <= 0:
            raise ContractError("lambda must be positive")
        if tail_tol <= 0 or tail_tol >= 1:
            raise ContractError("tail_tol must be in (0, 1)")
        n_needed = max(1, math.ceil(-math.log(tail_tol) / lam))
        if n_needed > n_cap:
            if cap_mode == "error":
                raise CapacityError(
                    f"tail tolerance {tail_tol} needs n_max={n_needed}, above "
                    f"the cap {n_cap} (support grows like 2^n)",
                    bound=n_needed)
            if cap_mode != "truncate":
                raise ContractError(f"unknown cap_mode {cap_mode!r}")
        n_max = min(n_needed, n_cap)
        k = np.arange(1, n_max + 1)
        mass = np.exp(-lam * (k - 1)) - np.exp(-lam * k)
        tail = math.exp(-lam * n_max)
        return cls(lam=lam, n_max=n_max, pmf=mass / (1.0 - tail),
                   tail_mass=tail)


def point_mass_pmf(n: int) -> np.ndarray:
    """Degenerate length distribution: always n (test fixtures)."""
    pmf = np.zeros(n)
    pmf[-1] = 1.0
    return pmf


def bitstrings(n_max: int) -> list[str]:
    """All bit strings of lengths 1..n_max, shortest first, then lexicographic.

    With this order the strings of length n occupy the contiguous index
    range [2^n - 2, 2^(n+1) - 2).
    """
    out = []
    for n in range(1, n_max + 1):
        out.extend(format(i, f"0{n}b") for i in range(1 << n))
    return out


def popcount_feature(strings: list[str], n_max: int) -> Feature:
    counts = np.fromiter((s.count("1") for s in strings),
                         dtype=np.int64, count=len(strings))
    return Feature(size=n_max + 1, by_index=counts)


def _string_nodes(pmf: np.ndarray, n_max: int):
    """The (a, b) chance nodes: length draw and uniform bit string."""
    a = ChanceSpec(Domain(range(1, n_max + 1)),
                   TableCpd((), {(): tuple(float(p) for p in pmf)}))
    strings = bitstrings(n_max)
    lo = (1 << np.arange(1, n_max + 1, dtype=np.int64)) - 2
    hi = (1 << np.arange(2, n_max + 2, dtype=np.int64)) - 2
    b = ChanceSpec(Domain(strings),
                   UniformRangeCpd(("a",), [Feature(n_max)], lo, hi))
    return a, b, strings


def _constant_guess_family(name: str, n_strings: int, g_max: int,
                           extra=()) -> StrategyFamily:
    ignore_b = Feature(1, np.zeros(n_strings, dtype=np.int64))
    members = [(f"constant-{g}",
                DeterministicCpd(("b",), [ignore_b],
                                 np.array([g], dtype=np.int64)))
               for g in range(g_max + 1)]
    members.extend(extra)
    return StrategyFamily(name, tuple(members), deterministic=True)


def _resolve_length_dist(lam, tail_tol, n_cap, cap_mode, fixed_n):
    if fixed_n is not None:
        if fixed_n < 1:
            raise ContractError("fixed_n must be >= 1")
        return point_mass_pmf(fixed_n), fixed_n, 0.0
    dist = TruncatedExponential.fit(lam, tail_tol, n_cap, cap_mode)
    return dist.pmf, dist.n_max, dist.tail_mass


def make_nocount(lam: float = 1.0, tail_tol: float = DEFAULT_TAIL_TOL,
                 g_max: int | None = None, n_cap: int = DEFAULT_N_CAP,
                 cap_mode: str = "error",
                 fixed_n: int | None = None) -> GameBundle:
    """Single-player popcount guessing with constant guesses only."""
    pmf, n_max, tail = _resolve_length_dist(lam, tail_tol, n_cap, cap_mode,
                                            fixed_n)
    if g_max is None:
        g_max = n_max
    if g_max < n_max:
        raise ContractError(f"g_max {g_max} < n_max {n_max}: the best guess "
                            f"could be out of reach")
    a, b, strings = _string_nodes(pmf, n_max)
    x = StrategicSpec(Domain(range(g_max + 1)), 0,
                      _constant_guess_family("constant-guesses",
                                             len(strings), g_max))
    popc = popcount_feature(strings, n_max)
    hit = np.zeros((n_max + 1) * (g_max + 1), dtype=np.int64)
    for c in range(n_max + 1):
        hit[c * (g_max + 1) + c] = 1
    pi = PayoffSpec(
        Domain([payoff_vector(0), payoff_vector(1)]), "all",
        DeterministicCpd(("b", "x"), [popc, Feature(g_max + 1)], hit))
    graph = SbnGraph(1, {"a": a, "b": b, "x": x, "pi": pi})
    return GameBundle(graph, {
        "x": "constant guesses 0..g_max, the constant-time proxy",
        "n_max": n_max, "tail_mass": tail, "g_max": g_max})


@dataclass(frozen=True)
class BestConstant:
    """Win probabilities of every constant guess, plus the argmax."""

    g_star: int
    win_prob: float
    table: np.ndarray
    conjectured: int   # round-half-up of 1/(2*lambda)
    n_max: int
    tail_mass: float


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def constant_win_table(pmf: np.ndarray, g_max: int) -> np.ndarray:
    """win[g] = sum_n pmf(n) * C(n, g) / 2^n, for g in 0..g_max."""
    n_max = len(pmf)
    terms = np.zeros((g_max + 1, n_max))
    for g in range(g_max + 1):
        for n in range(1, n_max + 1):
            terms[g, n - 1] = pmf[n - 1] * (math.comb(n, g) / 2 ** n)
    return terms.sum(axis=1)


def best_constant_guess(lam: float, tail_tol: float = DEFAULT_TAIL_TOL,
                        g_max: int | None = None, n_cap: int = DEFAULT_N_CAP,
                        cap_mode: str = "error") -> BestConstant:
    """Best constant guess under the truncated length distribution.

    The comparison of g_star with round(1/(2*lambda)) is a reported
    conjecture, never an assertion.
    """
    dist = TruncatedExponential.fit(lam, tail_tol, n_cap, cap_mode)
    if g_max is None:
        g_max = dist.n_max
    table = constant_win_table(dist.pmf, g_max)
    g_star = int(np.argmax(table))          # lowest index wins ties
    return BestConstant(g_star=g_star, win_prob=float(table[g_star]),
                        table=table,
                        conjectured=round_half_up(1.0 / (2.0 * lam)),
                        n_max=dist.n_max, tail_mass=dist.tail_mass)


def make_two_player_nocount(lam: float = 1.0,
                            tail_tol: float = DEFAULT_TAIL_TOL,
                            g_max: int | None = None,
                            n_cap: int = DEFAULT_N_CAP,
                            cap_mode: str = "error",
                            fixed_n: int | None = None) -> GameBundle:
    """Two guessers; only player 1's family contains the exact counter.

    Payoffs: both correct split the prize (1/2 each), one correct takes it,
    nobody correct gets nothing.
    """
    pmf, n_max, tail = _resolve_length_dist(lam, tail_tol, n_cap, cap_mode,
                                            fixed_n)
    if g_max is None:
        g_max = n_max
    if g_max < n_max:
        raise ContractError(f"g_max {g_max} < n_max {n_max}")
    a, b, strings = _string_nodes(pmf, n_max)
    popc = popcount_feature(strings, n_max)

    x = StrategicSpec(Domain(range(g_max + 1)), 0,
                      _constant_guess_family("constant-guesses",
                                             len(strings), g_max))
    counter = ("counter", DeterministicCpd(
        ("b",), [popc], np.arange(n_max + 1, dtype=np.int64)))
    y = StrategicSpec(Domain(range(g_max + 1)), 1,
                      _constant_guess_family("guesses-and-counter",
                                             len(strings), g_max,
                                             extra=[counter]))

    outcomes = Domain([payoff_vector(0, 0), payoff_vector(1, 0),
                       payoff_vector(0, 1),
                       payoff_vector(Fraction(1, 2), Fraction(1, 2))])
    rule = np.zeros((n_max + 1) * (g_max + 1) * (g_max + 1), dtype=np.int64)
    t = 0
    for c in range(n_max + 1):
        for gx in range(g_max + 1):
            for gy in range(g_max + 1):
                x_hit, y_hit = gx == c, gy == c
                rule[t] = (3 if x_hit and y_hit
                           else 1 if x_hit else 2 if y_hit else 0)
                t += 1
    pi = PayoffSpec(outcomes, "all",
                    DeterministicCpd(("b", "x", "y"),
                                     [popc, Feature(g_max + 1),
                                      Feature(g_max + 1)], rule))
    graph = SbnGraph(2, {"a": a, "b": b, "x": x, "y": y, "pi": pi})
    return GameBundle(graph, {
        "x": "constant guesses, the constant-time proxy",
        "y": "constant guesses plus the exact counter, the linear-time proxy",
        "n_max": n_max, "tail_mass": tail, "g_max": g_max})


@dataclass(frozen=True)
class SkewSymmetricGame:
    """Skew-symmetric payoff matrix with entries exact at `decimals` places."""

    n: int
    decimals: int
    matrix: np.ndarray
    scaled: np.ndarray   # integer entries; matrix = scaled / 10^decimals

    def entry_fraction(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.scaled[i, j]), 10 ** self.decimals)


def gen_skew_symmetric(n: int, decimals: int, seed: int) -> SkewSymmetricGame:
    """Upper triangle from seeded standard normals rounded to `decimals`;
    the lower triangle mirrors with opposite sign, diagonal zero."""
    if n < 1:
        raise ContractError("n must be >= 1")
    if decimals < 0:
        raise ContractError("decimals must be >= 0")
    z = rng.normals(seed, n * (n - 1) // 2)
    scale = 10 ** decimals
    scaled = np.zeros((n, n), dtype=np.int64)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            s = int(np.rint(z[k] * scale))
            scaled[i, j] = s
            scaled[j, i] = -s
            k += 1
    return SkewSymmetricGame(n=n, decimals=decimals,
                             matrix=scaled / float(scale), scaled=scaled)


def gen_pool(pool_size: int, n_min: int, n_max: int, decimals: int,
             seed: int) -> list[SkewSymmetricGame]:
    """Seeded pool of subgames with sizes drawn uniformly from [n_min, n_max]."""
    if not (1 <= n_min <= n_max):
        raise ContractError("need 1 <= n_min <= n_max")
    pool = []
    for i in range(pool_size):
        u, _ = rng.next_uniform(rng.stream_state(seed, 2 * i))
        size = n_min + min(int(u * (n_max - n_min + 1)), n_max - n_min)
        pool.append(gen_skew_symmetric(size, decimals,
                                       rng.stream_state(seed, 2 * i + 1)))
    return pool


NASH_MEMBER = "lp-nash"


def _member_table(name: str, pool: list[SkewSymmetricGame],
                  max_n: int) -> np.ndarray:
    """Mixed strategy per subgame, as a (pool, max_n) row-stochastic table."""
    table = np.zeros((len(pool), max_n))
    for gi, g in enumerate(pool):
        if name == NASH_MEMBER:
            row = symmetric_nash_skew(g.matrix).probs
            row = np.maximum(row, 0.0)
            table[gi, :g.n] = row / row.sum()
        elif name == "uniform":
            table[gi, :g.n] = 1.0 / g.n
        elif name == "br-to-uniform":
            payoffs = g.matrix @ np.full(g.n, 1.0 / g.n)
            table[gi, int(np.argmax(payoffs))] = 1.0
        elif name.startswith("pure-"):
            try:
                k = int(name[5:])
            except ValueError:
                raise ContractError(f"bad family member {name!r}") from None
            table[gi, min(k, g.n - 1)] = 1.0
        else:
            raise ContractError(f"unknown family member {name!r}")
    return table


def make_letsplay(subgames: list[SkewSymmetricGame], weights,
                  a_family_spec=(NASH_MEMBER,),
                  b_family_spec=("uniform", "pure-0", "br-to-uniform"),
                  ) -> GameBundle:
    """Subgame-drawing game; see the module docstring.

    a_family_spec must contain "lp-nash"; b_family_spec must not (player
    B's family models the strictly lower complexity budget).
    """
    if not subgames:
        raise ContractError("need at least one subgame")
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape != (len(subgames),):
        raise ContractError("one weight per subgame required")
    if weights.min() < 0 or abs(weights.sum() - 1.0) > 1e-9:
        raise ContractError("weights must be a distribution")
    weights = weights / weights.sum()
    if NASH_MEMBER not in a_family_spec:
        raise ContractError(f"player A's family must include {NASH_MEMBER!r}")
    if NASH_MEMBER in b_family_spec:
        raise ContractError(f"player B's family may not include "
                            f"{NASH_MEMBER!r}: B is the restricted player")
    max_n = max(g.n for g in subgames)
    pool_feat = [Feature(len(subgames))]

    def family(name, spec, owner):
        members = tuple(
            (member, FeatureTableCpd(("G",), pool_feat,
                                     _member_table(member, subgames, max_n)))
            for member in spec)
        return StrategicSpec(Domain(range(max_n)), owner,
                             StrategyFamily(name, members))

    # Payoff values: exact fixed-point pairs (v, -v) from the pool entries.
    pairs = {(Fraction(0), Fraction(0))}
    for g in subgames:
        for i in range(g.n):
            for j in range(g.n):
                v = g.entry_fraction(i, j)
                pairs.add((v, -v))
    outcome_domain = Domain(sorted(pairs))
    index = {v: i for i, v in enumerate(outcome_domain)}
    zero = index[(Fraction(0), Fraction(0))]
    rule = np.full(len(subgames) * max_n * max_n, zero, dtype=np.int64)
    t = 0
    for g in subgames:
        for i in range(max_n):
            for j in range(max_n):
                if i < g.n and j < g.n:
                    v = g.entry_fraction(i, j)
                    rule[t] = index[(v, -v)]
                t += 1

    graph = SbnGraph(2, {
        "G": ChanceSpec(Domain(range(len(subgames))),
                        TableCpd((), {(): tuple(weights.tolist())})),
        "Sa": family("a-strategies", a_family_spec, 0),
        "Sb": family("b-strategies", b_family_spec, 1),
        "pi": PayoffSpec(outcome_domain, "all",
                         DeterministicCpd(
                             ("G", "Sa", "Sb"),
                             [Feature(len(subgames)), Feature(max_n),
                              Feature(max_n)], rule)),
    })
    return GameBundle(graph, {
        "Sa": f"members {list(a_family_spec)}; lp-nash proxies the "
              f"equilibrium-computation budget",
        "Sb": f"members {list(b_family_spec)}; the responder-level budget",
        "sizes": [g.n for g in subgames]})


def best_response_failures(subgames: list[SkewSymmetricGame],
                           member_table: np.ndarray,
                           tol: float = 1e-9) -> list[bool]:
    """Per subgame: does this member fail to best-respond to lp-nash?

    True means the member's payoff against the equilibrium strategy falls
    short of the best response value (which is 0 up to LP tolerance), the
    condition under which player A strictly profits on that subgame.
    """
    out = []
    for gi, g in enumerate(subgames):
        nash = symmetric_nash_skew(g.matrix).probs
        against = g.matrix @ nash
        got = float(member_table[gi, :g.n] @ against)
        out.append(got < against.max() - tol)
    return out
