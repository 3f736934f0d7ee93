"""Game-theoretic computations on normal-form games.

Includes the induced normal form of an SBN (pure strategies = joint action
choices per player, payoffs by exact inference), best responses, epsilon-
Nash checks, a dense-tableau simplex with Bland's rule for zero-sum games,
symmetric equilibria of skew-symmetric games, and support enumeration for
tiny bimatrix games.

The zero-sum solver works on the row player's payoff matrix A: it solves
max_x min_j (x^T A)_j over mixed x by LP, after shifting A positive and
taking the dual so the slack basis is immediately feasible. The duality
gap is verified by independently solving the column player's problem.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ContractError, InternalError
from .inference import exact_expected_payoffs
from .model import SbnGraph, StrategyProfile, bind, require_valid

LP_FEASIBILITY_TOL = 1e-9
DUALITY_GAP_TOL = 1e-7
NASH_REGRET_TOL = 1e-7
DEDUP_TOL = 1e-6
SKEW_TOL = 1e-12


@dataclass(frozen=True)
class MixedStrategy:
    """Probability vector over one player's pure strategies."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", p)
        if p.ndim != 1 or len(p) == 0:
            raise ContractError("a mixed strategy is a non-empty vector")
        if p.min() < -1e-9 or abs(p.sum() - 1.0) > 1e-9:
            raise ContractError(f"not a distribution: {p}")

    @classmethod
    def pure(cls, index: int, size: int) -> "MixedStrategy":
        p = np.zeros(size)
        p[index] = 1.0
        return cls(p)

    @classmethod
    def uniform(cls, size: int) -> "MixedStrategy":
        return cls(np.full(size, 1.0 / size))

    def __len__(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class ZeroSumSolution:
    """Maximin solution for the row player of a zero-sum matrix game.

    certificate[j] is the opponent's payoff for their j-th pure strategy
    against `strategy` (the opponent side of x^T A). The maximin guarantee
    is certificate <= -value + tol; for skew-symmetric games value is 0 and
    this is the familiar 'no pure strategy beats the equilibrium'.
    """

    value: float
    strategy: MixedStrategy
    certificate: np.ndarray
    duality_gap: float
    column_strategy: MixedStrategy


def _simplex_max_leq(c: np.ndarray, A: np.ndarray, b: np.ndarray,
                     tol: float = LP_FEASIBILITY_TOL):
    """Maximize c.x s.t. Ax <= b, x >= 0, where b >= 0.

    Dense tableau with Bland's anti-cycling rule (lowest-index entering
    column, ratio ties broken by lowest basis variable). Returns
    (x, objective, duals).
    """
    m, n = A.shape
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -c
    basis = np.arange(n, n + m)
    for _ in range(10000):
        enter = -1
        for j in range(n + m):
            if T[m, j] < -tol:
                enter = j
                break
        if enter < 0:
            break
        col = T[:m, enter]
        rows = np.where(col > tol)[0]
        if len(rows) == 0:
            raise InternalError("unbounded LP; cannot happen for finite games")
        ratios = T[rows, -1] / col[rows]
        rmin = ratios.min()
        ties = rows[ratios == rmin]
        leave = ties[np.argmin(basis[ties])]
        T[leave] /= T[leave, enter]
        for i in range(m + 1):
            if i != leave and T[i, enter] != 0.0:
                T[i] -= T[i, enter] * T[leave]
        basis[leave] = enter
    else:
        raise InternalError("simplex did not terminate")
    x = np.zeros(n)
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = T[i, -1]
    return x, T[m, -1], np.maximum(T[m, n:n + m], 0.0)


def _lp_game_value(A: np.ndarray):
    """(value, row strategy, column strategy) of the matrix game A."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.size == 0:
        raise ContractError("payoff matrix must be 2-D and non-empty")
    shift = 1.0 - A.min()
    t, obj, duals = _simplex_max_leq(np.ones(A.shape[1]), A + shift,
                                     np.ones(A.shape[0]))
    value = 1.0 / obj - shift
    row = duals / duals.sum()
    col = np.maximum(t, 0.0)
    col /= col.sum()
    return value, row, col


def zero_sum_solve(matrix) -> ZeroSumSolution:
    """Maximin value and strategy of the row player, via the simplex.

    The column player's LP is solved independently to confirm the duality
    gap is below tolerance.
    """
    A = np.asarray(matrix, dtype=np.float64)
    value, row, col = _lp_game_value(A)
    value_col, _, _ = _lp_game_value(-A.T)
    gap = abs(value + value_col)
    if gap > DUALITY_GAP_TOL:
        raise InternalError(f"LP duality gap {gap} above {DUALITY_GAP_TOL}")
    certificate = -(row @ A)
    if certificate.max() > -value + DUALITY_GAP_TOL:
        raise InternalError("maximin guarantee violated by solver output")
    return ZeroSumSolution(value=value, strategy=MixedStrategy(row),
                           certificate=certificate, duality_gap=gap,
                           column_strategy=MixedStrategy(col))


def symmetric_nash_skew(matrix) -> MixedStrategy:
    """Symmetric equilibrium strategy of a skew-symmetric matrix game.

    For A = -A^T the game value is 0 and the maximin strategy m is a best
    response to itself with m^T A m = 0; both are checked before returning.
    """
    A = np.asarray(matrix, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractError("skew-symmetric input must be square")
    if np.abs(A + A.T).max() > SKEW_TOL:
        raise ContractError("matrix is not skew-symmetric within 1e-12")
    sol = zero_sum_solve(A)
    m = sol.strategy.probs
    if sol.certificate.max() > NASH_REGRET_TOL:
        raise InternalError("self-play certificate exceeds tolerance")
    if abs(m @ A @ m) > 1e-9:
        raise InternalError("m^T A m not numerically zero")
    return sol.strategy


@dataclass
class NormalFormGame:
    """Simultaneous-move game: per-player strategy labels + payoff tensor.

    tensor has shape (*strategy_counts, n_players); entry [i0,..,ik, p] is
    player p's payoff under the joint pure profile (i0..ik).
    """

    n_players: int
    strategy_labels: list[list]
    tensor: np.ndarray

    @property
    def shape(self) -> tuple[int, ...]:
        return self.tensor.shape[:-1]

    def payoffs(self, joint: tuple[int, ...]) -> np.ndarray:
        return self.tensor[tuple(joint)]

    def matrix(self, player: int) -> np.ndarray:
        if self.n_players != 2:
            raise ContractError("matrix view requires a 2-player game")
        return self.tensor[..., player]


def bimatrix_game(A, B, row_labels=None, col_labels=None) -> NormalFormGame:
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape:
        raise ContractError("bimatrix halves must share a shape")
    tensor = np.stack([A, B], axis=-1)
    return NormalFormGame(
        2,
        [row_labels or list(range(A.shape[0])),
         col_labels or list(range(A.shape[1]))],
        tensor)


def zero_sum_bimatrix(A, **kw) -> NormalFormGame:
    A = np.asarray(A, dtype=np.float64)
    return bimatrix_game(A, -A, **kw)


def induced_normal_form(graph: SbnGraph,
                        max_support: int | None = None) -> NormalFormGame:
    """The simultaneous-move game an SBN induces over joint action choices.

    Each player's pure strategies are the cross product of the action
    indices at their strategic nodes (label = tuple of (node, index));
    payoffs come from exact inference of each bound profile.
    """
    require_valid(graph)
    per_player: list[list[str]] = [[] for _ in range(graph.n_players)]
    for name in sorted(graph.strategic_ids()):
        per_player[graph.nodes[name].owner].append(name)
    labels = []
    for nodes in per_player:
        combos = itertools.product(
            *[[(n, i) for i in range(len(graph.nodes[n].family))]
              for n in nodes])
        labels.append([tuple(c) for c in combos])
    shape = [len(ls) for ls in labels]
    tensor = np.zeros(shape + [graph.n_players])
    for joint in itertools.product(*[range(s) for s in shape]):
        choices: dict[str, int] = {}
        for p, idx in enumerate(joint):
            choices.update(dict(labels[p][idx]))
        tensor[joint] = exact_expected_payoffs(
            bind(graph, StrategyProfile(choices)), max_support)
    return NormalFormGame(graph.n_players, labels, tensor)


def _as_probs(entry, size: int) -> np.ndarray:
    if isinstance(entry, MixedStrategy):
        p = entry.probs
    elif isinstance(entry, (int, np.integer)):
        p = np.zeros(size)
        p[entry] = 1.0
    else:
        p = np.asarray(entry, dtype=np.float64)
    if p.shape != (size,):
        raise ContractError(f"strategy has {p.shape} entries, expected {size}")
    return p


def best_response(game: NormalFormGame, player: int, others,
                  tol: float = 1e-9) -> tuple[list[int], float]:
    """All maximizing pure strategies against fixed opponents, plus value.

    `others` holds one strategy per player (mixed, vector, or pure index);
    the entry at `player` is ignored. Ties within `tol` are all returned,
    lowest index first (the canonical representative).
    """
    payoff = game.tensor[..., player]
    for q in sorted((q for q in range(game.n_players) if q != player),
                    reverse=True):
        payoff = np.tensordot(payoff, _as_probs(others[q], game.shape[q]),
                              axes=([q], [0]))
    value = float(payoff.max())
    ties = [i for i in range(len(payoff)) if payoff[i] >= value - tol]
    return ties, value


def expected_payoffs(game: NormalFormGame, profile) -> np.ndarray:
    """Per-player expected payoffs under a complete mixed profile."""
    t = game.tensor
    for q in reversed(range(game.n_players)):
        t = np.tensordot(t, _as_probs(profile[q], game.shape[q]),
                         axes=([q], [0]))
    return t


def epsilon_nash_check(game: NormalFormGame, profile,
                       eps: float) -> tuple[bool, float]:
    """(is_nash, max_regret): regret is best-response gain per player."""
    current = expected_payoffs(game, profile)
    max_regret = 0.0
    for p in range(game.n_players):
        _, best = best_response(game, p, profile, tol=0.0)
        max_regret = max(max_regret, best - float(current[p]))
    return max_regret <= eps, max_regret


@dataclass
class SupportEnumerationResult:
    """Equilibria found plus a count of singular support pairs skipped."""

    equilibria: list[tuple[MixedStrategy, MixedStrategy]] = field(
        default_factory=list)
    singular_skipped: int = 0

    def __iter__(self):
        return iter(self.equilibria)

    def __len__(self):
        return len(self.equilibria)

    def __getitem__(self, i):
        return self.equilibria[i]


def _solve_support(P: np.ndarray, feas_tol: float):
    """Mix over the rows of P equalizing all columns, or None.

    Solves [P^T, -1; 1, 0] (x, v) = (0, 1); returns (x, v) if the system is
    nonsingular and x is a distribution within feas_tol.
    """
    k = P.shape[0]
    M = np.zeros((k + 1, k + 1))
    M[:k, :k] = P.T
    M[:k, k] = -1.0
    M[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError:
        return None
    x, v = sol[:k], sol[k]
    if not np.isfinite(x).all() or x.min() < -feas_tol:
        return "infeasible"
    return x, v


def support_enumeration_2p(game: NormalFormGame, max_size: int = 8,
                           feas_tol: float = 1e-8) -> SupportEnumerationResult:
    """All equilibria of a small bimatrix game with equal-size supports.

    Enumerates support pairs of each size, solves the two indifference
    systems, and keeps solutions that are distributions with no profitable
    deviation outside the support. Singular systems (degenerate games) are
    skipped and counted, not perturbed.
    """
    if game.n_players != 2:
        raise ContractError("support enumeration requires a 2-player game")
    m, n = game.shape
    if max(m, n) > max_size:
        raise CapacityError(f"game is {m}x{n}, support enumeration is capped "
                            f"at {max_size}", bound=max(m, n))
    A, B = game.tensor[..., 0], game.tensor[..., 1]
    result = SupportEnumerationResult()

    def already_known(x, y):
        for ex, ey in result.equilibria:
            if (np.abs(ex.probs - x).max() < DEDUP_TOL
                    and np.abs(ey.probs - y).max() < DEDUP_TOL):
                return True
        return False

    for k in range(1, min(m, n) + 1):
        for I in itertools.combinations(range(m), k):
            for J in itertools.combinations(range(n), k):
                sub_a = A[np.ix_(I, J)]
                sub_b = B[np.ix_(I, J)]
                rx = _solve_support(sub_b, feas_tol)   # row mix equalizes B
                if rx is None:
                    result.singular_skipped += 1
                    continue
                ry = _solve_support(sub_a.T, feas_tol)  # col mix equalizes A
                if ry is None:
                    result.singular_skipped += 1
                    continue
                if rx == "infeasible" or ry == "infeasible":
                    continue
                x_s, w = rx
                y_s, v = ry
                x = np.zeros(m)
                x[list(I)] = np.maximum(x_s, 0.0)
                x /= x.sum()
                y = np.zeros(n)
                y[list(J)] = np.maximum(y_s, 0.0)
                y /= y.sum()
                # no profitable deviation outside either support
                if (A @ y).max() > v + feas_tol:
                    continue
                if (x @ B).max() > w + feas_tol:
                    continue
                if not already_known(x, y):
                    result.equilibria.append(
                        (MixedStrategy(x), MixedStrategy(y)))
    return result


def solution_to_json(sol: ZeroSumSolution) -> dict:
    return {"value": sol.value,
            "strategy": sol.strategy.probs.tolist(),
            "certificate": sol.certificate.tolist(),
            "duality_gap": sol.duality_gap,
            "column_strategy": sol.column_strategy.probs.tolist()}
