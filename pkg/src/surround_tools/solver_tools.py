"""
Exact retrograde solver for the five pursuit variants.

States are (cop multiset, robber vertex, side to move). Cop multisets are ranked with the
combinatorial number system, so the state space never holds the k! orderings of the same cops.
Cop-win states are found layer by layer backwards from the terminal states: a cops-to-move
state is won as soon as one joint cop move reaches a won state, a robber-to-move state once a
counter of its legal moves drops to zero. The cop move relation is symmetric, so successor
lists double as predecessor lists. Large arrays are processed in chunks; the result does not
depend on the chunk size.
"""
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import SolverBudgetError, StrategyError
from .game_tools import Configuration, GameSpec, Side, Variant, cop_moves_from, robber_moves_from
from .helper import Stopwatch

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

DEFAULT_BUDGET = 200_000_000
DEFAULT_CHUNK = 4_000_000


class Verdict(str, Enum):
    COP_WIN = 'cop-win'
    ROBBER_WIN = 'robber-win'


def multiset_count(domain: int, k: int) -> int:
    """Number of size-k multisets over ``domain`` positions."""
    return comb(domain + k - 1, k)


def estimate_states(spec: GameSpec) -> int:
    return 2 * multiset_count(spec.domain_size, spec.k) * spec.graph.n

# region state space


class StateSpace:
    """
    Canonical configuration space of one game.

    ``multisets[r]`` is the sorted cop tuple of rank ``r``; ``succ_ptr``/``succ_idx`` hold, in CSR
    form, the ranks reachable by one joint cop move (staying included), ascending per row.
    A :class:`StateIndex` is ``(rank * n + robber) * 2 + side``.
    """

    def __init__(self, spec: GameSpec, budget: int = DEFAULT_BUDGET, chunk: int = DEFAULT_CHUNK):
        self.spec = spec
        self.n = spec.graph.n
        self.k = spec.k
        self.domain = spec.domain_size
        self.size = multiset_count(self.domain, self.k)
        self.states = 2 * self.size * self.n
        if self.states > budget:
            raise SolverBudgetError(self.states, budget)
        self.chunk = chunk
        self.budget = budget
        self._binom = np.array([[comb(x, j) for j in range(self.k + 1)] for x in range(self.domain + self.k)],
                               dtype=np.int64)
        self.multisets = self._enumerate()
        self.move_table = self._move_table()
        self.succ_ptr, self.succ_idx = self._successors()
        self._neighbourhoods()

    # region ranking

    def rank_array(self, ms: np.ndarray) -> np.ndarray:
        """Ranks of sorted multisets along the last axis."""
        offsets = np.arange(self.k)
        return self._binom[ms + offsets, offsets + 1].sum(axis=-1)

    def rank(self, cops: Sequence[int]) -> int:
        return int(self.rank_array(np.array(sorted(cops), dtype=np.int64)))

    def unrank(self, r: int) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.multisets[r])

    def state_index(self, c: Configuration) -> int:
        return (self.rank(c.cops) * self.n + c.robber) * 2 + int(c.to_move)

    def decode(self, index: int) -> Configuration:
        flat, side = divmod(index, 2)
        r, v = divmod(flat, self.n)
        return Configuration(cops=self.unrank(r), robber=v, to_move=Side(side))

    # endregion

    def _enumerate(self) -> np.ndarray:
        arr = np.fromiter((x for combo in combinations_with_replacement(range(self.domain), self.k) for x in combo),
                          dtype=np.int64, count=self.size * self.k).reshape(self.size, self.k)
        ranks = self.rank_array(arr)
        out = np.empty_like(arr)
        out[ranks] = arr
        assert np.array_equal(np.sort(ranks), np.arange(self.size)), 'multiset ranking is not a bijection'
        return out

    def _move_table(self) -> np.ndarray:
        moves = [cop_moves_from(self.spec, p) for p in range(self.domain)]
        width = max(len(m) for m in moves)
        # padding repeats the staying move; duplicates vanish in the per-row dedup
        return np.array([m + [p] * (width - len(m)) for p, m in enumerate(moves)], dtype=np.int64)

    def _successors(self) -> Tuple[np.ndarray, np.ndarray]:
        width = self.move_table.shape[1]
        # distinct partial multisets per row never exceed either bound
        partial = min(width ** max(self.k - 1, 0), multiset_count(self.k * width, max(self.k - 1, 0)))
        rows = max(1, self.chunk // (width * partial * self.k))
        counts = np.zeros(self.size, dtype=np.int64)
        pieces: List[np.ndarray] = []
        entries = 0
        for start in range(0, self.size, rows):
            ms = self.multisets[start:start + rows]
            owner, ranks = self._fold_cops(self.move_table[ms])
            counts[start:start + len(ms)] = np.bincount(owner, minlength=len(ms))
            pieces.append(ranks)
            entries += len(ranks)
            if self.states + entries > self.budget:
                raise SolverBudgetError(self.states + entries, self.budget, unit='states and joint moves')
        ptr = np.zeros(self.size + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])
        idx = np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.int64)
        logger.debug(f'{self.size:,} cop multisets, {len(idx):,} joint moves')
        return ptr, idx

    def _fold_cops(self, options: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Distinct successor multisets of a batch, adding one cop at a time.

        ``options`` is ``[B, k, width]``. Returns ``(owner, ranks)`` sorted by row then rank.
        """
        batch, _, width = options.shape
        owner = np.repeat(np.arange(batch, dtype=np.int64), width)
        cand = options[:, 0, :].reshape(-1, 1)
        owner, cand, ranks = self._dedupe(owner, cand)
        for i in range(1, self.k):
            step = options[owner, i].reshape(-1, 1)
            cand = np.concatenate([np.repeat(cand, width, axis=0), step], axis=1)
            cand.sort(axis=1)
            owner, cand, ranks = self._dedupe(np.repeat(owner, width), cand)
        return owner, ranks

    def _dedupe(self, owner: np.ndarray, cand: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        j = cand.shape[1]
        offsets = np.arange(j)
        ranks = self._binom[cand + offsets, offsets + 1].sum(axis=1)
        keys = owner * multiset_count(self.domain, j) + ranks
        _, first = np.unique(keys, return_index=True)
        return owner[first], cand[first], ranks[first]

    def successors(self, r: int) -> np.ndarray:
        return self.succ_idx[self.succ_ptr[r]:self.succ_ptr[r + 1]]

    def _neighbourhoods(self) -> None:
        g = self.spec.graph
        width = max((g.degree(v) for v in range(self.n)), default=0)
        self.nb_pad = np.full((self.n, width), -1, dtype=np.int64)
        self.inc_pad = np.full((self.n, width), -1, dtype=np.int64)
        for v in range(self.n):
            self.nb_pad[v, :g.degree(v)] = g.adjacency[v]
            self.inc_pad[v, :g.degree(v)] = [g.edge_id(v, w) for w in g.adjacency[v]]
        self.closed_pad = np.concatenate([np.arange(self.n)[:, None], self.nb_pad], axis=1)
        self.degree = np.array([g.degree(v) for v in range(self.n)], dtype=np.int64)

    def occupancy(self, ranks: np.ndarray) -> np.ndarray:
        """
        ``[len(ranks), domain + 1]`` occupancy; the extra last column is always True so that
        ``-1`` padding reads as occupied.
        """
        occ = np.zeros((len(ranks), self.domain + 1), dtype=bool)
        occ[np.arange(len(ranks))[:, None], self.multisets[ranks]] = True
        occ[:, -1] = True
        return occ

# endregion

# region solving


@dataclass(eq=False)
class SolveResult:
    """
    Outcome of :func:`solve_fixed_k`.

    ``rank_robber[r, v]`` / ``rank_cops[r, v]`` is the number of half-moves the cops need to win from
    the robber-to-move / cops-to-move state, ``-1`` where the robber escapes forever.
    """
    verdict: Verdict
    spec: GameSpec = field(repr=False)
    space: StateSpace = field(repr=False)
    rank_robber: np.ndarray = field(repr=False)
    rank_cops: np.ndarray = field(repr=False)
    placement: Optional[Tuple[int, ...]] = None
    placement_rank: Optional[int] = None
    stats: Dict[str, float] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.spec.k

    @property
    def variant(self) -> Variant:
        return self.spec.variant

    def winning_bitmap(self) -> np.ndarray:
        """Packed cop-win bits over state indices."""
        both = np.stack([self.rank_cops >= 0, self.rank_robber >= 0], axis=-1).reshape(-1)
        return np.packbits(both)

    def state_rank(self, c: Configuration) -> int:
        r = self.space.rank(c.cops)
        table = self.rank_robber if c.to_move is Side.ROBBER else self.rank_cops
        return int(table[r, c.robber])

    def is_cop_win(self, c: Configuration) -> bool:
        return self.state_rank(c) >= 0

    def summary(self) -> Dict[str, object]:
        return {
            'variant': self.variant.value,
            'k': self.k,
            'verdict': self.verdict.value,
            'placement': list(self.placement) if self.placement is not None else None,
            'placement_rank': self.placement_rank,
            'stats': dict(self.stats),
        }


def _initial_layer(space: StateSpace) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    spec = space.spec
    variant = spec.variant
    n = space.n
    rank_robber = np.full((space.size, n), -1, dtype=np.int32)
    rank_cops = np.full((space.size, n), -1, dtype=np.int32)
    counter = np.empty((space.size, n), dtype=np.int16)
    rows = max(1, space.chunk // max(1, n * (space.nb_pad.shape[1] + 1)))
    for start in range(0, space.size, rows):
        ranks = np.arange(start, min(space.size, start + rows))
        occ = space.occupancy(ranks)
        if variant is Variant.CLASSICAL:
            caught = occ[:, :n]
            rank_robber[ranks[:, None], np.arange(n)[None, :]] = np.where(caught, 0, -1)
            rank_cops[ranks[:, None], np.arange(n)[None, :]] = np.where(caught, 0, -1)
            counter[ranks] = space.degree + 1
            continue
        if variant.on_edges:
            surrounded = occ[:, space.inc_pad].all(axis=2)
            if variant is Variant.EDGE_R:
                counter[ranks] = 1 + (~occ[:, space.inc_pad]).sum(axis=2)
            else:
                counter[ranks] = space.degree + 1
        else:
            surrounded = occ[:, space.nb_pad].all(axis=2)
            if variant is Variant.VERTEX_R:
                free = (~occ[:, space.closed_pad]).sum(axis=2)
                assert not np.any((free == 0) & ~surrounded), 'stuck robber must be surrounded'
                counter[ranks] = free
            else:
                counter[ranks] = space.degree + 1
        rank_robber[ranks[:, None], np.arange(n)[None, :]] = np.where(surrounded, 0, -1)
    return rank_robber, rank_cops, counter


def _expand_rows(space: StateSpace, rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Repeats each row index once per successor and returns (row position, successor rank)."""
    starts = space.succ_ptr[rows]
    lengths = space.succ_ptr[rows + 1] - starts
    total = int(lengths.sum())
    owner = np.repeat(np.arange(len(rows)), lengths)
    offsets = np.arange(total) - np.repeat(np.cumsum(lengths) - lengths, lengths)
    return owner, space.succ_idx[np.repeat(starts, lengths) + offsets]


def _batches(space: StateSpace, frontier: np.ndarray, fan_out: float):
    size = max(1, int(space.chunk // max(1.0, fan_out)))
    for start in range(0, len(frontier), size):
        yield frontier[start:start + size]


def _cops_layer(space: StateSpace, frontier: np.ndarray, rank_cops: np.ndarray, t: int) -> np.ndarray:
    # robber-to-move states of rank t make every cop predecessor a win of rank t + 1
    n = space.n
    fan_out = len(space.succ_idx) / max(1, space.size)
    flat = rank_cops.reshape(-1)
    won = []
    for batch in _batches(space, frontier, fan_out):
        r, v = np.divmod(batch, n)
        owner, pred = _expand_rows(space, r)
        cand = pred * n + v[owner]
        cand = np.unique(cand[flat[cand] < 0])
        flat[cand] = t + 1
        won.append(cand)
    return np.concatenate(won) if won else np.zeros(0, dtype=np.int64)


def _robber_layer(space: StateSpace, frontier: np.ndarray, rank_robber: np.ndarray, counter: np.ndarray,
                  t: int) -> np.ndarray:
    # cops-to-move states of rank t decrement the counters of their robber predecessors
    variant = space.spec.variant
    n = space.n
    flat_rank = rank_robber.reshape(-1)
    flat_counter = counter.reshape(-1)
    won = []
    for batch in _batches(space, frontier, space.closed_pad.shape[1]):
        r, v = np.divmod(batch, n)
        cops = space.multisets[r]
        if variant is Variant.VERTEX_R:
            # the robber never moves onto a cop, such states have no predecessors
            free = ~(cops == v[:, None]).any(axis=1)
            r, v, cops = r[free], v[free], cops[free]
        pred = space.closed_pad[v]                          # [F, 1 + width]
        legal = pred >= 0
        if variant is Variant.EDGE_R:
            edges = space.inc_pad[v]                         # [F, width]
            blocked = (cops[:, None, :] == edges[:, :, None]).any(axis=2)
            legal[:, 1:] &= ~blocked
        rows = np.broadcast_to(r[:, None], pred.shape)[legal]
        idx = rows * n + pred[legal]
        idx = idx[flat_rank[idx] < 0]
        uniq, hits = np.unique(idx, return_counts=True)
        flat_counter[uniq] -= hits.astype(np.int16)
        done = uniq[flat_counter[uniq] == 0]
        flat_rank[done] = t + 1
        won.append(done)
    return np.concatenate(won) if won else np.zeros(0, dtype=np.int64)


def _choose_placement(space: StateSpace, rank_cops: np.ndarray) -> Tuple[Optional[Tuple[int, ...]], Optional[int]]:
    variant = space.spec.variant
    best_value, best = None, None
    rows = max(1, space.chunk // max(1, space.n))
    for start in range(0, space.size, rows):
        ranks = np.arange(start, min(space.size, start + rows))
        table = rank_cops[ranks]
        allowed = np.ones(table.shape, dtype=bool)
        if variant is Variant.VERTEX_R:
            allowed = ~space.occupancy(ranks)[:, :space.n]
        wins = np.all((table >= 0) | ~allowed, axis=1)
        values = np.where(allowed, table, 0).max(axis=1, initial=0)
        for r in ranks[wins]:
            value = int(values[r - start])
            candidate = space.unrank(int(r))
            if best_value is None or (value, candidate) < (best_value, best):
                best_value, best = value, candidate
    return best, best_value


def solve_fixed_k(spec: GameSpec, budget: int = DEFAULT_BUDGET, chunk: int = DEFAULT_CHUNK) -> SolveResult:
    """
    Decides whether ``spec.k`` cops win ``spec.variant`` on ``spec.graph``.

    :param spec: Game to solve.
    :param budget: Maximum number of states (both sides to move).
    :param chunk: Array elements processed per vectorised step.
    :return: Verdict, rank tables and the optimal cop placement when the cops win.
    :raises SolverBudgetError: If the state space exceeds ``budget``; never a wrong verdict.
    """
    with Stopwatch() as total:
        with Stopwatch() as build:
            space = StateSpace(spec, budget=budget, chunk=chunk)
        logger.info(f'solving {spec.variant.value} k={spec.k} on n={spec.graph.n}: {space.states:,} states')
        rank_robber, rank_cops, counter = _initial_layer(space)
        if spec.variant is Variant.CLASSICAL:
            cops_front = np.flatnonzero(rank_cops.reshape(-1) == 0)
        else:
            cops_front = np.zeros(0, dtype=np.int64)
        robber_front = np.flatnonzero(rank_robber.reshape(-1) == 0)
        t = 0
        while len(robber_front) or len(cops_front):
            logger.debug(f'layer {t}: {len(robber_front):,} robber-to-move, {len(cops_front):,} cops-to-move')
            next_cops = _cops_layer(space, robber_front, rank_cops, t)
            next_robber = _robber_layer(space, cops_front, rank_robber, counter, t)
            robber_front, cops_front = next_robber, next_cops
            t += 1
        placement, placement_rank = _choose_placement(space, rank_cops)
    verdict = Verdict.COP_WIN if placement is not None else Verdict.ROBBER_WIN
    stats = {
        'states': space.states,
        'transitions': int(len(space.succ_idx)),
        'layers': t,
        'cop_win_states': int((rank_robber >= 0).sum() + (rank_cops >= 0).sum()),
        'build_seconds': round(build.elapsed, 3),
        'seconds': round(total.elapsed, 3),
    }
    logger.info(f'{spec.variant.value} k={spec.k}: {verdict.value} after {t} layers in {total.elapsed:.2f} s')
    return SolveResult(verdict=verdict, spec=spec, space=space, rank_robber=rank_robber, rank_cops=rank_cops,
                       placement=placement, placement_rank=placement_rank, stats=stats)

# endregion

# region strategies


class CopPolicy:
    """
    Optimal cop play extracted from a result. A strict policy needs a cop-win result; a lenient one
    also plays the cop-win states of a robber-win game.
    """

    def __init__(self, result: SolveResult, strict: bool = True):
        if strict and result.verdict is not Verdict.COP_WIN:
            raise StrategyError('no cop strategy in a robber-win game')
        self.result = result

    def place(self) -> Tuple[int, ...]:
        """The optimal placement, or in a robber-win game the one leaving the robber fewest safe vertices."""
        if self.result.placement is not None:
            return self.result.placement
        safe = (self.result.rank_cops < 0).sum(axis=1)
        return self.result.space.unrank(int(np.argmin(safe)))

    def wins(self, cops: Sequence[int], robber: int) -> bool:
        """Whether the cops to move at ``(cops, robber)`` are in their winning region."""
        return int(self.result.rank_cops[self.result.space.rank(cops), robber]) >= 0

    def move(self, cops: Sequence[int], robber: int) -> Tuple[int, ...]:
        """
        Rank-decreasing joint move from a cops-to-move state, lexicographically smallest among optimal.

        :raises StrategyError: Outside the cops' winning region.
        """
        space = self.result.space
        r = space.rank(cops)
        value = int(self.result.rank_cops[r, robber])
        if value < 0:
            raise StrategyError(f'cops {tuple(sorted(cops))} robber {robber} is outside the cop-win region')
        if value == 0:
            return tuple(sorted(cops))
        succ = space.successors(r)
        good = succ[self.result.rank_robber[succ, robber] == value - 1]
        return min(space.unrank(int(s)) for s in good)


class RobberPolicy:
    """
    Robber play extracted from a result: never enters the cop-win set when it can avoid it.
    With ``delaying`` the robber in a lost state picks the move the cops need longest to punish;
    otherwise such queries raise.
    """

    def __init__(self, result: SolveResult, delaying: bool = False):
        self.result = result
        self.delaying = delaying

    def place(self, cops: Sequence[int]) -> int:
        space = self.result.space
        spec = self.result.spec
        r = space.rank(cops)
        options = [v for v in range(space.n) if not (spec.variant is Variant.VERTEX_R and v in cops)]
        if not options:
            raise StrategyError('no legal robber placement')
        ranks = self.result.rank_cops[r]
        safe = [v for v in options if ranks[v] < 0]
        if safe:
            return safe[0]
        if not self.delaying:
            raise StrategyError(f'every placement against {tuple(sorted(cops))} loses')
        return max(options, key=lambda v: (int(ranks[v]), -v))

    def move(self, cops: Sequence[int], robber: int) -> int:
        space = self.result.space
        spec = self.result.spec
        r = space.rank(cops)
        options = robber_moves_from(spec, Configuration.of(cops, robber, Side.ROBBER))
        if not options:
            raise StrategyError('robber has no legal move')
        ranks = self.result.rank_cops[r]
        safe = [w for w in options if ranks[w] < 0]
        if safe:
            return safe[0]
        if not self.delaying:
            raise StrategyError(f'cops {tuple(sorted(cops))} robber {robber} is outside the robber-win region')
        return max(options, key=lambda w: (int(ranks[w]), -w))


def extract_strategy(result: SolveResult, delaying_robber: bool = True) -> Tuple[Optional[CopPolicy], RobberPolicy]:
    """
    Playable policies for both sides; the cop policy is ``None`` in a robber-win game.
    """
    cop = CopPolicy(result) if result.verdict is Verdict.COP_WIN else None
    return cop, RobberPolicy(result, delaying=delaying_robber)

# endregion
