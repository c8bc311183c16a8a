"""
Controllers, the match harness, opponent pools, solver-backed players and strategy lifting.

Cops carry identities during play: a cop controller receives and returns positions as an ordered
tuple, cop ``i`` moving from ``before[i]`` to ``after[i]``. The canonical (sorted) form is used only
when talking to the solver.
"""
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, IllegalMoveError, StrategyError
from .game_tools import (Configuration, GameSpec, Side, Variant, cop_moves_from, is_cop_win_terminal, is_decided,
                         is_legal_cop_move, robber_moves_from, robber_placements)
from .graph_tools import degrees, distances_from, multi_source_distances
from .solver_tools import CopPolicy, RobberPolicy, SolveResult

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

# region controllers


class Controller(ABC):
    """
    One side of a match. Subclasses may keep any memory; ``notes`` collects invariant checks
    and other remarks, drained into the transcript by the harness after every call.
    """
    role: Side

    def __init__(self, spec: GameSpec):
        self.spec = spec
        self.notes: List[str] = []

    def note(self, text: str) -> None:
        logger.debug(text)
        self.notes.append(text)

    def drain(self) -> List[str]:
        out, self.notes = self.notes, []
        return out


class CopController(Controller):
    role = Side.COPS

    @abstractmethod
    def place(self) -> Tuple[int, ...]:
        """Initial cop positions, one per cop."""

    @abstractmethod
    def move(self, cops: Tuple[int, ...], robber: int) -> Tuple[int, ...]:
        """Next cop positions, in the same cop order as ``cops``."""


class RobberController(Controller):
    role = Side.ROBBER

    @abstractmethod
    def place(self, cops: Tuple[int, ...]) -> int:
        """Initial robber vertex, chosen after seeing the cops."""

    @abstractmethod
    def move(self, cops: Tuple[int, ...], robber: int) -> int:
        """Next robber vertex."""

# endregion

# region harness


@dataclass
class Transcript:
    """
    ``moves`` alternates cop and robber turns, starting with the cops. ``outcome`` is ``cop-win`` or
    ``step-limit``; ``steps`` counts full rounds played. ``notes`` holds ``[round, side, text]`` entries.
    """
    variant: str
    k: int
    n: int
    edges: List[List[int]]
    cops_start: List[int]
    robber_start: Optional[int]
    moves: List[Dict] = field(default_factory=list)
    outcome: str = 'step-limit'
    steps: int = 0
    notes: List[list] = field(default_factory=list)
    meta: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: Dict) -> 'Transcript':
        return cls(**d)


def default_step_limit(spec: GameSpec, factor: int = 4) -> int:
    return factor * (spec.graph.n + spec.k * spec.graph.m)


def _abort(transcript: Transcript, diagnosis: str) -> None:
    logger.error(f'match aborted: {diagnosis}')
    error = IllegalMoveError(diagnosis)
    error.transcript = transcript
    raise error


def run_match(spec: GameSpec, cops: CopController, robber: RobberController, step_limit: Optional[int] = None,
              meta: Optional[Dict] = None) -> Transcript:
    """
    Plays one match: cop placement, robber placement seeing it, then alternating rounds starting with the cops.

    :param spec: The game.
    :param cops: Cop controller for ``spec``.
    :param robber: Robber controller for ``spec``.
    :param step_limit: Maximum number of rounds, :func:`default_step_limit` when omitted.
    :param meta: Free-form data stored with the transcript.
    :return: The transcript.
    :raises IllegalMoveError: When a controller emits an illegal move; ``error.transcript`` holds the match so far.
    """
    limit = step_limit if step_limit is not None else default_step_limit(spec)
    g = spec.graph
    t = Transcript(variant=spec.variant.value, k=spec.k, n=g.n, edges=[list(e) for e in g.edges],
                   cops_start=[], robber_start=None, meta=dict(meta or {}))

    def collect(round_no: int, who: Controller):
        t.notes.extend([round_no, who.role.name.lower(), text] for text in who.drain())

    placed = tuple(int(p) for p in cops.place())
    collect(0, cops)
    t.cops_start = list(placed)
    if len(placed) != spec.k or any(not 0 <= p < spec.domain_size for p in placed):
        _abort(t, f'cop placement {placed} is not {spec.k} positions in 0..{spec.domain_size - 1}')
    options = robber_placements(spec, placed)
    if not options:
        t.outcome = 'cop-win'
        logger.info(f'{spec.variant.value}: no legal robber placement, cops win')
        return t
    r = int(robber.place(placed))
    collect(0, robber)
    t.robber_start = r
    if r not in options:
        _abort(t, f'robber placement {r} is not legal against cops {placed}')
    current = placed
    if spec.variant is Variant.CLASSICAL and r in current:
        t.outcome = 'cop-win'
        return t

    for step in range(1, limit + 1):
        nxt = tuple(int(p) for p in cops.move(current, r))
        collect(step, cops)
        if not is_legal_cop_move(spec, current, nxt):
            t.moves.append({'side': 'cops', 'to': list(nxt)})
            _abort(t, f'round {step}: illegal cop move {current} -> {nxt}')
        current = nxt
        t.moves.append({'side': 'cops', 'to': list(current)})
        t.steps = step
        if is_decided(spec, Configuration.of(current, r, Side.ROBBER)):
            t.outcome = 'cop-win'
            break
        legal = robber_moves_from(spec, Configuration.of(current, r, Side.ROBBER))
        w = int(robber.move(current, r))
        collect(step, robber)
        t.moves.append({'side': 'robber', 'to': w})
        if w not in legal:
            _abort(t, f'round {step}: illegal robber move {r} -> {w} against cops {current}')
        r = w
        if spec.variant is Variant.CLASSICAL and r in current:
            t.outcome = 'cop-win'
            break
    logger.info(f'{spec.variant.value} k={spec.k}: {t.outcome} after {t.steps} rounds')
    return t


def replay_transcript(spec: GameSpec, t: Transcript) -> Tuple[str, int]:
    """
    Re-validates every move of a transcript and recomputes ``(outcome, steps)``.

    :raises IllegalMoveError: On the first move the rules reject.
    """
    if t.variant != spec.variant.value or t.k != spec.k or t.n != spec.graph.n:
        raise IllegalMoveError('transcript belongs to another game')
    current = tuple(t.cops_start)
    if len(current) != spec.k or any(not 0 <= p < spec.domain_size for p in current):
        raise IllegalMoveError(f'bad cop placement {current}')
    options = robber_placements(spec, current)
    if not options:
        return 'cop-win', 0
    r = t.robber_start
    if r not in options:
        raise IllegalMoveError(f'bad robber placement {r}')
    if spec.variant is Variant.CLASSICAL and r in current:
        return 'cop-win', 0
    steps = 0
    for i, move in enumerate(t.moves):
        expected = 'cops' if i % 2 == 0 else 'robber'
        if move['side'] != expected:
            raise IllegalMoveError(f'move {i}: expected a {expected} move')
        if expected == 'cops':
            nxt = tuple(move['to'])
            if not is_legal_cop_move(spec, current, nxt):
                raise IllegalMoveError(f'move {i}: illegal cop move {current} -> {nxt}')
            current = nxt
            steps += 1
            if is_decided(spec, Configuration.of(current, r, Side.ROBBER)):
                return 'cop-win', steps
        else:
            w = move['to']
            if w not in robber_moves_from(spec, Configuration.of(current, r, Side.ROBBER)):
                raise IllegalMoveError(f'move {i}: illegal robber move {r} -> {w}')
            r = w
            if spec.variant is Variant.CLASSICAL and r in current:
                return 'cop-win', steps
    return 'step-limit', steps

# endregion

# region adversaries


def _vertex_distances(spec: GameSpec) -> np.ndarray:
    g = spec.graph
    return np.array([distances_from(g, v) for v in range(g.n)], dtype=float)


def _position_distance(spec: GameSpec, dist: np.ndarray, p: int, target_vertex: int) -> float:
    if spec.variant.on_edges:
        a, b = spec.graph.edges[p]
        return min(dist[a, target_vertex], dist[b, target_vertex])
    return dist[p, target_vertex]


class RandomCops(CopController):
    def __init__(self, spec: GameSpec, seed: int = 0):
        super().__init__(spec)
        self.rng = np.random.default_rng(seed)

    def place(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in self.rng.integers(0, self.spec.domain_size, size=self.spec.k))

    def move(self, cops, robber):
        return tuple(int(self.rng.choice(cop_moves_from(self.spec, p))) for p in cops)


class RandomRobber(RobberController):
    def __init__(self, spec: GameSpec, seed: int = 0):
        super().__init__(spec)
        self.rng = np.random.default_rng(seed)

    def place(self, cops):
        return int(self.rng.choice(robber_placements(self.spec, cops)))

    def move(self, cops, robber):
        return int(self.rng.choice(robber_moves_from(self.spec, Configuration.of(cops, robber, Side.ROBBER))))


class GreedyCops(CopController):
    """
    Each cop steps towards the robber. In the surround versions the cops share out the robber's
    neighbours (vertex versions) or incident edges (edge versions) and head for distinct targets.
    """

    def __init__(self, spec: GameSpec, seed: int = 0):
        super().__init__(spec)
        self.rng = np.random.default_rng(seed)
        self.dist = _vertex_distances(spec)

    def place(self):
        return tuple(int(x) for x in self.rng.integers(0, self.spec.domain_size, size=self.spec.k))

    def _targets(self, robber: int) -> List[int]:
        g = self.spec.graph
        if self.spec.variant is Variant.CLASSICAL:
            return [robber]
        return list(g.incident[robber]) if self.spec.variant.on_edges else list(g.adjacency[robber])

    def _distance_to(self, p: int, target: int) -> float:
        g = self.spec.graph
        if self.spec.variant.on_edges:
            if p == target:
                return 0
            a, b = g.edges[p]
            c, d = g.edges[target]
            return 1 + min(self.dist[x, y] for x in (a, b) for y in (c, d))
        return self.dist[p, target]

    def move(self, cops, robber):
        targets = self._targets(robber)
        claimed: Counter = Counter()
        out = []
        for p in cops:
            free = [x for x in targets if claimed[x] == 0] or targets
            goal = min(free, key=lambda x: (self._distance_to(p, x), x))
            claimed[goal] += 1
            options = cop_moves_from(self.spec, p)
            best = min(self._distance_to(q, goal) for q in options)
            ties = [q for q in options if self._distance_to(q, goal) == best]
            out.append(int(self.rng.choice(ties)))
        return tuple(out)


class GreedyRobber(RobberController):
    """Maximises the distance to the nearest cop-occupied vertex; random among ties."""

    def __init__(self, spec: GameSpec, seed: int = 0):
        super().__init__(spec)
        self.rng = np.random.default_rng(seed)

    def _score(self, cops) -> List[float]:
        g = self.spec.graph
        if self.spec.variant.on_edges:
            sources = sorted({v for e in cops for v in g.edges[e]})
        else:
            sources = sorted(set(cops))
        return multi_source_distances(g, sources)

    def _pick(self, cops, options: List[int]) -> int:
        score = self._score(cops)
        best = max(score[v] for v in options)
        return int(self.rng.choice([v for v in options if score[v] == best]))

    def place(self, cops):
        return self._pick(cops, robber_placements(self.spec, cops))

    def move(self, cops, robber):
        return self._pick(cops, robber_moves_from(self.spec, Configuration.of(cops, robber, Side.ROBBER)))


class StationaryCops(CopController):
    def __init__(self, spec: GameSpec, seed: int = 0):
        super().__init__(spec)
        self.rng = np.random.default_rng(seed)

    def place(self):
        return tuple(int(x) for x in self.rng.integers(0, self.spec.domain_size, size=self.spec.k))

    def move(self, cops, robber):
        return tuple(cops)


class StationaryRobber(RobberController):
    """Starts on a vertex of maximum degree and stays whenever the rules allow."""

    def place(self, cops):
        options = robber_placements(self.spec, cops)
        return max(options, key=lambda v: (self.spec.graph.degree(v), -v))

    def move(self, cops, robber):
        legal = robber_moves_from(self.spec, Configuration.of(cops, robber, Side.ROBBER))
        return robber if robber in legal else legal[0]


ADVERSARIES = {
    ('random', Side.COPS): RandomCops,
    ('random', Side.ROBBER): RandomRobber,
    ('greedy-distance', Side.COPS): GreedyCops,
    ('greedy-distance', Side.ROBBER): GreedyRobber,
    ('stationary', Side.COPS): StationaryCops,
    ('stationary', Side.ROBBER): lambda spec, seed=0: StationaryRobber(spec),
}
ADVERSARY_KINDS = ('random', 'greedy-distance', 'stationary')


def adversary(kind: str, role: Side, spec: GameSpec, seed: int = 0) -> Controller:
    """
    Opponent from the pool; ``greedy`` is accepted for ``greedy-distance``.

    :raises ConfigError: On an unknown kind.
    """
    kind = 'greedy-distance' if kind == 'greedy' else kind
    try:
        factory = ADVERSARIES[(kind, Side(role))]
    except KeyError:
        raise ConfigError(f'unknown adversary {kind!r}, expected one of {ADVERSARY_KINDS}') from None
    return factory(spec, seed=seed)

# endregion

# region solver-backed controllers


def assign_moves(spec: GameSpec, cops: Sequence[int], target: Sequence[int]) -> Tuple[int, ...]:
    """
    Matches cops with identities to a target multiset so that every cop makes a legal single move.

    :raises StrategyError: If no such matching exists.
    """
    need = Counter(target)
    options = [cop_moves_from(spec, p) for p in cops]
    chosen: List[int] = []

    def search(i: int) -> bool:
        if i == len(cops):
            return True
        for q in options[i]:
            if need[q] > 0:
                need[q] -= 1
                chosen.append(q)
                if search(i + 1):
                    return True
                chosen.pop()
                need[q] += 1
        return False

    if len(cops) != len(target) or not search(0):
        raise StrategyError(f'cops {tuple(cops)} cannot reach {tuple(target)} in one move')
    return tuple(chosen)


class SolverCopController(CopController):
    """
    Plays the extracted optimal cop strategy. With ``stay_outside`` it also plays robber-win games:
    the cops keep still until the robber steps into their winning region.
    """

    def __init__(self, result: SolveResult, stay_outside: bool = False):
        super().__init__(result.spec)
        self.policy = CopPolicy(result, strict=not stay_outside)
        self.stay_outside = stay_outside

    def place(self):
        return self.policy.place()

    def move(self, cops, robber):
        if self.stay_outside and not self.policy.wins(cops, robber):
            return tuple(cops)
        target = self.policy.move(cops, robber)
        return assign_moves(self.spec, cops, target)


class SolverRobberController(RobberController):
    """
    Plays the extracted robber strategy: safe moves in a robber-win game, delaying moves in a lost one.
    """

    def __init__(self, result: SolveResult, delaying: bool = True):
        super().__init__(result.spec)
        self.policy = RobberPolicy(result, delaying=delaying)

    def place(self, cops):
        return self.policy.place(cops)

    def move(self, cops, robber):
        return self.policy.move(cops, robber)

# endregion

# region strategy lifting

# (source, target) -> cops per simulated cop, as a function of the maximum degree
LIFTS = {
    (Variant.VERTEX_R, Variant.VERTEX): lambda big: big,
    (Variant.EDGE_R, Variant.EDGE): lambda big: big,
    (Variant.EDGE, Variant.VERTEX): lambda big: 2,
    (Variant.EDGE_R, Variant.VERTEX_R): lambda big: 2,
    (Variant.VERTEX, Variant.EDGE): lambda big: big,
    (Variant.VERTEX_R, Variant.EDGE_R): lambda big: big,
}


class LiftedCops(CopController):
    """
    Groups of target-version cops shadowing a source-version cop controller.

    Group ``i`` is cops ``i*g .. i*g+g-1``. Vertex source on edge target: the group sits on an edge
    at the simulated vertex and follows it along the edge it takes. Edge source on vertex target: the
    two cops sit on the endpoints of the simulated edge. Same domain: the group shares the simulated
    position. When the robber does what the source rules forbid, or the source cops surround him,
    the groups finish the game in one move.
    """

    def __init__(self, source: CopController, target: Variant):
        src = source.spec
        pair = (src.variant, target)
        if pair not in LIFTS:
            raise StrategyError(f'unsupported pair {src.variant.value} -> {target.value}')
        big = degrees(src.graph)[1]
        self.group = max(1, LIFTS[pair](big))
        super().__init__(GameSpec(src.graph, target, src.k * self.group))
        self.source = source
        self.source_spec = src
        self.sim: Tuple[int, ...] = ()
        self._current: Tuple[int, ...] = ()
        self.sim_surrounded = False
        self.last_robber: Optional[int] = None
        self.finished = False

    # group layout

    def _groups(self, cops: Sequence[int]) -> List[List[int]]:
        return [list(cops[i * self.group:(i + 1) * self.group]) for i in range(self.source_spec.k)]

    def _layout(self, sim: Sequence[int], previous: Optional[Sequence[int]] = None) -> List[int]:
        g = self.spec.graph
        src, tgt = self.source_spec.variant, self.spec.variant
        out: List[int] = []
        for i, p in enumerate(sim):
            if src.on_edges == tgt.on_edges:
                out.extend([p] * self.group)
            elif tgt.on_edges:
                if previous is None or previous[i] == p:
                    edge = g.incident[p][0] if previous is None else self._current[i * self.group]
                else:
                    edge = g.edge_id(previous[i], p)
                out.extend([edge] * self.group)
            else:
                out.extend(g.edges[p])
        return out

    def place(self):
        self.sim_surrounded, self.last_robber, self.finished = False, None, False
        self.sim = tuple(self.source.place())
        self._current = tuple(self._layout(self.sim))
        self.notes.extend(self.source.drain())
        return self._current

    # finishing moves

    def _spread(self, cops: Sequence[int], group: int, v: int) -> Tuple[int, ...]:
        g = self.spec.graph
        targets = list(g.incident[v]) if self.spec.variant.on_edges else list(g.adjacency[v])
        out = list(cops)
        start = group * self.group
        for j in range(self.group):
            out[start + j] = targets[j] if j < len(targets) else cops[start + j]
        self.note(f'group {group} spreads around vertex {v}')
        return tuple(out)

    def _cover(self, cops: Sequence[int], v: int) -> Tuple[int, ...]:
        # every neighbour u of v carries a simulated cop; one cop of its group steps onto edge uv
        g = self.spec.graph
        out = list(cops)
        used = set()
        for u in g.adjacency[v]:
            group = next(i for i, p in enumerate(self.sim) if p == u)
            member = next(i for i in range(group * self.group, (group + 1) * self.group) if i not in used)
            used.add(member)
            out[member] = g.edge_id(u, v)
        self.note(f'groups close the edges around vertex {v}')
        return tuple(out)

    def _group_on(self, r: int) -> Optional[int]:
        """Group whose simulated cop stands on vertex ``r``, for vertex sources."""
        if self.source_spec.variant.on_edges:
            return None
        for i, p in enumerate(self.sim):
            if p == r:
                return i
        return None

    def move(self, cops, robber):
        if self.finished:
            raise StrategyError('lifted strategy already played its finishing move')
        src = self.source_spec.variant
        g = self.spec.graph
        cops = tuple(cops)
        # robber stands on a simulated restrictive vertex cop, or on one after the source surround
        on_group = self._group_on(robber)
        if on_group is not None and (src is Variant.VERTEX_R or self.sim_surrounded):
            self.finished = True
            return self._spread(cops, on_group, robber)
        if self.sim_surrounded:
            self.finished = True
            return self._cover(cops, robber)
        # robber crossed an edge held by a simulated restrictive edge cop
        if src is Variant.EDGE_R and self.last_robber is not None and self.last_robber != robber:
            crossed = g.edge_id(self.last_robber, robber)
            if crossed in self.sim:
                self.finished = True
                group = self.sim.index(crossed)
                if self.spec.variant.on_edges:
                    return self._spread(cops, group, robber)
                raise StrategyError(f'robber crossed simulated edge {crossed} held by vertex cops')
        previous = self.sim
        self.sim = tuple(self.source.move(self.sim, robber))
        self.notes.extend(self.source.drain())
        self._current = cops
        if self.spec.variant.on_edges == src.on_edges:
            nxt = tuple(self._layout(self.sim))
        elif self.spec.variant.on_edges:
            nxt = tuple(self._layout(self.sim, previous))
        else:
            nxt = self._per_group(cops, self.sim)
        self._current = nxt
        self.last_robber = robber
        self.sim_surrounded = is_cop_win_terminal(self.source_spec, Configuration.of(self.sim, robber, Side.ROBBER))
        if self.sim_surrounded:
            self.note(f'simulated {src.value} cops surround vertex {robber}')
        return nxt

    def _per_group(self, cops: Sequence[int], sim: Sequence[int]) -> Tuple[int, ...]:
        # the two cops of pair i always serve simulated edge cop i
        g = self.spec.graph
        out: List[int] = []
        for i, e in enumerate(sim):
            pair = cops[2 * i:2 * i + 2]
            out.extend(assign_moves(self.spec, pair, g.edges[e]))
        return tuple(out)


def lift_strategy(source: CopController, target: Variant) -> LiftedCops:
    """
    Simulates a source-version cop controller with ``k * g`` target-version cops, where ``g`` is the
    maximum degree, or 2 when an edge cop becomes two vertex cops.

    :raises StrategyError: If ``(source variant, target)`` is not one of the six supported pairs.
    """
    return LiftedCops(source, target)

# endregion
