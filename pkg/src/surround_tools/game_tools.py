from dataclasses import dataclass
from enum import Enum, IntEnum
from itertools import combinations_with_replacement
from typing import Callable, Iterator, List, Sequence, Tuple

from .errors import GameRulesError
from .graph_tools import Graph, is_connected

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

# region types


class Variant(str, Enum):
    CLASSICAL = 'classical'
    VERTEX = 'vertex'
    VERTEX_R = 'vertex-r'
    EDGE = 'edge'
    EDGE_R = 'edge-r'

    @property
    def on_edges(self) -> bool:
        return self in (Variant.EDGE, Variant.EDGE_R)

    @property
    def restrictive(self) -> bool:
        return self in (Variant.VERTEX_R, Variant.EDGE_R)

    @property
    def surround(self) -> bool:
        return self is not Variant.CLASSICAL

    @classmethod
    def parse(cls, name: str) -> 'Variant':
        try:
            return cls(name)
        except ValueError:
            raise GameRulesError(f'unknown variant {name!r}, expected one of {[v.value for v in cls]}') from None


class Side(IntEnum):
    COPS = 0
    ROBBER = 1


@dataclass(frozen=True)
class Configuration:
    """Canonical game state: sorted cop positions, robber vertex and the side to move."""
    cops: Tuple[int, ...]
    robber: int
    to_move: Side

    @classmethod
    def of(cls, cops: Sequence[int], robber: int, to_move: Side) -> 'Configuration':
        return cls(cops=tuple(sorted(int(c) for c in cops)), robber=int(robber), to_move=Side(to_move))


@dataclass(frozen=True)
class GameSpec:
    graph: Graph
    variant: Variant
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise GameRulesError(f'need at least one cop, got k={self.k}')
        if not is_connected(self.graph):
            raise GameRulesError('the game is played on connected graphs only')
        if self.variant.on_edges and self.graph.m == 0:
            raise GameRulesError(f'{self.variant.value} needs a graph with at least one edge')

    @property
    def domain_size(self) -> int:
        return self.graph.m if self.variant.on_edges else self.graph.n

# endregion

# region rules


def cop_position_domain(spec: GameSpec) -> List[int]:
    """All vertices, or all edge ids for the edge variants."""
    return list(range(spec.domain_size))


def cop_moves_from(spec: GameSpec, p: int) -> List[int]:
    """
    Positions a single cop on ``p`` may occupy after its move: ``p`` itself plus adjacent vertices
    (vertex variants) or edges sharing an endpoint (edge variants), ascending.

    :raises GameRulesError: If ``p`` is outside the domain.
    """
    if not 0 <= p < spec.domain_size:
        raise GameRulesError(f'cop position {p} outside domain 0..{spec.domain_size - 1}')
    g = spec.graph
    near = g.edge_adjacency[p] if spec.variant.on_edges else g.adjacency[p]
    return sorted((p,) + tuple(near))


def occupied_vertices(spec: GameSpec, cops: Sequence[int]) -> set:
    """Vertices carrying a cop (vertex variants) or touched by an occupied edge (edge variants)."""
    if spec.variant.on_edges:
        return {v for e in cops for v in spec.graph.edges[e]}
    return set(cops)


def robber_moves_from(spec: GameSpec, c: Configuration) -> List[int]:
    """
    Legal robber destinations, ascending.

    Restrictive vertex: unoccupied vertices of the closed neighbourhood (may be empty).
    Restrictive edge: the current vertex plus neighbours behind cop-free edges.
    Otherwise the whole closed neighbourhood.

    :raises GameRulesError: If it is not the robber's turn.
    """
    if c.to_move is not Side.ROBBER:
        raise GameRulesError('robber moves queried while the cops are to move')
    g, v = spec.graph, c.robber
    closed = [v] + list(g.adjacency[v])
    if spec.variant is Variant.VERTEX_R:
        taken = set(c.cops)
        return sorted(w for w in closed if w not in taken)
    if spec.variant is Variant.EDGE_R:
        taken = set(c.cops)
        return sorted([v] + [w for w in g.adjacency[v] if g.edge_id(v, w) not in taken])
    return sorted(closed)


def is_surrounded(spec: GameSpec, cops: Sequence[int], robber: int) -> bool:
    g = spec.graph
    taken = set(cops)
    if spec.variant.on_edges:
        return all(e in taken for e in g.incident[robber])
    return all(w in taken for w in g.adjacency[robber])


def is_cop_win_terminal(spec: GameSpec, c: Configuration) -> bool:
    """
    Classical: a cop shares the robber's vertex. Surround variants: every neighbour (vertex variants)
    or every incident edge (edge variants) carries a cop; in the restrictive vertex variant a robber
    to move without legal moves has also lost.
    """
    if spec.variant is Variant.CLASSICAL:
        return c.robber in c.cops
    if is_surrounded(spec, c.cops, c.robber):
        return True
    if spec.variant is Variant.VERTEX_R and c.to_move is Side.ROBBER:
        stuck = not robber_moves_from(spec, c)
        # zero legal moves means every neighbour carries a cop
        assert not stuck, 'stuck robber must already be surrounded'
    return False


def is_decided(spec: GameSpec, c: Configuration) -> bool:
    """
    Terminal check with the game's timing: surround variants are judged after the cops' move
    (robber to move); in the classical game a shared vertex ends the game at any time.
    """
    if spec.variant is Variant.CLASSICAL:
        return c.robber in c.cops
    return c.to_move is Side.ROBBER and is_cop_win_terminal(spec, c)


def robber_placements(spec: GameSpec, cops: Sequence[int]) -> List[int]:
    """All vertices, minus cop vertices in the restrictive vertex variant."""
    if spec.variant is Variant.VERTEX_R:
        taken = set(cops)
        return [v for v in range(spec.graph.n) if v not in taken]
    return list(range(spec.graph.n))


def initial_placements(spec: GameSpec) -> Tuple[Iterator[Tuple[int, ...]], Callable[[Sequence[int]], List[int]]]:
    """
    Canonical cop placements (all size-k multisets over the domain) and the robber placement rule.
    An empty robber placement list means the cops have won by convention.
    """
    cops = combinations_with_replacement(range(spec.domain_size), spec.k)
    return cops, lambda placed: robber_placements(spec, placed)


def is_legal_cop_move(spec: GameSpec, before: Sequence[int], after: Sequence[int]) -> bool:
    """Per-cop check for cops with identities: cop i moves from ``before[i]`` to ``after[i]``."""
    if len(before) != len(after):
        return False
    try:
        return all(q in cop_moves_from(spec, p) for p, q in zip(before, after))
    except GameRulesError:
        return False


def describe(spec: GameSpec, c: Configuration) -> str:
    g = spec.graph
    where = [f'{g.edges[e][0]}-{g.edges[e][1]}' for e in c.cops] if spec.variant.on_edges else list(c.cops)
    return f'cops {where} robber {c.robber} ({c.to_move.name.lower()} to move)'

# endregion
