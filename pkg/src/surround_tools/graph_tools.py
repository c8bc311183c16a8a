import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import GraphError

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

INF = float('inf')

# region graph type


@dataclass(frozen=True)
class Graph:
    """
    Immutable simple undirected graph on vertices ``0..n-1``.

    Edge ``i`` is ``edges[i]`` stored as ``(min, max)``; indices follow the order given to
    :func:`build_graph` and survive serialisation. ``adjacency[v]`` is sorted ascending,
    ``incident[v]`` lists the ids of edges at ``v`` sorted by the opposite endpoint and
    ``edge_adjacency[e]`` the ids of edges sharing an endpoint with ``e``.
    """
    n: int
    edges: Tuple[Tuple[int, int], ...]
    adjacency: Tuple[Tuple[int, ...], ...] = field(repr=False)
    incident: Tuple[Tuple[int, ...], ...] = field(repr=False)
    edge_adjacency: Tuple[Tuple[int, ...], ...] = field(repr=False)
    _edge_ids: Dict[Tuple[int, int], int] = field(repr=False, compare=False, hash=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_ids

    def edge_id(self, u: int, v: int) -> int:
        """
        :raises GraphError: If ``uv`` is not an edge.
        """
        try:
            return self._edge_ids[(min(u, v), max(u, v))]
        except KeyError:
            raise GraphError(f'({u}, {v}) is not an edge') from None

    def other_end(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if v == a else a

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """
    Builds a simple undirected graph, keeping the given edge order as edge indices.

    :param n: Number of vertices.
    :param edges: Vertex pairs; orientation of a pair is irrelevant.
    :return: The immutable graph.
    :raises GraphError: On a loop, a parallel edge or an endpoint out of range; the message names the pair.

    >>> g = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    >>> g.m, g.adjacency[0]
    (4, (1, 3))
    """
    if n < 0:
        raise GraphError(f'vertex count must be non-negative, got {n}')
    normalized: List[Tuple[int, int]] = []
    ids: Dict[Tuple[int, int], int] = {}
    for pair in edges:
        if len(pair) != 2:
            raise GraphError(f'edge {tuple(pair)} does not have two endpoints')
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f'edge ({u}, {v}) has an endpoint out of range 0..{n - 1}')
        if u == v:
            raise GraphError(f'loop at ({u}, {v})')
        key = (min(u, v), max(u, v))
        if key in ids:
            raise GraphError(f'parallel edge ({u}, {v})')
        ids[key] = len(normalized)
        normalized.append(key)

    adj: List[List[int]] = [[] for _ in range(n)]
    inc: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(normalized):
        adj[u].append(v)
        adj[v].append(u)
        inc[u].append((v, e))
        inc[v].append((u, e))
    adjacency = tuple(tuple(sorted(a)) for a in adj)
    incident = tuple(tuple(e for _, e in sorted(i)) for i in inc)
    edge_adjacency = tuple(
        tuple(sorted({f for f in incident[u] + incident[v] if f != e}))
        for e, (u, v) in enumerate(normalized)
    )
    return Graph(n=n, edges=tuple(normalized), adjacency=adjacency, incident=incident,
                 edge_adjacency=edge_adjacency, _edge_ids=ids)


def from_networkx(g: nx.Graph) -> Graph:
    """Relabels an integer-labelled networkx graph onto ``0..n-1`` in sorted node order."""
    order = {v: i for i, v in enumerate(sorted(g.nodes()))}
    return build_graph(len(order), sorted((order[u], order[v]) for u, v in g.edges()))

# endregion

# region structure


def is_connected(g: Graph) -> bool:
    """
    True iff one breadth-first search from vertex 0 reaches every vertex (true for n <= 1).

    >>> is_connected(build_graph(4, [(0, 1), (2, 3)]))
    False
    """
    if g.n <= 1:
        return True
    return all(d != INF for d in distances_from(g, 0))


def degrees(g: Graph) -> Tuple[int, int, List[int]]:
    """
    Returns ``(min degree, max degree, per-vertex degrees)``; ``(0, 0, [])`` for the empty graph.

    >>> degrees(build_graph(4, [(0, 1), (0, 2), (0, 3)]))
    (1, 3, [3, 1, 1, 1])
    """
    per_vertex = [len(a) for a in g.adjacency]
    if not per_vertex:
        return 0, 0, []
    return min(per_vertex), max(per_vertex), per_vertex


def distances_from(g: Graph, v: int) -> List[float]:
    """
    Breadth-first distances from ``v``; unreachable vertices get ``inf``.

    :raises GraphError: If ``v`` is out of range.
    """
    if not 0 <= v < g.n:
        raise GraphError(f'vertex {v} out of range 0..{g.n - 1}')
    dist: List[float] = [INF] * g.n
    dist[v] = 0
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] == INF:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def multi_source_distances(g: Graph, sources: Iterable[int], removed_edges: Iterable[int] = ()) -> List[float]:
    """
    Distances to the nearest of ``sources``, optionally ignoring the edge ids in ``removed_edges``.
    """
    skip = set(removed_edges)
    dist: List[float] = [INF] * g.n
    queue = deque()
    for s in sources:
        if dist[s] == INF:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        for e in g.incident[u]:
            if e in skip:
                continue
            w = g.other_end(e, u)
            if dist[w] == INF:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def girth(g: Graph) -> float:
    """
    Length of a shortest cycle, ``inf`` for forests.

    One breadth-first search per vertex; a non-tree edge ``uw`` closes a cycle of length at most
    ``dist[u] + dist[w] + 1`` and the minimum over all roots is exact.

    >>> girth(build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
    4
    """
    best = INF
    for root in range(g.n):
        dist = [-1] * g.n
        parent_edge = [-1] * g.n
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for e in g.incident[u]:
                if e == parent_edge[u]:
                    continue
                w = g.other_end(e, u)
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    parent_edge[w] = e
                    queue.append(w)
                else:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def degeneracy(g: Graph) -> int:
    """
    Repeatedly removes a vertex of minimum remaining degree and returns the largest degree seen
    at removal time.

    >>> degeneracy(build_graph(3, [(0, 1), (1, 2)]))
    1
    """
    remaining = [len(a) for a in g.adjacency]
    removed = [False] * g.n
    heap = [(d, v) for v, d in enumerate(remaining)]
    heapq.heapify(heap)
    result = 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != remaining[v]:
            continue  # stale
        removed[v] = True
        result = max(result, d)
        for w in g.adjacency[v]:
            if not removed[w]:
                remaining[w] -= 1
                heapq.heappush(heap, (remaining[w], w))
    return result


def line_graph(g: Graph) -> Graph:
    """
    Line graph: vertex ``i`` is edge ``i`` of ``g``, adjacent when the edges share an endpoint.

    :raises GraphError: If ``g`` has no edges.
    """
    if g.m == 0:
        raise GraphError('line graph of a graph without edges')
    pairs = [(e, f) for e in range(g.m) for f in g.edge_adjacency[e] if e < f]
    return build_graph(g.m, pairs)


def is_bipartite_split(g: Graph, left: Iterable[int]) -> bool:
    """True iff every edge has exactly one endpoint in ``left``."""
    side = set(left)
    return all((u in side) != (v in side) for u, v in g.edges)

# endregion

# region orientation


@dataclass(frozen=True)
class Orientation:
    """
    Direction per edge: ``arcs[e] = (tail, head)`` for edge ``e`` of ``graph``.
    """
    graph: Graph = field(repr=False)
    arcs: Tuple[Tuple[int, int], ...]

    def out_neighbors(self, v: int) -> List[int]:
        return sorted(self.arcs[e][1] for e in self.graph.incident[v] if self.arcs[e][0] == v)

    def in_neighbors(self, v: int) -> List[int]:
        return sorted(self.arcs[e][0] for e in self.graph.incident[v] if self.arcs[e][1] == v)

    def out_degree(self, v: int) -> int:
        return sum(1 for e in self.graph.incident[v] if self.arcs[e][0] == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for e in self.graph.incident[v] if self.arcs[e][1] == v)


def eulerian_circuit(g: Graph, start: int = 0) -> List[Tuple[int, int]]:
    """
    Hierholzer's algorithm; returns the circuit as a list of ``(edge id, tail vertex)`` steps.

    :raises GraphError: If a vertex has odd degree or the edges are not connected.
    """
    odd = [v for v in range(g.n) if g.degree(v) % 2]
    if odd:
        raise GraphError(f'odd degree at vertex {odd[0]}')
    if not is_connected(g):
        raise GraphError('graph is not connected')
    if g.m == 0:
        return []
    used = [False] * g.m
    pointer = [0] * g.n
    stack: List[Tuple[int, int]] = [(start, -1)]
    circuit: List[Tuple[int, int]] = []
    while stack:
        v, via = stack[-1]
        incident = g.incident[v]
        while pointer[v] < len(incident) and used[incident[pointer[v]]]:
            pointer[v] += 1
        if pointer[v] == len(incident):
            stack.pop()
            if via != -1:
                # the edge was traversed from the vertex below on the stack to v
                circuit.append((via, stack[-1][0]))
        else:
            e = incident[pointer[v]]
            used[e] = True
            stack.append((g.other_end(e, v), e))
    circuit.reverse()
    return circuit


def eulerian_orientation(g: Graph) -> Orientation:
    """
    Orients every edge along an Eulerian circuit so that in-degree equals out-degree everywhere.

    :raises GraphError: If a vertex has odd degree or the graph is disconnected.
    """
    arcs: List[Optional[Tuple[int, int]]] = [None] * g.m
    for e, tail in eulerian_circuit(g):
        arcs[e] = (tail, g.other_end(e, tail))
    orientation = Orientation(graph=g, arcs=tuple(arcs))
    logger.debug(f'eulerian orientation of {g.n} vertices and {g.m} edges')
    return orientation

# endregion
