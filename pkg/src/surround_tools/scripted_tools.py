"""
Cop and robber controllers written out from explicit case analyses on the annotated families.

Every controller is strict: a situation its case analysis does not cover raises
:class:`ScriptedStrategyAbort` instead of improvising. Invariant checks are recorded as notes and
end up in the transcript.
"""
from collections import deque
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .errors import FamilyError, ScriptedStrategyAbort
from .family_tools import AnnotatedGraph, host_of, parse_arc_key, two_cop_bounds_hold, evasion_bounds_hold
from .game_tools import GameSpec, Variant, cop_moves_from
from .graph_tools import INF, Graph, build_graph, distances_from, girth, multi_source_distances
from .strategy_tools import CopController, RobberController, SolverCopController

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

# region helpers


def _abort(text: str):
    logger.error(f'scripted strategy aborted: {text}')
    raise ScriptedStrategyAbort(text)


class _Walker:
    """Caches breadth-first distances to targets and steps one move closer."""

    def __init__(self, g: Graph, on_edges: bool = False):
        self.g = g
        self.on_edges = on_edges
        self._cache: Dict[int, List[float]] = {}

    def distances(self, target: int) -> List[float]:
        if target not in self._cache:
            if self.on_edges:
                dist = [INF] * self.g.m
                dist[target] = 0
                queue = deque([target])
                while queue:
                    e = queue.popleft()
                    for f in self.g.edge_adjacency[e]:
                        if dist[f] == INF:
                            dist[f] = dist[e] + 1
                            queue.append(f)
                self._cache[target] = dist
            else:
                self._cache[target] = distances_from(self.g, target)
        return self._cache[target]

    def step(self, p: int, target: int) -> int:
        dist = self.distances(target)
        near = self.g.edge_adjacency[p] if self.on_edges else self.g.adjacency[p]
        return min((p,) + tuple(near), key=lambda q: (dist[q], q))


def _capture_index(g: Graph, cops: Sequence[int], robber: int) -> Optional[int]:
    for i, p in enumerate(cops):
        if p == robber or g.has_edge(p, robber):
            return i
    return None


class ScriptedCops(CopController):
    key = ''


class ScriptedRobber(RobberController):
    key = ''

# endregion

# region complete bipartite graphs


class BipartiteCops(ScriptedCops):
    """
    Cop strategies on K_{a,b}. Classical: one cop per class, or a single cop on a class of size one.
    Restrictive vertex: occupy the smaller class. Vertex: occupy the larger class and jump into the
    smaller one if the robber sits on a cop. Edge versions: every vertex gets an occupied incident edge.
    """

    def __init__(self, ag: AnnotatedGraph, variant: Variant):
        ag.require('A', 'B')
        a_side, b_side = ag.role('A'), ag.role('B')
        self.small, self.large = (a_side, b_side) if len(a_side) <= len(b_side) else (b_side, a_side)
        delta, big = len(self.small), len(self.large)
        k = {Variant.CLASSICAL: min(2, delta), Variant.VERTEX_R: delta}.get(variant, big)
        super().__init__(GameSpec(ag.graph, variant, k))
        self.key = f'bipartite-cops/{variant.value}'

    def place(self):
        g, v = self.spec.graph, self.spec.variant
        if v is Variant.CLASSICAL:
            return (self.small[0],) if self.spec.k == 1 else (self.small[0], self.large[0])
        if v is Variant.VERTEX_R:
            return tuple(self.small)
        if v is Variant.VERTEX:
            return tuple(self.large)
        d = len(self.small)
        return tuple(g.edge_id(self.small[j % d], self.large[j]) for j in range(len(self.large)))

    def move(self, cops, robber):
        g, v = self.spec.graph, self.spec.variant
        out = list(cops)
        if v is Variant.CLASSICAL:
            i = _capture_index(g, cops, robber)
            if i is None:
                _abort(f'no cop next to robber {robber} on a complete bipartite graph')
            out[i] = robber
            return tuple(out)
        if v is Variant.VERTEX_R:
            return tuple(out)
        if v is Variant.VERTEX:
            if robber in self.large:
                for j, s in enumerate(self.small):
                    out[j] = s
                self.note(f'robber on cop vertex {robber}: {len(self.small)} cops jump to the smaller class')
            return tuple(out)
        d = len(self.small)
        if robber in self.large:
            for i, s in enumerate(self.small):
                out[i] = g.edge_id(s, robber)
        else:
            for j, y in enumerate(self.large):
                out[j] = g.edge_id(robber, y)
        return tuple(out)

# endregion

# region leafy graphs


def _leafy_host(ag: AnnotatedGraph) -> Tuple[Graph, int, int]:
    ag.require('host-vertex', 'leaves-of')
    n_h = len(ag.role('host-vertex'))
    leaves = ag.params['leaves']
    host_edges = ag.graph.m - n_h * leaves
    h = build_graph(n_h, ag.graph.edges[:host_edges])
    degree = h.degree(0) if n_h else 0
    if any(h.degree(v) != degree for v in range(n_h)):
        raise FamilyError('host graph is not regular')
    return h, degree, leaves


class TwoPhaseCops(ScriptedCops):
    """
    Restrictive versions on a host with leaves. Phase one plays an inner winning strategy on the host,
    reading a robber on a leaf as standing on its host vertex, until the inner cops surround the host
    vertex v inside the host. Phase two keeps those cops in place and sends the remaining cops onto v
    (vertex version) or onto the leaf edges at v (edge version).
    """

    def __init__(self, ag: AnnotatedGraph, variant: Variant, inner: Optional[CopController] = None,
                 budget: Optional[int] = None):
        if variant not in (Variant.VERTEX_R, Variant.EDGE_R):
            raise FamilyError(f'two-phase strategy is defined for the restrictive versions, not {variant.value}')
        self.ag = ag
        self.host, degree, self.leaves = _leafy_host(ag)
        if inner is None:
            inner = self._solve_host(variant, budget)
        if inner.spec.variant is not variant or inner.spec.graph.n != self.host.n:
            raise FamilyError('inner strategy does not play this version on the host graph')
        self.inner = inner
        self.inner_k = inner.spec.k
        needed = degree + 1 if variant is Variant.VERTEX_R else degree + self.leaves
        super().__init__(GameSpec(ag.graph, variant, max(self.inner_k, needed)))
        self.key = 'leafy-two-phase-vr' if variant is Variant.VERTEX_R else 'leafy-two-phase-er'
        self.walker = _Walker(ag.graph, on_edges=variant.on_edges)
        self.phase = 1
        self.centre: Optional[int] = None
        self.runners: Dict[int, int] = {}

    def _solve_host(self, variant: Variant, budget: Optional[int]) -> CopController:
        from .bound_tools import cop_number
        from .solver_tools import DEFAULT_BUDGET, solve_fixed_k
        budget = budget or DEFAULT_BUDGET
        report = cop_number(self.host, variant, budget=budget, graph_id='host')
        if not report.decided:
            _abort('host graph cop number exceeds the state budget')
        return SolverCopController(solve_fixed_k(GameSpec(self.host, variant, report.k_star), budget=budget))

    def place(self):
        self.phase, self.centre, self.runners = 1, None, {}
        inner = tuple(self.inner.place())
        self.notes.extend(self.inner.drain())
        return inner + (inner[0],) * (self.spec.k - self.inner_k)

    def _host_surrounded(self, cops: Sequence[int], v: int) -> bool:
        taken = set(cops)
        if self.spec.variant.on_edges:
            return all(e in taken for e in self.host.incident[v])
        return all(u in taken for u in self.host.adjacency[v])

    def _start_phase_two(self, cops: Sequence[int], v: int) -> None:
        g = self.spec.graph
        self.phase, self.centre = 2, v
        guards = set()
        slots = self.host.incident[v] if self.spec.variant.on_edges else self.host.adjacency[v]
        for slot in slots:
            guards.add(next(i for i, p in enumerate(cops) if p == slot and i not in guards))
        free = [i for i in range(self.spec.k) if i not in guards]
        if self.spec.variant.on_edges:
            targets = [g.edge_id(v, w) for w in self.ag.at('leaves-of', v)]
        else:
            targets = [v]
        self.runners = dict(zip(free, targets))
        self.note(f'phase 1 done: host vertex {v} surrounded inside the host, runners {self.runners}')

    def move(self, cops, robber):
        g = self.spec.graph
        v = host_of(self.ag, robber)
        out = list(cops)
        if self.phase == 1:
            if self.spec.variant is Variant.VERTEX_R and robber != v and v in cops:
                return tuple(out)  # robber on a leaf whose host vertex carries a cop
            inner = tuple(self.inner.move(tuple(cops[:self.inner_k]), v))
            self.notes.extend(self.inner.drain())
            out[:self.inner_k] = inner
            if self._host_surrounded(inner, v):
                self._start_phase_two(out, v)
            return tuple(out)
        if v != self.centre:
            _abort(f'robber left the closed leaf star of host vertex {self.centre}')
        for i, target in self.runners.items():
            out[i] = self.walker.step(cops[i], target)
        return tuple(out)


class LeafySafeRobber(ScriptedRobber):
    """
    Robber on a host with leaves that stays on host vertices and always ends on a safe vertex.

    ``vertex``: fewer than l cops on the host vertex and its leaves. ``edge``: fewer than l cops on the
    edges at the vertex. ``vertex-girth7`` / ``edge-girth6``: move to a neighbour whose surrounding
    region (radius two, without the robber's side) holds fewer than ``d + l - 1`` cops.
    """
    RULES = ('vertex', 'vertex-girth7', 'edge', 'edge-girth6')

    def __init__(self, ag: AnnotatedGraph, rule: str, k: int):
        if rule not in self.RULES:
            raise FamilyError(f'unknown safe-robber rule {rule!r}, expected one of {self.RULES}')
        self.ag = ag
        self.rule = rule
        self.host, self.d, self.leaves = _leafy_host(ag)
        d, l = self.d, self.leaves
        host_girth = girth(self.host)
        if rule == 'vertex':
            limit = (d + 1) * l
        elif rule == 'edge':
            limit = d * l if host_girth >= 4 else (d + 1) * l / 2
        else:
            need = 7 if rule == 'vertex-girth7' else 6
            if host_girth < need:
                raise FamilyError(f'{rule} needs host girth at least {need}, got {host_girth}')
            limit = d * (d + l - 1)
        if k >= limit:
            raise FamilyError(f'{rule} robber escapes fewer than {limit} cops, got {k}')
        variant = Variant.EDGE if rule.startswith('edge') else Variant.VERTEX
        super().__init__(GameSpec(ag.graph, variant, k))
        self.key = f'leafy-safe-robber/{rule}'

    def _closed(self, v: int) -> List[int]:
        return [v] + self.ag.at('leaves-of', v)

    def _count(self, cops, region: Set[int]) -> int:
        return sum(1 for p in cops if p in region)

    def _basic_safe(self, cops, v: int) -> bool:
        g = self.spec.graph
        region = set(g.incident[v]) if self.spec.variant.on_edges else set(self._closed(v))
        return self._count(cops, region) < self.leaves

    def _ball_safe(self, cops, v: int, here: int) -> bool:
        g = self.spec.graph
        outer = [u for u in g.adjacency[v] if u != here]
        if self.spec.variant.on_edges:
            region = {e for u in [v] + outer for e in g.incident[u] if here not in g.edges[e]}
            region.add(g.edge_id(here, v))
        else:
            region = {w for u in outer for w in (u,) + g.adjacency[u]}
        return self._count(cops, region) < self.d + self.leaves - 1

    def place(self, cops):
        for v in range(self.host.n):
            if self._basic_safe(cops, v):
                self.note(f'placed on safe host vertex {v}')
                return v
        _abort(f'no safe host vertex against cops {cops}')

    def move(self, cops, robber):
        if robber >= self.host.n:
            _abort(f'robber left the host graph at {robber}')
        if self.rule in ('vertex', 'edge'):
            candidates = [robber] + list(self.host.adjacency[robber])
            safe = [v for v in candidates if self._basic_safe(cops, v)]
        else:
            safe = [v for v in self.host.adjacency[robber] if self._ball_safe(cops, v, robber)]
        if not safe:
            _abort(f'no safe vertex next to {robber} against cops {cops}')
        self.note(f'robber {robber} -> safe vertex {safe[0]}')
        return safe[0]


class LeafyBipartiteVertexCops(ScriptedCops):
    """(k+1)l vertex cops on K_{k,k} with l >= k leaves per vertex."""

    def __init__(self, ag: AnnotatedGraph):
        ag.require('A', 'B', 'leaves-of')
        self.ag = ag
        self.A, self.B = ag.role('A'), ag.role('B')
        self.k, self.l = len(self.A), ag.params['leaves']
        if len(self.B) != self.k or self.l < self.k:
            raise FamilyError(f'needs K_{{k,k}} with at least k leaves per vertex, got k={self.k}, l={self.l}')
        super().__init__(GameSpec(ag.graph, Variant.VERTEX, (self.k + 1) * self.l))
        self.key = 'leafy-bipartite-cops-v'
        self.walker = _Walker(ag.graph)

    def place(self):
        on_a = [a for a in self.A for _ in range(self.l)]
        on_b = [self.B[j % self.k] for j in range(self.l)]
        return tuple(on_a + on_b)

    def move(self, cops, robber):
        out = list(cops)
        kl = self.k * self.l
        host = host_of(self.ag, robber)
        if robber != host:
            if host not in cops:
                # the host is in B: any cop on A is adjacent
                out[0] = host
            return tuple(out)
        if robber in self.A:
            i = self.A.index(robber)
            for t, leaf in enumerate(self.ag.at('leaves-of', robber)):
                out[i * self.l + t] = leaf
            if self.k >= 2:
                j = next(x for x in range(self.k) if x != i)
                for t in range(self.l):
                    out[j * self.l + t] = self.B[t % self.k]
            else:
                for t in range(kl, len(out)):
                    out[t] = self.B[0]
            self.note(f'robber on A vertex {robber}: spread to its leaves and cover B')
            return tuple(out)
        # robber on B: the B group walks to the leaves of the robber's vertex
        for t, leaf in enumerate(self.ag.at('leaves-of', robber)):
            out[kl + t] = self.walker.step(cops[kl + t], leaf)
        return tuple(out)


class LeafyBipartiteEdgeCops(ScriptedCops):
    """kl edge cops on K_{k,k} with l in {k, k+1} leaves: every host edge plus a perfect matching when l = k+1."""

    def __init__(self, ag: AnnotatedGraph):
        ag.require('A', 'B', 'leaves-of')
        self.ag = ag
        self.A, self.B = ag.role('A'), ag.role('B')
        self.k, self.l = len(self.A), ag.params['leaves']
        if len(self.B) != self.k or self.l not in (self.k, self.k + 1) or self.k < 2:
            raise FamilyError(f'needs K_{{k,k}} with k >= 2 and l in {{k, k+1}}, got k={self.k}, l={self.l}')
        super().__init__(GameSpec(ag.graph, Variant.EDGE, self.k * self.l))
        self.key = 'leafy-bipartite-cops-e'

    def place(self):
        g = self.spec.graph
        base = [g.edge_id(a, b) for a in self.A for b in self.B]
        extra = [g.edge_id(a, b) for a, b in zip(self.A, self.B)] if self.l > self.k else []
        return tuple(base + extra)

    def move(self, cops, robber):
        g = self.spec.graph
        out = list(cops)
        host = host_of(self.ag, robber)
        if robber != host:
            i = next(i for i, e in enumerate(cops) if host in g.edges[e])
            out[i] = g.edge_id(host, robber)
            return tuple(out)
        at_v = [i for i, e in enumerate(cops) if robber in g.edges[e]]
        for i, leaf in zip(at_v, self.ag.at('leaves-of', robber)):
            out[i] = g.edge_id(robber, leaf)
        used = set(at_v)
        for u in self.host_neighbours(robber):
            i = next(i for i, e in enumerate(cops) if i not in used and u in g.edges[e])
            used.add(i)
            out[i] = g.edge_id(u, robber)
        self.note(f'robber on host vertex {robber}: cops spread to its leaves and close the host edges')
        return tuple(out)

    def host_neighbours(self, v: int) -> List[int]:
        return self.B if v in self.A else self.A


class LeafyEdgeCops(ScriptedCops):
    """K_2 with l leaves per end: l vertex cops on each end, or l+1 edge cops on the middle edge."""

    def __init__(self, ag: AnnotatedGraph, variant: Variant):
        ag.require('leaves-of')
        if ag.graph.n < 2 or not ag.graph.has_edge(0, 1) or ag.graph.degree(0) != ag.graph.degree(1):
            raise FamilyError('needs K_2 with leaves')
        self.ag = ag
        self.l = ag.params['leaves']
        k = 2 * self.l if variant is Variant.VERTEX else self.l + 1
        super().__init__(GameSpec(ag.graph, variant, k))
        self.key = 'leafy-edge-cops-v' if variant is Variant.VERTEX else 'leafy-edge-cops-e'

    def place(self):
        if self.spec.variant is Variant.VERTEX:
            return (0,) * self.l + (1,) * self.l
        return (self.spec.graph.edge_id(0, 1),) * (self.l + 1)

    def move(self, cops, robber):
        g = self.spec.graph
        out = list(cops)
        host = host_of(self.ag, robber)
        if self.spec.variant is Variant.VERTEX:
            if robber == host:
                offset = 0 if robber == 0 else self.l
                for t, leaf in enumerate(self.ag.at('leaves-of', robber)):
                    out[offset + t] = leaf
            return tuple(out)
        if robber == host:
            for t, leaf in enumerate(self.ag.at('leaves-of', robber)):
                out[1 + t] = g.edge_id(robber, leaf)
        else:
            out[0] = g.edge_id(host, robber)
        return tuple(out)

# endregion

# region latin square graphs


class MolsCops(ScriptedCops):
    """
    Cops on the row vertices of G_k. A robber on a part is surrounded by the row cops stepping onto the
    part's positions, one per row. With the extra restrictive cop, a robber on a position is chased
    off it onto a part.
    """

    def __init__(self, ag: AnnotatedGraph, variant: Variant):
        ag.require('positions', 'rows', 'parts')
        if variant not in (Variant.CLASSICAL, Variant.VERTEX_R):
            raise FamilyError(f'MOLS cop strategy covers classical and vertex-r, not {variant.value}')
        self.k = ag.params['k']
        self.rows = ag.role('rows')
        self.parts = set(ag.role('parts'))
        k = self.k if variant is Variant.CLASSICAL else self.k + 1
        super().__init__(GameSpec(ag.graph, variant, k))
        self.key = 'mols-cops-classical' if variant is Variant.CLASSICAL else 'mols-cops-vr'
        self.walker = _Walker(ag.graph)

    def place(self):
        rows = tuple(self.rows)
        return rows if self.spec.variant is Variant.CLASSICAL else rows + (self.rows[0],)

    def _surround_part(self, out: List[int], part: int) -> None:
        # positions of a part lie in distinct rows; the cop of row i takes the one in row i
        for p in self.spec.graph.adjacency[part]:
            out[p // self.k] = p

    def move(self, cops, robber):
        g = self.spec.graph
        out = list(cops)
        if self.spec.variant is Variant.CLASSICAL:
            i = _capture_index(g, cops, robber)
            if i is not None:
                out[i] = robber
            elif robber in self.parts:
                self._surround_part(out, robber)
                self.note(f'robber on part {robber}: row cops surround it')
            else:
                _abort(f'robber on {robber} is neither next to a cop nor on a part')
            return tuple(out)
        if robber in self.parts:
            if any(cops[i] != self.rows[i] for i in range(self.k)):
                _abort('row cops left their rows before the robber reached a part')
            self._surround_part(out, robber)
            self.note(f'robber on part {robber}: row cops surround it')
            return tuple(out)
        out[self.k] = self.walker.step(cops[self.k], robber)
        return tuple(out)

# endregion

# region line graphs of complete graphs


class LineGraphCops(ScriptedCops):
    """
    2(n-2) vertex cops on L(K_n) on the pairs {0,x} (x >= 1) and {1,y} (2 <= y <= n-2). A robber on a
    free vertex is surrounded in the first move by a perfect matching of cops to its neighbours; a
    robber on a cop is handled by the explicit moves below.
    """

    def __init__(self, ag: AnnotatedGraph):
        ag.require('pair')
        self.n = ag.params['n']
        self.pairs = {int(v): tuple(p) for v, p in ag.keyed('pair').items()}
        self.index = {p: v for v, p in self.pairs.items()}
        super().__init__(GameSpec(ag.graph, Variant.VERTEX, 2 * (self.n - 2)))
        self.key = 'linegraph-cops-v'

    def vertex(self, x: int, y: int) -> int:
        return self.index[(min(x, y), max(x, y))]

    def place(self):
        n = self.n
        return tuple([self.vertex(0, x) for x in range(1, n)] + [self.vertex(1, y) for y in range(2, n - 1)])

    def _matching(self, cops, robber) -> Tuple[int, ...]:
        g = self.spec.graph
        b = nx.Graph()
        targets = list(g.adjacency[robber])
        b.add_nodes_from((('cop', i) for i in range(len(cops))), bipartite=0)
        b.add_nodes_from((('to', t) for t in targets), bipartite=1)
        for i, p in enumerate(cops):
            for t in targets:
                if t in cop_moves_from(self.spec, p):
                    b.add_edge(('cop', i), ('to', t))
        top = [('cop', i) for i in range(len(cops))]
        matching = nx.bipartite.hopcroft_karp_matching(b, top_nodes=top)
        out = list(cops)
        for i in range(len(cops)):
            mate = matching.get(('cop', i))
            if mate is None:
                _abort(f'no perfect matching of cops to the neighbours of {self.pairs[robber]}')
            out[i] = mate[1]
        return tuple(out)

    def move(self, cops, robber):
        n = self.n
        out = list(cops)
        if robber not in cops:
            return self._matching(cops, robber)
        x, y = self.pairs[robber]
        where = {p: i for i, p in enumerate(cops)}
        if (x, y) == (0, 1):
            out[where[robber]] = self.vertex(1, n - 1)
        elif x == 0 and y == n - 1:
            out[where[robber]] = self.vertex(1, n - 1)
            for z in range(2, n - 1):
                out[where[self.vertex(1, z)]] = self.vertex(n - 1, z)
        elif x == 0:
            out[where[robber]] = self.vertex(y, n - 1)
            for z in range(2, n - 1):
                if z != y:
                    out[where[self.vertex(1, z)]] = self.vertex(y, z)
        elif x == 1:
            out[where[robber]] = self.vertex(1, n - 1)
            for z in range(2, n):
                if z != y:
                    out[where[self.vertex(0, z)]] = self.vertex(y, z)
        else:
            _abort(f'robber on {(x, y)} is not a starting cop vertex')
        self.note(f'robber on cop vertex {(x, y)}: explicit surround move')
        return tuple(out)


class LineGraphRobber(ScriptedRobber):
    """
    Edge-cop evader on L(K_n). Each edge cop covers a three-vertex path of K_n; ``p(v)`` counts the cops
    whose path contains v. The robber always ends on a pair {u, v} with ``p(v)`` below the threshold:
    n-2 in the edge version, n/2 in the restrictive edge version.
    """

    def __init__(self, ag: AnnotatedGraph, variant: Variant, k: int):
        ag.require('pair')
        self.n = n = ag.params['n']
        if variant is Variant.EDGE:
            if 3 * k >= n * (n - 2):
                raise FamilyError(f'edge evasion on L(K_{n}) needs fewer than n(n-2)/3 cops, got {k}')
            self.threshold = n - 2
        elif variant is Variant.EDGE_R:
            if 12 * k >= n * n:
                raise FamilyError(f'restrictive edge evasion on L(K_{n}) needs fewer than n^2/12 cops, got {k}')
            self.threshold = n / 2
        else:
            raise FamilyError(f'line graph robber plays the edge versions, not {variant.value}')
        self.pairs = {int(v): tuple(p) for v, p in ag.keyed('pair').items()}
        self.index = {p: v for v, p in self.pairs.items()}
        super().__init__(GameSpec(ag.graph, variant, k))
        self.key = 'linegraph-robber-e' if variant is Variant.EDGE else 'linegraph-robber-er'
        self.low: Optional[int] = None

    def vertex(self, x: int, y: int) -> int:
        return self.index[(min(x, y), max(x, y))]

    def load(self, cops) -> List[int]:
        g = self.spec.graph
        p = [0] * self.n
        for e in cops:
            i, j = g.edges[e]
            for v in set(self.pairs[i]) | set(self.pairs[j]):
                p[v] += 1
        if sum(p) != 3 * len(cops):
            _abort(f'path load sums to {sum(p)}, expected {3 * len(cops)}')
        self.note(f'sum of p = {sum(p)} = 3k')
        return p

    def place(self, cops):
        p = self.load(cops)
        low = [v for v in range(self.n) if p[v] < self.threshold]
        if not low:
            _abort('no vertex of K_n with low path load')
        self.low = low[0]
        return self.vertex(self.low, next(u for u in range(self.n) if u != self.low))

    def move(self, cops, robber):
        p = self.load(cops)
        u, v = self.pairs[robber]
        if self.spec.variant is Variant.EDGE:
            if p[u] < self.threshold or p[v] < self.threshold:
                return robber
            star = next((w for w in range(self.n) if p[w] < self.threshold), None)
            if star is None:
                _abort('no vertex of K_n with low path load')
            self.note(f'pair {(u, v)} is loaded, robber moves next to low vertex {star}')
            return self.vertex(star, u)
        g = self.spec.graph
        low = self.low if self.low in (u, v) else u
        other = v if low == u else u
        if p[low] < self.threshold:
            return robber
        if p[other] < self.threshold:
            self.low = other
            return robber
        taken = set(cops)
        for w in range(self.n):
            if w in (u, v) or p[w] >= self.threshold:
                continue
            target = self.vertex(low, w)
            if g.edge_id(robber, target) not in taken:
                self.low = w
                self.note(f'robber slides from {(u, v)} to {(low, w)}')
                return target
        _abort(f'no free pair next to {(u, v)} with a low end')

# endregion

# region counterexample construction


class _Construction:
    """Index tables over a full construction shared by both controllers below."""

    def __init__(self, ag: AnnotatedGraph):
        ag.require('root-1', 'root-2', 'tree-1', 'tree-2', 'path-1', 'path-2', 'Q', 'q', 'cycle', 'cycle-edges',
                   'S', 'copy-2', 'twin', 'F-1', 'F-2', 'leaf-out', 'leaf-in', 'out-neighbors')
        self.ag = ag
        self.g = ag.graph
        self.s = ag.params['s']
        self.length = ag.params['l']
        self.base_n = ag.params['base_n']
        self.twin = ag.role('twin')
        self.cycle = ag.role('cycle')
        self.cycle_edges = ag.role('cycle-edges')
        self.region = [-1] * self.g.n
        for a, vertices in ag.keyed('S').items():
            for w in vertices:
                self.region[w] = int(a)
        self.path_pos: Dict[int, Tuple[int, Tuple[int, int], int]] = {}
        for copy in (1, 2):
            for key, seq in ag.keyed(f'path-{copy}').items():
                for j, w in enumerate(seq):
                    self.path_pos.setdefault(w, (copy, parse_arc_key(key), j))
        middle = ag.keyed('middle-edge')
        self.middle = {w for pair in middle.values() for w in pair}
        self.copy2_only = set(ag.role('copy-2')) - self.middle

    def tree(self, copy: int, a: int) -> List[int]:
        return self.ag.at(f'tree-{copy}', a)


class HslmClassicalCops(ScriptedCops):
    """
    Two classical cops on H[s,l,m].

    Phase 1: both cops start on the cycle; the first walks along it until it guards the robber's
    region, then the second joins it. Phase 2: the first keeps guarding and, when the robber leaves a
    middle edge towards base vertex b, runs through q(b), Q(b) and the copy-1 tree of b to the end of the
    robber's path; the second chases the robber without using cycle edges. Phase 3 starts once a cop
    stands on the copy-1 twin of the robber's copy-2 vertex: that cop shadows the robber, the other chases.
    """

    def __init__(self, ag: AnnotatedGraph):
        self.c = _Construction(ag)
        s, length, m = self.c.s, self.c.length, ag.params['m']
        if not two_cop_bounds_hold(s, length, m):
            raise FamilyError(f'H[{s},{length},{m}]: two-cop strategy needs l > |V(H[s])| + m + s')
        super().__init__(GameSpec(ag.graph, Variant.CLASSICAL, 2))
        self.key = 'hslm-cops-classical'
        self.walker = _Walker(ag.graph)
        self.phase = 1
        self.run_target: Optional[Tuple[int, int]] = None  # (base vertex, tree-1 leaf)
        self.shadow: Optional[int] = None
        self.last_robber: Optional[int] = None

    def place(self):
        self.phase, self.run_target, self.shadow, self.last_robber = 1, None, None, None
        q = self.c.cycle[0]
        return q, q

    def _guard_target(self, robber: int) -> int:
        return self.c.ag.one('q', self.c.region[robber])

    def _chase(self, p: int, robber: int) -> int:
        dist = multi_source_distances(self.c.g, [robber], removed_edges=self.c.cycle_edges)
        return min((p,) + self.c.g.adjacency[p], key=lambda w: (dist[w], w))

    def _run_trigger(self, robber: int) -> Optional[Tuple[int, int]]:
        prev = self.last_robber
        if prev is None or prev not in self.c.middle or robber in self.c.middle or robber not in self.c.path_pos:
            return None
        copy, (a, b), j = self.c.path_pos[robber]
        key = f'{a}>{b}'
        if j == self.c.length + 1:
            return b, self.c.tree(1, b)[self.c.ag.one('leaf-in', key)]
        if j == self.c.length - 2:
            return a, self.c.tree(1, a)[self.c.ag.one('leaf-out', key)]
        return None

    def move(self, cops, robber):
        out = list(cops)
        g = self.c.g
        captor = _capture_index(g, cops, robber)
        done = set()
        if captor is not None:
            out[captor] = robber
            done.add(captor)

        if self.phase == 3:
            if cops[self.shadow] != self.c.twin[self.last_robber]:
                _abort('shadow cop lost the twin of the robber')
            if robber in self.c.middle and captor is None:
                _abort(f'robber reached middle vertex {robber} without capture')
            if self.shadow not in done:
                out[self.shadow] = self.c.twin[robber]
            chaser = 1 - self.shadow
            if chaser not in done:
                out[chaser] = self._chase(cops[chaser], robber)
            self.last_robber = robber
            return tuple(out)

        if self.phase == 2 and robber in self.c.copy2_only:
            for i in (0, 1):
                if cops[i] == self.c.twin[robber]:
                    self.phase, self.shadow = 3, i
                    self.note(f'phase 2 done: cop {i + 1} becomes the shadow at {cops[i]} for robber {robber}')
                    if i not in done:
                        out[i] = cops[i]
                    chaser = 1 - i
                    if chaser not in done:
                        out[chaser] = self._chase(cops[chaser], robber)
                    self.last_robber = robber
                    return tuple(out)

        guard = self._guard_target(robber)
        if self.phase == 1:
            guarding = cops[0] == guard and robber != guard
            if 0 not in done:
                out[0] = self.walker.step(cops[0], guard)
            if 1 not in done:
                out[1] = self.walker.step(cops[1], guard) if guarding else cops[1]
            if out[0] == guard and out[1] == guard and robber not in self.c.cycle:
                self.phase = 2
                self.note(f'phase 1 done: both cops guard region {self.c.region[robber]} from {guard}')
            self.last_robber = robber
            return tuple(out)

        trigger = self._run_trigger(robber)
        if trigger is not None:
            self.run_target = trigger
            self.note(f'robber leaves a middle edge towards base vertex {trigger[0]}; cop 1 runs to {trigger[1]}')
        elif self.run_target is not None and self.c.region[robber] != self.run_target[0]:
            self.run_target = None
            self.note('robber turned back, cop 1 returns to guarding')
        if 0 not in done:
            out[0] = self.walker.step(cops[0], self.run_target[1] if self.run_target else guard)
        if 1 not in done:
            out[1] = self._chase(cops[1], robber)
        self.last_robber = robber
        return tuple(out)


class HslmRestrictiveRobber(ScriptedRobber):
    """
    Restrictive-vertex evader on H[s,l,m] against fewer than 2^(s-1) cops. The robber stays in copy 2 and
    travels from root to root along out-arcs. At a root r_2(a) no cop may be in the guarded region
    F_2(a) (a good situation). Descending the out-tree, it picks the subtree whose available out-neighbours
    outnumber the cops near the matching copy-1 subtree, then walks the chosen path to r_2(b).
    """

    def __init__(self, ag: AnnotatedGraph, k: int):
        self.c = _Construction(ag)
        s, length, m = self.c.s, self.c.length, ag.params['m']
        if not evasion_bounds_hold(s, length, m):
            raise FamilyError(f'H[{s},{length},{m}]: evasion needs m > 2s+1 and l > 3s+1')
        if k >= 2 ** (s - 1):
            raise FamilyError(f'H[{s},{length},{m}]: evasion works against fewer than {2 ** (s - 1)} cops, got {k}')
        super().__init__(GameSpec(ag.graph, Variant.VERTEX_R, k))
        self.key = 'hslm-robber-vr'
        self.reach = 2 * length + 2 * s + 1
        self._dist_to_f2: Dict[int, List[float]] = {}
        self.base = None
        self.blocked: Set[int] = set()
        self.heap = 0
        self.route: List[int] = []
        self.good_visits = 0
        self.target: Optional[int] = None

    # regions

    def f(self, copy: int, a: int) -> Set[int]:
        return set(self.c.ag.at(f'F-{copy}', a))

    def _distance_to_f2(self, b: int) -> List[float]:
        if b not in self._dist_to_f2:
            self._dist_to_f2[b] = multi_source_distances(self.c.g, sorted(self.f(2, b)))
        return self._dist_to_f2[b]

    def _arc_of_leaf(self, a: int) -> Dict[int, int]:
        """Tree index of each out-leaf of a -> out-neighbour b."""
        return {self.c.ag.one('leaf-out', f'{a}>{b}'): int(b) for b in self.c.ag.at('out-neighbors', a)}

    def _good(self, cops, a: int) -> None:
        f2 = self.f(2, a)
        inside = [p for p in cops if p in f2]
        if inside:
            _abort(f'cops {inside} inside the guarded region of root {a}')
        self.good_visits += 1
        self.note(f'good situation at root r_2({a})')

    def _arrive(self, cops, a: int) -> None:
        self._good(cops, a)
        f1 = self.f(1, a)
        self.base = a
        self.heap = 0
        self.blocked = set()
        for p in cops:
            if p in f1:
                continue
            hits = [b for b in self.c.ag.at('out-neighbors', a) if self._distance_to_f2(int(b))[p] <= self.reach]
            if len(hits) > 1:
                _abort(f'cop at {p} blocks several out-neighbours {hits}')
            self.blocked.update(int(b) for b in hits)
        self.route = []

    def place(self, cops):
        self.good_visits, self.target = 0, None
        for a in range(self.c.base_n):
            if not set(cops) & self.f(2, a):
                self._arrive(cops, a)
                return self.c.ag.one('root-2', a)
        _abort('every guarded region holds a cop')

    def _subtree(self, i: int, size: int) -> List[int]:
        out, frontier = [], [i]
        while frontier:
            x = frontier.pop()
            if x < size:
                out.append(x)
                frontier.extend((2 * x + 1, 2 * x + 2))
        return out

    def _load(self, cops, i: int) -> Tuple[int, int]:
        """(cops on tree node i of copy 2 or in the copy-1 region below it, available out-neighbours below it)."""
        a = self.base
        tree1 = self.c.tree(1, a)
        nodes = self._subtree(i, len(tree1))
        leaf_arcs = self._arc_of_leaf(a)
        avail = [leaf_arcs[x] for x in nodes if x in leaf_arcs and leaf_arcs[x] not in self.blocked]
        region = {tree1[x] for x in nodes} | {self.c.tree(2, a)[i]}
        for b in avail:
            region.update(self.c.ag.at('path-1', f'{a}>{b}'))
        return sum(1 for p in cops if p in region), len(avail)

    def move(self, cops, robber):
        if self.route:
            nxt = self.route.pop(0)
            if nxt in cops:
                _abort(f'cop ahead of the robber on {nxt}')
            if not self.route:
                self._arrive(cops, self.target)
            return nxt
        tree2 = self.c.tree(2, self.base)
        if self.heap == 0:
            self.heap = 2  # out-child
        else:
            left, right = 2 * self.heap + 1, 2 * self.heap + 2
            count, avail = self._load(cops, left)
            self.heap = left if count < avail else right
        nxt = tree2[self.heap]
        if nxt in cops:
            _abort(f'cop on the next tree vertex {nxt}')
        count, avail = self._load(cops, self.heap)
        if count >= avail:
            _abort(f'{count} cops below tree node {self.heap} of base vertex {self.base} against {avail} available')
        self.note(f'descent at tree node {self.heap}: {count} cops < {avail} available')
        if self.heap >= len(tree2) // 2:
            a, b = self.base, self._arc_of_leaf(self.base)[self.heap]
            climb, x = [], self.c.ag.one('leaf-in', f'{a}>{b}')
            tail = self.c.tree(2, b)
            while x > 0:
                climb.append(tail[x])
                x = (x - 1) // 2
            self.route = list(self.c.ag.at('path-2', f'{a}>{b}')) + climb + [tail[0]]
            self.target = b
            self.note(f'robber commits to out-neighbour {b} of {a}')
        return nxt

# endregion

# region registry


def _robber_k(k: Optional[int], key: str) -> int:
    if k is None:
        raise FamilyError(f'{key} needs the number of cops it plays against')
    return k


SCRIPTED: Dict[str, Callable[..., object]] = {
    **{f'bipartite-cops/{v.value}': (lambda v: lambda ag, **kw: BipartiteCops(ag, v))(v) for v in Variant},
    'leafy-two-phase-vr': lambda ag, inner=None, budget=None, **kw: TwoPhaseCops(ag, Variant.VERTEX_R, inner, budget),
    'leafy-two-phase-er': lambda ag, inner=None, budget=None, **kw: TwoPhaseCops(ag, Variant.EDGE_R, inner, budget),
    **{f'leafy-safe-robber/{rule}': (lambda rule: lambda ag, k=None, **kw: LeafySafeRobber(
        ag, rule, _robber_k(k, f'leafy-safe-robber/{rule}')))(rule) for rule in LeafySafeRobber.RULES},
    'leafy-bipartite-cops-v': lambda ag, **kw: LeafyBipartiteVertexCops(ag),
    'leafy-bipartite-cops-e': lambda ag, **kw: LeafyBipartiteEdgeCops(ag),
    'leafy-edge-cops-v': lambda ag, **kw: LeafyEdgeCops(ag, Variant.VERTEX),
    'leafy-edge-cops-e': lambda ag, **kw: LeafyEdgeCops(ag, Variant.EDGE),
    'mols-cops-classical': lambda ag, **kw: MolsCops(ag, Variant.CLASSICAL),
    'mols-cops-vr': lambda ag, **kw: MolsCops(ag, Variant.VERTEX_R),
    'linegraph-cops-v': lambda ag, **kw: LineGraphCops(ag),
    'linegraph-robber-e': lambda ag, k=None, **kw: LineGraphRobber(ag, Variant.EDGE, _robber_k(k, 'linegraph-robber-e')),
    'linegraph-robber-er': lambda ag, k=None, **kw: LineGraphRobber(ag, Variant.EDGE_R,
                                                                   _robber_k(k, 'linegraph-robber-er')),
    'hslm-cops-classical': lambda ag, **kw: HslmClassicalCops(ag),
    'hslm-robber-vr': lambda ag, k=None, **kw: HslmRestrictiveRobber(ag, _robber_k(k, 'hslm-robber-vr')),
}


def scripted_strategies(ag: AnnotatedGraph, key: str, k: Optional[int] = None,
                        inner: Optional[CopController] = None, budget: Optional[int] = None):
    """
    Builds the named controller on an annotated graph. The controller's ``spec`` fixes the version and
    the number of cops; robber keys need ``k``, the number of cops they face.

    :raises FamilyError: On an unknown key, a missing annotation or unmet parameter preconditions.
    """
    try:
        factory = SCRIPTED[key]
    except KeyError:
        raise FamilyError(f'unknown scripted strategy {key!r}') from None
    return factory(ag, k=k, inner=inner, budget=budget)

# endregion
