"""
Graph families with role annotations.

Every constructor documents its index layout so that tests and scripted strategies can address
specific vertices. Annotations (``labels``) map a role name either to a list of vertex ids or to a
dict from a string key (a vertex id, or ``"a>b"`` for a directed base edge) to a list of vertex ids.
Labels are JSON-friendly and survive the graph file round-trip.
"""
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple, Union

from .errors import FamilyError, MissingAnnotationError
from .graph_tools import Graph, Orientation, build_graph, eulerian_orientation, line_graph, multi_source_distances
from .latin_tools import SUPPORTED_ORDERS, generate_mols

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

Labels = Dict[str, Union[List[int], Dict[str, List[int]]]]


def arc_key(a: int, b: int) -> str:
    return f'{a}>{b}'


def parse_arc_key(key: str) -> Tuple[int, int]:
    a, b = key.split('>')
    return int(a), int(b)

# region annotated graph


@dataclass(frozen=True, eq=False)
class AnnotatedGraph:
    graph: Graph
    labels: Labels = field(default_factory=dict)
    params: Dict[str, Any] = field(default_factory=dict)
    family: str = 'custom'
    orientation: Optional[Orientation] = None

    def has_role(self, role: str) -> bool:
        return role in self.labels

    def role(self, role: str) -> List[int]:
        """
        Vertex list stored under ``role``.

        :raises MissingAnnotationError: If the graph does not carry the role.
        """
        value = self._get(role)
        if not isinstance(value, list):
            raise MissingAnnotationError(f'role {role!r} is keyed, use keyed()')
        return value

    def keyed(self, role: str) -> Dict[str, List[int]]:
        value = self._get(role)
        if not isinstance(value, dict):
            raise MissingAnnotationError(f'role {role!r} is a plain vertex list, use role()')
        return value

    def at(self, role: str, key: Union[int, str]) -> List[int]:
        try:
            return self.keyed(role)[str(key)]
        except KeyError:
            raise MissingAnnotationError(f'role {role!r} has no entry {key!r}') from None

    def one(self, role: str, key: Union[int, str]) -> int:
        return self.at(role, key)[0]

    def require(self, *roles: str) -> None:
        missing = [r for r in roles if r not in self.labels]
        if missing:
            raise MissingAnnotationError(f'{self.family} graph lacks annotations {missing}')

    def _get(self, role: str):
        try:
            return self.labels[role]
        except KeyError:
            raise MissingAnnotationError(f'{self.family} graph has no {role!r} annotation') from None


def plain(g: Graph, family: str = 'custom', **params) -> AnnotatedGraph:
    return AnnotatedGraph(graph=g, family=family, params=dict(params))

# endregion

# region small families


def complete_bipartite(a: int, b: int) -> AnnotatedGraph:
    """
    K_{a,b}; class A is ``0..a-1``, class B is ``a..a+b-1``; edges ordered by (A vertex, B vertex).

    :raises FamilyError: If a class is empty.
    """
    if a < 1 or b < 1:
        raise FamilyError(f'K_{{{a},{b}}}: both classes need at least one vertex')
    g = build_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    labels: Labels = {'A': list(range(a)), 'B': list(range(a, a + b))}
    return AnnotatedGraph(graph=g, labels=labels, params={'a': a, 'b': b}, family='k-bipartite')


def complete_graph(n: int) -> AnnotatedGraph:
    """K_n with edges in lexicographic pair order."""
    if n < 1:
        raise FamilyError(f'K_{n}: need at least one vertex')
    return plain(build_graph(n, list(combinations(range(n), 2))), family='complete', n=n)


def path_graph(n: int) -> AnnotatedGraph:
    if n < 1:
        raise FamilyError(f'P_{n}: need at least one vertex')
    return plain(build_graph(n, [(i, i + 1) for i in range(n - 1)]), family='path', n=n)


def cycle_graph(n: int) -> AnnotatedGraph:
    if n < 3:
        raise FamilyError(f'C_{n}: need at least three vertices')
    return plain(build_graph(n, [(i, (i + 1) % n) for i in range(n)]), family='cycle', n=n)


def attach_leaves(h: AnnotatedGraph, leaves: int) -> AnnotatedGraph:
    """
    Attaches ``leaves`` new degree-one vertices to every host vertex.

    Host vertices and host edges keep their ids; the t-th leaf of host ``v`` is
    ``n_H + v*leaves + t`` and its edge follows all host edges in the same order.
    Labels: ``host-vertex`` (list), ``leaves-of`` (keyed by host vertex); host labels are kept.
    """
    if leaves < 0:
        raise FamilyError(f'leaf count must be non-negative, got {leaves}')
    g = h.graph
    n_h = g.n
    new_edges = list(g.edges)
    leaves_of: Dict[str, List[int]] = {}
    for v in range(n_h):
        own = [n_h + v * leaves + t for t in range(leaves)]
        leaves_of[str(v)] = own
        new_edges.extend((v, w) for w in own)
    result = build_graph(n_h * (1 + leaves), new_edges)
    labels: Labels = dict(h.labels)
    labels['host-vertex'] = list(range(n_h))
    labels['leaves-of'] = leaves_of
    params = {'host': h.family, **h.params, 'leaves': leaves}
    return AnnotatedGraph(graph=result, labels=labels, params=params, family='leafy')


def host_of(ag: AnnotatedGraph, v: int) -> int:
    """Host vertex of ``v`` in a leafy graph (``v`` itself for host vertices)."""
    n_h = len(ag.role('host-vertex'))
    if v < n_h:
        return v
    return (v - n_h) // ag.params['leaves']

# endregion

# region latin square and line graphs


def mols_graph(k: int) -> AnnotatedGraph:
    """
    Incidence graph of positions against rows and parts of k-1 MOLS of order ``k``.

    Layout: position (i, j) is ``i*k + j``; row i is ``k^2 + i``; part (s, n) of square
    ``L_s`` (s = 1..k-1) is ``k^2 + k + (s-1)*k + n``. Labels: ``positions``, ``rows``, ``parts``.

    :raises FamilyError: If ``k`` is not a supported prime power.
    """
    if k not in SUPPORTED_ORDERS:
        raise FamilyError(f'G_{k}: unsupported order, supported are {SUPPORTED_ORDERS}')
    family = generate_mols(k)
    k2 = k * k
    edges = []
    for i in range(k):
        for j in range(k):
            p = i * k + j
            edges.append((p, k2 + i))
            for s, square in enumerate(family.squares, start=1):
                edges.append((p, k2 + k + (s - 1) * k + square.grid[i][j]))
    g = build_graph(2 * k2, edges)
    labels: Labels = {
        'positions': list(range(k2)),
        'rows': list(range(k2, k2 + k)),
        'parts': list(range(k2 + k, 2 * k2)),
    }
    logger.debug(f'G_{k}: {g.n} vertices, {g.m} edges')
    return AnnotatedGraph(graph=g, labels=labels, params={'k': k}, family='mols-graph')


def line_complete(n: int) -> AnnotatedGraph:
    """
    L(K_n). Vertex ids follow the lexicographic order of pairs ``x < y`` over ``0..n-1``;
    label ``pair`` maps each vertex to its two endpoints.
    """
    if n < 3:
        raise FamilyError(f'L(K_{n}): need n >= 3')
    pairs = list(combinations(range(n), 2))
    g = line_graph(build_graph(n, pairs))
    labels: Labels = {'pair': {str(i): [x, y] for i, (x, y) in enumerate(pairs)}}
    return AnnotatedGraph(graph=g, labels=labels, params={'n': n}, family='line-complete')


def pair_vertex(n: int, x: int, y: int) -> int:
    """Vertex id of pair {x, y} in :func:`line_complete` (n)."""
    x, y = min(x, y), max(x, y)
    return x * n - x * (x + 1) // 2 + (y - x - 1)

# endregion

# region counterexample construction


def base_graph(s: int) -> AnnotatedGraph:
    """
    H[s] = G_{2^s}: 2^s-regular, girth 6, with an Eulerian orientation (in = out = 2^(s-1)).
    Adds labels ``out-neighbors`` and ``in-neighbors`` keyed by vertex.
    """
    if s < 1 or 2 ** s not in SUPPORTED_ORDERS:
        raise FamilyError(f'H[{s}]: unsupported order 2^{s}')
    mols = mols_graph(2 ** s)
    orientation = eulerian_orientation(mols.graph)
    labels: Labels = dict(mols.labels)
    labels['out-neighbors'] = {str(v): orientation.out_neighbors(v) for v in range(mols.graph.n)}
    labels['in-neighbors'] = {str(v): orientation.in_neighbors(v) for v in range(mols.graph.n)}
    return AnnotatedGraph(graph=mols.graph, labels=labels, params={'s': s}, family='base', orientation=orientation)


@dataclass(frozen=True)
class _TreeLayout:
    s: int

    @property
    def size(self) -> int:
        return 2 ** (self.s + 1) - 1

    @property
    def first_leaf(self) -> int:
        return 2 ** self.s - 1

    def in_leaves(self) -> List[int]:
        return list(range(self.first_leaf, self.first_leaf + 2 ** (self.s - 1)))

    def out_leaves(self) -> List[int]:
        return list(range(self.first_leaf + 2 ** (self.s - 1), self.size))

    def edges(self) -> List[Tuple[int, int]]:
        return [((i - 1) // 2, i) for i in range(1, self.size)]


def _build_expansion(s: int, length: int, m: Optional[int]) -> AnnotatedGraph:
    base = base_graph(s)
    h, orient = base.graph, base.orientation
    n_h, e_h = h.n, h.m
    tree = _TreeLayout(s)
    t = tree.size
    inner = 2 * length
    n1 = n_h * t + e_h * inner
    two_copies = m is not None

    def tree_vertex(copy: int, a: int, i: int) -> int:
        return (0 if copy == 1 else n1) + a * t + i

    # leaf matching: out-leaves to outgoing arcs, in-leaves to incoming arcs, both by neighbor index
    out_leaf: Dict[Tuple[int, int], int] = {}
    in_leaf: Dict[Tuple[int, int], int] = {}
    for a in range(n_h):
        for leaf, b in zip(tree.out_leaves(), orient.out_neighbors(a)):
            out_leaf[(a, b)] = leaf
        for leaf, b in zip(tree.in_leaves(), orient.in_neighbors(a)):
            in_leaf[(b, a)] = leaf

    def path_vertices(copy: int, e: int) -> List[int]:
        if copy == 1:
            return [n_h * t + e * inner + j for j in range(inner)]
        own = iter(n1 + n_h * t + e * (inner - 2) + j for j in range(inner - 2))
        shared = path_vertices(1, e)
        return [shared[j] if j in (length - 1, length) else next(own) for j in range(inner)]

    copies = (1, 2) if two_copies else (1,)
    edges: List[Tuple[int, int]] = []
    labels: Labels = {}
    for copy in copies:
        suffix = f'-{copy}' if two_copies else ''
        roots, roots_in, roots_out, trees, paths, balls = {}, {}, {}, {}, {}, {}
        for a in range(n_h):
            edges.extend((tree_vertex(copy, a, x), tree_vertex(copy, a, y)) for x, y in tree.edges())
            roots[str(a)] = [tree_vertex(copy, a, 0)]
            roots_in[str(a)] = [tree_vertex(copy, a, 1)]
            roots_out[str(a)] = [tree_vertex(copy, a, 2)]
            trees[str(a)] = [tree_vertex(copy, a, i) for i in range(t)]
            balls[str(a)] = list(trees[str(a)])
        for e, (a, b) in enumerate(orient.arcs):
            seq = path_vertices(copy, e)
            chain = [tree_vertex(copy, a, out_leaf[(a, b)])] + seq + [tree_vertex(copy, b, in_leaf[(a, b)])]
            for x, y in zip(chain, chain[1:]):
                if copy == 2 and {x, y} == {seq[length - 1], seq[length]}:
                    continue  # middle edge is shared with copy 1
                edges.append((x, y))
            paths[arc_key(a, b)] = seq
            balls[str(a)].extend(seq[:length])
            balls[str(b)].extend(seq[length:])
        labels[f'root{suffix}'] = roots
        labels[f'root-in{suffix}'] = roots_in
        labels[f'root-out{suffix}'] = roots_out
        labels[f'tree{suffix}'] = trees
        labels[f'path{suffix}'] = paths
        labels[f'ball{suffix}'] = balls

    middle, v_of = {}, {}
    for e, (a, b) in enumerate(orient.arcs):
        seq = path_vertices(1, e)
        middle[arc_key(a, b)] = [seq[length - 1], seq[length]]
        v_of[arc_key(a, b)] = [seq[length - 1]]
        v_of[arc_key(b, a)] = [seq[length]]
    labels['middle-edge'] = middle
    labels['v'] = v_of
    labels['out-neighbors'] = base.labels['out-neighbors']
    labels['in-neighbors'] = base.labels['in-neighbors']
    labels['leaf-out'] = {arc_key(a, b): [leaf] for (a, b), leaf in out_leaf.items()}
    labels['leaf-in'] = {arc_key(a, b): [leaf] for (a, b), leaf in in_leaf.items()}

    if not two_copies:
        g = build_graph(n1, edges)
        params = {'s': s, 'l': length, 'base_n': n_h, 'base_m': e_h}
        logger.debug(f'H[{s},{length}]: {g.n} vertices, {g.m} edges')
        return AnnotatedGraph(graph=g, labels=labels, params=params, family='expanded', orientation=orient)

    q_base = 2 * n1 - 2 * e_h  # copy 2 adds n1 minus the 2 shared middle vertices per base edge
    q_paths, q_end = {}, {}
    for a in range(n_h):
        seq = [q_base + a * m + i for i in range(m)]
        chain = [tree_vertex(1, a, 0)] + seq
        edges.extend(zip(chain, chain[1:]))
        q_paths[str(a)] = seq
        q_end[str(a)] = [seq[-1]]
    cycle = [q_end[str(a)][0] for a in range(n_h)]
    cycle_edges = [(cycle[a], cycle[(a + 1) % n_h]) for a in range(n_h)]
    first_cycle_edge = len(edges)
    edges.extend(cycle_edges)
    total = q_base + n_h * m
    g = build_graph(total, edges)

    labels['Q'] = q_paths
    labels['q'] = q_end
    labels['cycle'] = cycle
    labels['cycle-edges'] = list(range(first_cycle_edge, first_cycle_edge + len(cycle_edges)))
    labels['S'] = {str(a): sorted(set(labels['ball-1'][str(a)]) | set(labels['ball-2'][str(a)]) | set(q_paths[str(a)]))
                   for a in range(n_h)}
    labels['copy-1'] = list(range(n1))
    labels['copy-2'] = sorted(set(range(n1, q_base)) | {v for pair in middle.values() for v in pair})
    twin = [-1] * total
    for key in labels['tree-1']:
        for x, y in zip(labels['tree-1'][key], labels['tree-2'][key]):
            twin[x], twin[y] = y, x
    for key in labels['path-1']:
        for x, y in zip(labels['path-1'][key], labels['path-2'][key]):
            twin[x], twin[y] = y, x
    labels['twin'] = twin
    ag = AnnotatedGraph(graph=g, labels=labels, family='hslm', orientation=orient,
                        params={'s': s, 'l': length, 'm': m, 'base_n': n_h, 'base_m': e_h})
    labels['F-1'] = {str(a): guarded_region(ag, 1, a) for a in range(n_h)}
    labels['F-2'] = {str(a): guarded_region(ag, 2, a) for a in range(n_h)}
    logger.debug(f'H[{s},{length},{m}]: {g.n} vertices, {g.m} edges')
    return ag


def expanded_graph(s: int, length: int) -> AnnotatedGraph:
    """
    H[s, l]: a binary tree of height ``s`` per base vertex and a path of ``2l`` inner vertices per base arc.

    Layout: tree node ``i`` of base vertex ``a`` is ``a*t + i`` with ``t = 2^(s+1) - 1`` in heap order
    (0 root, 1 in-child, 2 out-child, children of i at 2i+1 and 2i+2); the leaves of the in-subtree
    precede those of the out-subtree and are matched to arcs in neighbor order. Inner vertex ``j`` of
    the path of arc ``e`` is ``n_H*t + e*2l + j``, counted from the tail side; the middle edge joins
    ``j = l-1`` (``v(a,b)``) and ``j = l`` (``v(b,a)``).
    """
    if length < 1:
        raise FamilyError(f'H[{s},{length}]: path parameter must be at least 1')
    return _build_expansion(s, length, None)


def full_construction(s: int, length: int, m: int) -> AnnotatedGraph:
    """
    H[s, l, m]: two copies of H[s, l] glued along their middle edges, a path Q(a) of ``m`` new
    vertices hanging from each copy-1 root and a cycle through the path ends q(a).

    Layout: copy 1 as in :func:`expanded_graph` (``N1`` vertices); copy-2 tree nodes at
    ``N1 + a*t + i``; copy-2 path vertices except the two shared middle ones follow; then Q(a) at
    ``base + a*m + i`` with ``i = 0`` next to r_1(a) and ``i = m-1`` = q(a). Copy-specific labels carry
    a ``-1`` / ``-2`` suffix; ``twin`` maps each copy vertex to its counterpart (shared middle vertices map to
    themselves, Q and cycle vertices to -1).
    """
    if length < 1 or m < 1:
        raise FamilyError(f'H[{s},{length},{m}]: path parameters must be at least 1')
    return _build_expansion(s, length, m)


def guarded_region(ag: AnnotatedGraph, copy: int, a: int) -> List[int]:
    """
    Vertices at distance less than ``2s`` from r_copy(a) once the edge to its in-child is removed.
    """
    s = ag.params['s']
    root = ag.one(f'root-{copy}', a)
    root_in = ag.one(f'root-in-{copy}', a)
    cut = ag.graph.edge_id(root, root_in)
    dist = multi_source_distances(ag.graph, [root], removed_edges=[cut])
    return [v for v, d in enumerate(dist) if d < 2 * s]


def two_cop_bounds_hold(s: int, length: int, m: int) -> bool:
    """Two classical cops win on H[s,l,m] when l > |V(H[s])| + m + s."""
    return length > 2 * (2 ** s) ** 2 + m + s


def evasion_bounds_hold(s: int, length: int, m: int) -> bool:
    """The restrictive-vertex evasion needs m > 2s + 1 and l > 3s + 1."""
    return m > 2 * s + 1 and length > 3 * s + 1


# names used by the command-line docs and the battery tables
satisfies_lemma5_bounds = two_cop_bounds_hold
satisfies_lemma6_bounds = evasion_bounds_hold

# endregion

# region registry

FAMILIES = {
    'k-bipartite': (complete_bipartite, ('a', 'b')),
    'complete': (complete_graph, ('n',)),
    'path': (path_graph, ('n',)),
    'cycle': (cycle_graph, ('n',)),
    'mols-graph': (mols_graph, ('k',)),
    'line-complete': (line_complete, ('n',)),
    'base': (base_graph, ('s',)),
    'expanded': (expanded_graph, ('s', 'l')),
    'hslm': (full_construction, ('s', 'l', 'm')),
    'leafy-bipartite': (lambda a, b, leaves: attach_leaves(complete_bipartite(a, b), leaves), ('a', 'b', 'leaves')),
    'leafy-edge': (lambda leaves: attach_leaves(complete_bipartite(1, 1), leaves), ('leaves',)),
}


def build_family(name: str, params: List[int]) -> AnnotatedGraph:
    """
    Constructs a registered family from positional integer parameters.

    :raises FamilyError: On an unknown family or a wrong parameter count.
    """
    try:
        constructor, names = FAMILIES[name]
    except KeyError:
        raise FamilyError(f'unknown family {name!r}') from None
    if len(params) != len(names):
        raise FamilyError(f'family {name} takes parameters {names}, got {params}')
    return constructor(*params)

# endregion
