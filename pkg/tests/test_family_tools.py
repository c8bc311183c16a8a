import pytest

from surround_tools.errors import FamilyError, MissingAnnotationError
from surround_tools.family_tools import (FAMILIES, attach_leaves, base_graph, build_family, complete_bipartite,
                                         complete_graph, expanded_graph, full_construction, host_of, line_complete,
                                         mols_graph, pair_vertex, plain, satisfies_lemma5_bounds,
                                         satisfies_lemma6_bounds, two_cop_bounds_hold, evasion_bounds_hold)
from surround_tools.graph_tools import degeneracy, degrees, distances_from, girth, is_bipartite_split, is_connected


def test_complete_bipartite_layout(k33):
    assert k33.role('A') == [0, 1, 2]
    assert k33.role('B') == [3, 4, 5]
    assert k33.graph.m == 9
    assert is_bipartite_split(k33.graph, k33.role('A'))
    with pytest.raises(FamilyError):
        complete_bipartite(0, 2)


def test_attach_leaves_layout():
    ag = attach_leaves(complete_bipartite(1, 1), 3)
    assert ag.family == 'leafy'
    assert ag.graph.n == 8
    assert ag.at('leaves-of', 0) == [2, 3, 4]
    assert ag.at('leaves-of', 1) == [5, 6, 7]
    assert ag.graph.edges[0] == (0, 1)
    assert ag.role('A') == [0]  # host labels survive
    assert host_of(ag, 6) == 1 and host_of(ag, 1) == 1
    assert all(ag.graph.degree(v) == 1 for v in range(2, 8))


@pytest.mark.parametrize('k', [2, 3, 4, 5])
def test_mols_graph_is_regular_with_girth_six(k):
    ag = mols_graph(k)
    g = ag.graph
    assert g.n == 2 * k * k
    assert degrees(g)[:2] == (k, k)
    assert is_bipartite_split(g, ag.role('positions'))
    assert girth(g) == (8 if k == 2 else 6)


def test_mols_graph_of_order_three():
    g = mols_graph(3).graph
    assert (g.n, g.m) == (18, 27)
    with pytest.raises(FamilyError):
        mols_graph(6)


def test_line_complete_pairs():
    ag = line_complete(4)
    assert ag.graph.n == 6
    assert degrees(ag.graph)[:2] == (4, 4)
    for v in range(6):
        x, y = ag.at('pair', v)
        assert pair_vertex(4, y, x) == v
    assert ag.graph.has_edge(pair_vertex(4, 0, 1), pair_vertex(4, 1, 3))
    assert not ag.graph.has_edge(pair_vertex(4, 0, 1), pair_vertex(4, 2, 3))


def test_base_graph_orientation_is_balanced():
    ag = base_graph(2)
    for v in range(ag.graph.n):
        assert len(ag.at('out-neighbors', v)) == 2
        assert len(ag.at('in-neighbors', v)) == 2
    with pytest.raises(FamilyError):
        base_graph(6)


def test_expanded_graph_root_distance():
    s, length = 1, 2
    ag = expanded_graph(s, length)
    assert ag.graph.n == 8 * 3 + 8 * 2 * length
    assert degrees(ag.graph)[1] == 2
    a = 0
    b = ag.at('out-neighbors', a)[0]
    dist = distances_from(ag.graph, ag.one('root', a))
    assert dist[ag.one('root', b)] == 2 * s + 2 * length + 1
    with pytest.raises(FamilyError):
        expanded_graph(1, 0)


def test_full_construction_counts():
    ag = full_construction(1, 13, 3)
    g = ag.graph
    assert g.n == 472
    assert is_connected(g)
    assert degrees(g)[1] == 3
    assert degeneracy(g) == 2
    assert len(ag.role('cycle')) == 8
    assert all(len(ag.at('Q', a)) == 3 for a in range(8))


def test_full_construction_twins():
    ag = full_construction(1, 4, 3)
    twin = ag.role('twin')
    r1, r2 = ag.one('root-1', 0), ag.one('root-2', 0)
    assert twin[r1] == r2 and twin[r2] == r1
    for pair in ag.keyed('middle-edge').values():
        assert all(twin[v] == v for v in pair)
    assert all(twin[v] == -1 for v in ag.at('Q', 0))
    assert r1 in ag.at('F-1', 0)


def test_bound_predicates():
    assert two_cop_bounds_hold(1, 13, 3)
    assert not two_cop_bounds_hold(1, 12, 3)
    assert evasion_bounds_hold(2, 8, 6)
    assert not evasion_bounds_hold(1, 13, 3)
    assert satisfies_lemma5_bounds is two_cop_bounds_hold
    assert satisfies_lemma6_bounds(2, 8, 6) and not satisfies_lemma6_bounds(2, 8, 5)


def test_build_family_registry():
    assert build_family('complete', [4]).graph.m == 6
    assert build_family('leafy-edge', [2]).graph.n == 6
    assert set(FAMILIES) >= {'k-bipartite', 'mols-graph', 'line-complete', 'hslm'}
    with pytest.raises(FamilyError, match='unknown'):
        build_family('petersen', [])
    with pytest.raises(FamilyError, match='takes parameters'):
        build_family('cycle', [3, 4])


def test_missing_annotations():
    ag = plain(complete_graph(3).graph)
    with pytest.raises(MissingAnnotationError):
        ag.role('A')
    with pytest.raises(MissingAnnotationError):
        ag.require('root', 'Q')
    with pytest.raises(MissingAnnotationError):
        complete_bipartite(1, 2).keyed('A')
