import pytest

from surround_tools.bound_tools import (atlas_corpus, check_inequalities, containment_conjecture_holds, cop_number,
                                        lower_bounds, random_corpus, suite_row, trivial_lower_bound,
                                        verify_inequality_suite)
from surround_tools.errors import GraphError
from surround_tools.family_tools import build_family, complete_bipartite
from surround_tools.game_tools import Variant
from surround_tools.graph_tools import build_graph, is_connected


@pytest.mark.parametrize('ag, variant, expected', [
    (complete_bipartite(1, 3), Variant.VERTEX, 3),
    (complete_bipartite(1, 3), Variant.VERTEX_R, 1),
    (build_family('leafy-edge', [2]), Variant.EDGE, 3),
    (complete_bipartite(2, 3), Variant.EDGE_R, 3),
])
def test_cop_numbers(ag, variant, expected):
    report = cop_number(ag.graph, variant)
    assert report.k_star == expected
    assert report.interval == (expected, expected)
    if expected > 1:
        assert report.verdicts[-2] == {**report.verdicts[-2], 'k': expected - 1, 'verdict': 'robber-win'}


@pytest.mark.parametrize('a, b', [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)])
def test_complete_bipartite_cop_numbers(a, b):
    g = complete_bipartite(a, b).graph
    low, high = min(a, b), max(a, b)
    numbers = {v: cop_number(g, v).k_star for v in Variant}
    assert numbers[Variant.CLASSICAL] == min(2, low)
    assert numbers[Variant.VERTEX_R] == low
    assert numbers[Variant.VERTEX] == numbers[Variant.EDGE] == numbers[Variant.EDGE_R] == high


def test_trusted_bounds_skip_the_lower_k(star):
    report = cop_number(star.graph, Variant.VERTEX, trust_bounds=True)
    assert report.start == 3
    assert [v['k'] for v in report.verdicts] == [3]
    assert trivial_lower_bound(star.graph, Variant.CLASSICAL) == 1
    assert trivial_lower_bound(star.graph, Variant.VERTEX_R) == 1


def test_budget_exhaustion_gives_an_interval(k33):
    report = cop_number(k33.graph, Variant.VERTEX, budget=200)
    assert not report.decided
    assert report.interval[1] is None
    assert report.verdicts[-1]['verdict'] == 'indeterminate'


def test_disconnected_graphs_are_rejected():
    g = build_graph(3, [(0, 1)])
    with pytest.raises(GraphError):
        cop_number(g, Variant.VERTEX)
    with pytest.raises(GraphError):
        verify_inequality_suite([('split', g)])


def test_star_is_tight_for_the_vertex_bound(star):
    row = suite_row(('star', star.graph))
    assert row.status == 'ok'
    assert row.numbers['vertex'] == row.bounds['Delta'] * row.numbers['vertex-r'] == 3
    assert row.flat()['violations'] == 0


def test_check_inequalities_names_violations(k33):
    bounds = lower_bounds(k33.graph)
    numbers = {Variant.CLASSICAL: 2, Variant.VERTEX: 3, Variant.VERTEX_R: 4, Variant.EDGE: 3, Variant.EDGE_R: 3}
    checks = check_inequalities(numbers, bounds)
    assert not checks['vertex-r <= vertex']
    assert checks['vertex <= 2 * edge']
    assert containment_conjecture_holds(numbers, bounds)


def test_small_atlas_has_no_violations():
    rows = verify_inequality_suite(atlas_corpus(4))
    assert len(rows) == 9  # 1 + 2 + 6 connected graphs on 2, 3, 4 vertices
    assert all(r.status == 'ok' and not r.violations for r in rows)


def test_corpora():
    with pytest.raises(GraphError):
        atlas_corpus(8)
    with pytest.raises(GraphError):
        random_corpus(3, max_n=1)
    first = random_corpus(5, max_n=6, seed=3)
    again = random_corpus(5, max_n=6, seed=3)
    assert [g.edges for _, g in first] == [g.edges for _, g in again]
    assert all(is_connected(g) and 2 <= g.n <= 6 for _, g in first)


def test_suite_rows_do_not_depend_on_the_worker_count():
    corpus = atlas_corpus(3) + random_corpus(3, max_n=4, seed=1)
    serial = verify_inequality_suite(corpus)
    pooled = verify_inequality_suite(corpus, workers=2)
    assert [r.flat() for r in serial] == [r.flat() for r in pooled]
