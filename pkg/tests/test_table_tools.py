from dataclasses import replace

import pytest

from surround_tools import table_tools
from surround_tools.errors import ConfigError
from surround_tools.family_tools import path_graph
from surround_tools.game_tools import Side, Variant
from surround_tools.table_tools import (FAIL, FINDING, INDETERMINATE, PASS, TableRow, exit_code, leafy_bipartite_battery,
                                        lifting_battery, linegraph_battery, hslm_battery, make_controller,
                                        match_spec, parse_player, play_matches, run_battery, summarize_matches,
                                        tightness_battery)


def row(status, quantity='q', graph='g', computed=None):
    return TableRow(battery='b', graph=graph, quantity=quantity, status=status, computed=computed)


def test_exit_code():
    assert exit_code([row(PASS), row(FINDING)]) == 0
    assert exit_code([row(PASS), row(INDETERMINATE)]) == 2
    assert exit_code([row(INDETERMINATE), row(FAIL)]) == 3
    assert 'certificate' not in row(PASS).flat()


@pytest.mark.parametrize('text', ['human', 'scripted', 'adversary:', 'solver-ish'])
def test_parse_player_rejects(text):
    with pytest.raises(ConfigError):
        parse_player(text)


def test_match_spec(k33):
    spec = match_spec(k33, 'scripted:bipartite-cops/edge', 'adversary:random')
    assert (spec.variant, spec.k) == (Variant.EDGE, 3)
    with pytest.raises(ConfigError):
        match_spec(k33, 'scripted:bipartite-cops/edge', 'adversary:random', variant=Variant.VERTEX)
    with pytest.raises(ConfigError, match='--k'):
        match_spec(k33, 'adversary:random', 'scripted:leafy-safe-robber/vertex')
    with pytest.raises(ConfigError):
        match_spec(k33, 'adversary:random', 'adversary:greedy')
    spec = match_spec(k33, 'adversary:random', 'solver', variant=Variant.VERTEX_R, k=2)
    assert (spec.variant, spec.k) == (Variant.VERTEX_R, 2)


def test_make_controller(k33):
    spec = match_spec(k33, 'adversary:random', 'adversary:random', variant=Variant.VERTEX, k=3)
    with pytest.raises(ConfigError, match='solve result'):
        make_controller(k33, 'solver', Side.COPS, spec)
    with pytest.raises(ConfigError, match='plays the cops'):
        make_controller(k33, 'scripted:bipartite-cops/vertex', Side.ROBBER, spec)
    with pytest.raises(ConfigError):
        make_controller(k33, 'scripted:bipartite-cops/edge', Side.COPS, spec)
    with pytest.raises(ConfigError, match='solver mode'):
        make_controller(k33, 'solver:sometimes', Side.COPS, spec)
    assert make_controller(k33, 'scripted:bipartite-cops/vertex', Side.COPS, spec).spec.k == 3


def test_play_matches_keeps_seed_order(settings):
    ag = path_graph(2)
    spec = match_spec(ag, 'adversary:random', 'adversary:random', variant=Variant.CLASSICAL, k=1)
    transcripts = play_matches(ag, 'adversary:random', 'adversary:random', spec, [4, 2, 7], steps=100,
                               settings=settings)
    assert [t['meta']['seed'] for t in transcripts] == [4, 2, 7]
    summary = summarize_matches(transcripts)
    assert summary['matches'] == 3
    assert summary['cop-win'] + summary['step-limit'] == 3


def test_solver_matches_solve_once(settings, k33):
    spec = match_spec(k33, 'scripted:bipartite-cops/vertex', 'solver')
    transcripts = play_matches(k33, 'scripted:bipartite-cops/vertex', 'solver', spec, [0, 1], settings=settings)
    assert all(t['outcome'] == 'cop-win' for t in transcripts)


def test_summarize_matches():
    fake = [{'outcome': 'cop-win', 'steps': 3}, {'outcome': 'cop-win', 'steps': 5}, {'outcome': 'step-limit', 'steps': 9}]
    assert summarize_matches(fake) == {'matches': 3, 'cop-win': 2, 'step-limit': 1, 'max_rounds_to_win': 5}
    assert summarize_matches([])['max_rounds_to_win'] is None


def test_bipartite_battery_passes(settings):
    rows = run_battery('bipartite', settings, max_size=2)
    assert len(rows) == 3 * (5 + 5)
    assert {r.status for r in rows} == {PASS}
    assert exit_code(rows) == 0
    by_key = {(r.graph, r.quantity): r.computed for r in rows}
    assert by_key[('K_2,2', 'c[classical]')] == '2'
    assert by_key[('K_1,2', 'c[vertex]')] == '2'


def test_mols_battery_on_order_two(settings):
    rows = run_battery('mols', settings, order=2, seeds=range(3))
    assert exit_code(rows) == 0
    assert sum(1 for r in rows if 'pairwise orthogonal' in r.quantity) == 4
    girth_row = next(r for r in rows if r.quantity == 'girth')
    assert girth_row.computed == '8'


def test_number_task_reports_mismatches(settings):
    task = {'kind': 'number', 'battery': 'adhoc', 'graph': 'P_3', 'family': 'path', 'params': [3],
            'variant': 'vertex', 'expected': 5, 'finding': None}
    [result] = table_tools._run_task((task, settings))
    assert result.status == FAIL
    assert result.computed == '2'
    assert result.certificate['k_star'] == 2
    task = dict(task, expected=None)
    assert table_tools._run_task((task, settings))[0].status == FINDING


def test_number_task_runs_out_of_budget(settings):
    task = {'kind': 'number', 'battery': 'adhoc', 'graph': 'K_3,3', 'family': 'k-bipartite', 'params': [3, 3],
            'variant': 'vertex', 'expected': 3, 'finding': None}
    [result] = table_tools._run_task((task, replace(settings, budget=100)))
    assert result.status == INDETERMINATE


def test_task_errors_become_failed_rows(settings):
    task = {'kind': 'number', 'battery': 'adhoc', 'graph': 'X', 'family': 'petersen', 'params': [],
            'variant': 'vertex', 'expected': 3}
    [result] = table_tools._run_task((task, settings))
    assert result.status == FAIL
    assert result.detail.startswith('FamilyError')


def test_hslm_structure_rows():
    task = {'battery': 'hslm', 'graph': 'H[1,13,3]', 'family': 'hslm', 'params': [1, 13, 3]}
    rows = table_tools.CHECKS['hslm-structure'](task)
    assert {r.status for r in rows} == {PASS}
    computed = {r.quantity: r.computed for r in rows}
    assert computed['vertices'] == '472'
    assert computed['root distance of base neighbours'] == '29'


def test_tightness_row():
    rows = [row(PASS, 'c[vertex-r]', 'K_1,3', '1'), row(PASS, 'c[vertex]', 'K_1,3', '3')]
    extra = table_tools._tightness_post(rows)[-1]
    assert extra.quantity == 'c[vertex] = Delta * c[vertex-r]'
    assert extra.status == PASS
    assert table_tools._tightness_post(rows[:1]) == rows[:1]
    kinds = [t['kind'] for t in tightness_battery()]
    assert kinds.count('lift') == 2 and kinds.count('number') == 4


def test_hslm_post_accepts_the_scripted_fallback():
    solve = row(INDETERMINATE, 'c[classical] <= 2')
    scripted = [row(PASS, 'scripted:hslm-cops-classical vs adversary:greedy'),
                row(PASS, 'scripted:hslm-cops-classical vs adversary:random')]
    assert table_tools._hslm_post([solve] + scripted)[0].status == PASS
    solve = row(INDETERMINATE, 'c[classical] <= 2')
    scripted[1].status = FAIL
    assert table_tools._hslm_post([solve] + scripted)[0].status == INDETERMINATE


def test_battery_builders():
    tasks = leafy_bipartite_battery(delta=3, seeds=range(2))
    edge = next(t for t in tasks if t['kind'] == 'number' and t['variant'] == 'edge')
    assert edge['finding'] and edge['expected'] == 2
    assert not any(t.get('cops') == 'scripted:leafy-bipartite-cops-e' for t in tasks)
    assert len(lifting_battery(max_n=3)) == 3
    assert len(lifting_battery()) == 30
    with pytest.raises(ConfigError):
        linegraph_battery(n=3)
    with pytest.raises(ConfigError):
        hslm_battery(s=3)
    with pytest.raises(ConfigError):
        run_battery('everything')


def test_hslm_evader_meets_the_whole_cop_pool():
    matches = [t for t in hslm_battery(s=2, seeds=range(3)) if t['kind'] == 'match']
    assert {t['cops'] for t in matches} == {'adversary:greedy', 'adversary:random', 'solver:best-effort'}
    assert all(t['robber'] == 'scripted:hslm-robber-vr' and t['expect'] == 'step-limit' for t in matches)
    assert all(t['k'] == 1 for t in matches)


def test_published_battery_names_are_aliases():
    assert table_tools.BATTERIES['prop1'] is table_tools.BATTERIES['bipartite']
    assert table_tools.BATTERIES['thm2-tightness'] is table_tools.BATTERIES['tightness']


def stable(rows):
    return [(r.graph, r.quantity, r.expected, r.computed, r.status, r.detail) for r in rows]


def test_battery_rows_do_not_depend_on_the_worker_count(settings):
    serial = run_battery('bipartite', settings, max_size=2)
    pooled = run_battery('bipartite', replace(settings, workers=2), max_size=2)
    assert stable(serial) == stable(pooled)


def test_matches_do_not_depend_on_the_worker_count(settings, c4):
    spec = match_spec(c4, 'adversary:random', 'adversary:greedy', variant=Variant.CLASSICAL, k=1)
    args = (c4, 'adversary:random', 'adversary:greedy', spec, [3, 1, 2])
    serial = play_matches(*args, steps=40, settings=settings)
    pooled = play_matches(*args, steps=40, settings=replace(settings, workers=2))
    assert serial == pooled


def test_lifting_battery_on_small_graphs(settings):
    rows = run_battery('lifting', settings, max_n=3)
    assert len(rows) == 3 * 6
    assert all(r.status == PASS and r.computed == 'cop-win' for r in rows)


@pytest.mark.slow
def test_lifting_battery_on_the_default_corpus(settings):
    rows = run_battery('lifting', settings)
    assert len(rows) == 30 * 6
    assert not [r for r in rows if r.status == FAIL]


@pytest.mark.parametrize('order', [2, 3, 4])
def test_mols_structure_rows(order):
    task = {'battery': 'mols', 'graph': f'G_{order}', 'family': 'mols-graph', 'params': [order]}
    rows = table_tools.CHECKS['mols-structure'](task)
    assert {r.status for r in rows} == {PASS}
    assert {r.quantity for r in rows} >= {'positions split from rows and parts', 'part vertices follow the squares'}
