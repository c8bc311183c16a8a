import json

import pytest

from surround_tools.cli import EXIT_INDETERMINATE, EXIT_OK, EXIT_USAGE, _suggest, main
from surround_tools.family_tools import FAMILIES
from surround_tools.file_tools import load_graph, read_transcripts


@pytest.fixture
def graph_file(tmp_path):
    def make(family, *params):
        path = str(tmp_path / f"{family}-{'-'.join(map(str, params))}.json")
        assert main(['gen', family, *map(str, params), '--out', path]) == EXIT_OK
        return path
    return make


def test_no_command_is_usage_error():
    assert main([]) == EXIT_USAGE
    assert main(['solve', '--variant', 'nonsense', '--graph', 'x.json']) == EXIT_USAGE


def test_gen_writes_family(graph_file):
    ag = load_graph(graph_file('k-bipartite', 1, 3))
    assert ag.graph.n == 4 and ag.family == 'k-bipartite'


def test_gen_mols_prints_squares(capsys):
    assert main(['gen', 'mols', '--order', '3']) == EXIT_OK
    out = capsys.readouterr().out
    assert 'L1' in out and 'L1 x L2' in out


def test_unknown_family_suggests_name():
    assert main(['gen', 'k-bipartit', '1', '3']) == EXIT_USAGE
    assert 'did you mean k-bipartite' in str(_suggest('k-bipartit', list(FAMILIES), 'family'))


def test_solve_find_min_writes_report(graph_file, tmp_path):
    report_path = tmp_path / 'report.json'
    code = main(['solve', '--graph', graph_file('k-bipartite', 1, 3), '--variant', 'vertex', '--find-min',
                 '--out', str(report_path)])
    assert code == EXIT_OK
    report = json.loads(report_path.read_text())
    assert report['results']['k_star'] == 3
    assert report['exit_code'] == EXIT_OK
    assert len(report['config_hash']) == 16


def test_solve_report_hash_ignores_output_path(graph_file, tmp_path):
    graph = graph_file('cycle', 4)
    hashes = []
    for name in ('a.json', 'b.json'):
        assert main(['solve', '--graph', graph, '--variant', 'classical', '--k', '2',
                     '--out', str(tmp_path / name)]) == EXIT_OK
        hashes.append(json.loads((tmp_path / name).read_text())['config_hash'])
    assert hashes[0] == hashes[1]


def test_solve_errors(graph_file):
    star = graph_file('k-bipartite', 1, 3)
    assert main(['solve', '--graph', star, '--variant', 'vertex']) == EXIT_USAGE
    assert main(['solve', '--graph', star, '--variant', 'vertex', '--k', '1', '--budget', '2']) == EXIT_INDETERMINATE


def test_solve_saves_solution(graph_file, tmp_path):
    path = tmp_path / 'sol.npz'
    assert main(['solve', '--graph', graph_file('cycle', 4), '--variant', 'classical', '--k', '2',
                 '--save-solution', str(path)]) == EXIT_OK
    assert path.exists()


def test_table_writes_csv(tmp_path):
    csv = tmp_path / 'bipartite.csv'
    code = main(['table', 'bipartite', '--max-size', '2', '--csv', str(csv), '--out', str(tmp_path / 'r.json')])
    assert code == EXIT_OK
    assert csv.exists()
    assert json.loads((tmp_path / 'r.json').read_text())['exit_code'] == EXIT_OK
    assert main(['table', 'no-such-battery']) == EXIT_USAGE


def test_simulate_writes_transcripts(graph_file, tmp_path):
    out = tmp_path / 'runs'
    code = main(['simulate', '--graph', graph_file('k-bipartite', 3, 3), '--cops', 'scripted:bipartite-cops/vertex',
                 '--robber', 'adversary:random', '--seeds', '0..2', '--out', str(out)])
    assert code == EXIT_OK
    transcripts = read_transcripts(str(out / 'transcripts.jsonl'))
    assert [t['meta']['seed'] for t in transcripts] == [0, 1, 2]
    assert all(t['outcome'] == 'cop-win' for t in transcripts)


def test_simulate_rejects_unknown_adversary(graph_file):
    assert main(['simulate', '--graph', graph_file('cycle', 4), '--variant', 'classical', '--k', '1',
                 '--cops', 'adversary:sneaky', '--robber', 'adversary:random']) == EXIT_USAGE


def test_verify_bounds_on_files(graph_file):
    assert main(['verify-bounds', '--graph', graph_file('k-bipartite', 1, 3), '--graph', graph_file('path', 3)]) \
        == EXIT_OK
    assert main(['verify-bounds']) == EXIT_USAGE


def test_export_dot_highlights_role(graph_file, tmp_path):
    graph = graph_file('k-bipartite', 2, 3)
    out = tmp_path / 'k23.dot'
    assert main(['export-dot', '--graph', graph, '--role', 'A', '--out', str(out)]) == EXIT_OK
    assert out.read_text().count('fillcolor') == 2


def test_play_as_cops(graph_file, tmp_path, monkeypatch):
    # junk and an out-of-range placement re-prompt; the cop then sits on 0 and steps onto 1
    answers = iter(['x', '5', '0', '1', '1', '1'])
    monkeypatch.setattr('builtins.input', lambda prompt='': next(answers))
    out = tmp_path / 'game.json'
    code = main(['play', '--graph', graph_file('k-bipartite', 1, 1), '--variant', 'classical', '--k', '1',
                 '--role', 'cops', '--opponent', 'solver', '--out', str(out)])
    assert code == EXIT_OK
    assert json.loads(out.read_text())['outcome'] == 'cop-win'


def test_play_quit_is_usage_error(graph_file, monkeypatch):
    monkeypatch.setattr('builtins.input', lambda prompt='': 'q')
    assert main(['play', '--graph', graph_file('cycle', 4), '--variant', 'classical', '--k', '1',
                 '--role', 'robber', '--opponent', 'adversary:random']) == EXIT_USAGE


def test_table_accepts_the_published_battery_names(tmp_path):
    assert main(['table', 'prop1', '--max-size', '2', '--out', str(tmp_path / 'r.json')]) == EXIT_OK
    assert json.loads((tmp_path / 'r.json').read_text())['exit_code'] == EXIT_OK
