from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surround_tools.errors import GameRulesError
from surround_tools.family_tools import complete_bipartite, cycle_graph, path_graph
from surround_tools.game_tools import (Configuration, GameSpec, Side, Variant, cop_moves_from, cop_position_domain,
                                       describe, initial_placements, is_cop_win_terminal, is_decided,
                                       is_legal_cop_move, robber_moves_from, robber_placements)
from surround_tools.graph_tools import build_graph
from strategies import connected_graphs
import reference


def spec_of(ag, variant, k=1):
    return GameSpec(graph=ag.graph, variant=Variant(variant), k=k)


def robber_turn(cops, robber):
    return Configuration.of(cops, robber, Side.ROBBER)


def test_position_domains(c4):
    assert cop_position_domain(spec_of(c4, 'vertex')) == [0, 1, 2, 3]
    assert len(cop_position_domain(spec_of(c4, 'edge'))) == 4
    assert cop_position_domain(spec_of(path_graph(2), 'classical')) == [0, 1]


def test_cop_moves(star):
    assert cop_moves_from(spec_of(star, 'vertex'), 0) == [0, 1, 2, 3]
    assert cop_moves_from(spec_of(star, 'vertex'), 2) == [0, 2]
    assert cop_moves_from(spec_of(path_graph(4), 'edge'), 1) == [0, 1, 2]
    with pytest.raises(GameRulesError):
        cop_moves_from(spec_of(star, 'vertex'), 4)


def test_robber_moves(p3):
    assert robber_moves_from(spec_of(p3, 'vertex-r'), robber_turn([1], 1)) == [0, 2]
    assert robber_moves_from(spec_of(p3, 'edge-r'), robber_turn([0], 0)) == [0]
    assert robber_moves_from(spec_of(p3, 'vertex'), robber_turn([1], 0)) == [0, 1]
    with pytest.raises(GameRulesError):
        robber_moves_from(spec_of(p3, 'vertex'), Configuration.of([1], 0, Side.COPS))


def test_terminal_positions(star, p3, k33):
    assert is_cop_win_terminal(spec_of(star, 'vertex', 3), robber_turn([1, 2, 3], 0))
    assert is_cop_win_terminal(spec_of(p3, 'edge'), robber_turn([0], 0))
    assert not is_cop_win_terminal(spec_of(k33, 'vertex', 2), robber_turn([3, 4], 0))
    assert is_cop_win_terminal(spec_of(p3, 'classical'), Configuration.of([2], 2, Side.COPS))


def test_surround_is_judged_after_the_cops_move(star):
    spec = spec_of(star, 'vertex', 3)
    assert is_decided(spec, robber_turn([1, 2, 3], 0))
    assert not is_decided(spec, Configuration.of([1, 2, 3], 0, Side.COPS))
    assert is_decided(spec_of(star, 'classical'), Configuration.of([0], 0, Side.COPS))


def test_initial_placements(c4):
    cops, rule = initial_placements(spec_of(path_graph(2), 'classical'))
    cops = list(cops)
    assert cops == [(0,), (1,)]
    assert rule(cops[0]) == [0, 1]
    _, rule = initial_placements(spec_of(path_graph(3), 'vertex-r', 3))
    assert rule((0, 1, 2)) == []
    cops, _ = initial_placements(spec_of(c4, 'edge', 2))
    assert len(list(cops)) == comb(4 + 2 - 1, 2) == 10


def test_spec_validation():
    with pytest.raises(GameRulesError):
        GameSpec(graph=path_graph(2).graph, variant=Variant.VERTEX, k=0)
    with pytest.raises(GameRulesError):
        GameSpec(graph=build_graph(3, [(0, 1)]), variant=Variant.VERTEX, k=1)
    with pytest.raises(GameRulesError, match='unknown variant'):
        Variant.parse('face')
    assert Variant.parse('edge-r').restrictive


def test_legal_cop_moves_and_description(c4):
    spec = spec_of(c4, 'vertex', 2)
    assert is_legal_cop_move(spec, [0, 2], [1, 2])
    assert not is_legal_cop_move(spec, [0, 2], [2, 2])
    assert not is_legal_cop_move(spec, [0], [0, 1])
    assert describe(spec_of(c4, 'edge'), robber_turn([0], 2)).startswith("cops ['0-1'] robber 2")


def test_canonical_configurations_ignore_cop_order():
    assert Configuration.of([3, 1, 1], 0, Side.COPS) == Configuration.of([1, 3, 1], 0, Side.COPS)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=6), st.sampled_from([v.value for v in Variant]), st.data())
def test_rules_agree_with_reference(g, variant, data):
    spec = GameSpec(graph=g, variant=Variant(variant), k=2)
    size = spec.domain_size
    cops = data.draw(st.lists(st.integers(0, size - 1), min_size=2, max_size=2))
    robber = data.draw(st.integers(0, g.n - 1))
    for p in range(size):
        assert cop_moves_from(spec, p) == reference.single_moves(g, variant, p)
        assert all(p in cop_moves_from(spec, q) for q in cop_moves_from(spec, p))
    c = robber_turn(cops, robber)
    assert robber_moves_from(spec, c) == sorted(reference.robber_moves(g, variant, cops, robber))
    assert is_cop_win_terminal(spec, c) == reference.won_now(g, variant, cops, robber, 1)
    if variant.endswith('-r'):
        loose = GameSpec(graph=g, variant=Variant(variant[:-2]), k=2)
        assert set(robber_moves_from(spec, c)) <= set(robber_moves_from(loose, c))
    if variant != 'vertex-r':
        assert robber in robber_moves_from(spec, c)
    assert robber_placements(spec, cops) == [v for v in range(g.n) if not (variant == 'vertex-r' and v in cops)]
