from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surround_tools.errors import SolverBudgetError, StrategyError
from surround_tools.family_tools import complete_bipartite, cycle_graph, path_graph
from surround_tools.game_tools import (Configuration, GameSpec, Side, Variant, cop_moves_from, is_decided,
                                       robber_moves_from, robber_placements)
from surround_tools.solver_tools import (CopPolicy, StateSpace, Verdict, estimate_states, extract_strategy,
                                         multiset_count, solve_fixed_k)
from strategies import connected_graphs
import reference

VARIANTS = [v.value for v in Variant]


def solve(ag, variant, k, **kwargs):
    return solve_fixed_k(GameSpec(graph=ag.graph, variant=Variant(variant), k=k), **kwargs)


@pytest.mark.parametrize('ag, variant, k, verdict', [
    (path_graph(2), 'classical', 1, Verdict.COP_WIN),
    (cycle_graph(4), 'classical', 1, Verdict.ROBBER_WIN),
    (complete_bipartite(3, 3), 'classical', 2, Verdict.COP_WIN),
    (complete_bipartite(1, 3), 'vertex', 2, Verdict.ROBBER_WIN),
    (complete_bipartite(1, 3), 'vertex', 3, Verdict.COP_WIN),
    (complete_bipartite(1, 3), 'vertex-r', 1, Verdict.COP_WIN),
])
def test_known_verdicts(ag, variant, k, verdict):
    assert solve(ag, variant, k).verdict is verdict


@settings(max_examples=30, deadline=None)
@given(connected_graphs(min_n=2, max_n=4), st.sampled_from(VARIANTS), st.integers(1, 2))
def test_agrees_with_reference_solver(g, variant, k):
    spec = GameSpec(graph=g, variant=Variant(variant), k=k)
    result = solve_fixed_k(spec)
    cops_win, win = reference.solve(g, variant, k)
    assert (result.verdict is Verdict.COP_WIN) == cops_win
    for (cops, v, side), expected in win.items():
        assert result.is_cop_win(Configuration.of(cops, v, Side(side))) == expected


@settings(max_examples=20, deadline=None)
@given(connected_graphs(min_n=2, max_n=5), st.sampled_from(VARIANTS))
def test_more_cops_never_hurt(g, variant):
    verdicts = [solve_fixed_k(GameSpec(graph=g, variant=Variant(variant), k=k)).verdict for k in (1, 2, 3)]
    for fewer, more in zip(verdicts, verdicts[1:]):
        if fewer is Verdict.COP_WIN:
            assert more is Verdict.COP_WIN


@pytest.mark.parametrize('variant', VARIANTS)
def test_chunk_size_does_not_change_the_result(k33, variant):
    small = solve(k33, variant, 2, chunk=5)
    large = solve(k33, variant, 2)
    assert small.verdict is large.verdict
    assert small.placement == large.placement
    assert np.array_equal(small.rank_cops, large.rank_cops)
    assert np.array_equal(small.rank_robber, large.rank_robber)


def test_budget_is_enforced(k33):
    spec = GameSpec(graph=k33.graph, variant=Variant.VERTEX, k=3)
    assert estimate_states(spec) == 2 * multiset_count(6, 3) * 6
    with pytest.raises(SolverBudgetError) as info:
        solve_fixed_k(spec, budget=100)
    assert info.value.states == estimate_states(spec)


@pytest.mark.parametrize('variant, k', [('vertex', 3), ('edge', 3), ('classical', 4)])
def test_successors_match_every_joint_move(k33, variant, k):
    spec = GameSpec(graph=k33.graph, variant=Variant(variant), k=k)
    space = StateSpace(spec, chunk=7)
    for r in range(space.size):
        cops = space.unrank(r)
        joint = {space.rank(m) for m in product(*(cop_moves_from(spec, p) for p in cops))}
        row = space.successors(r)
        assert list(row) == sorted(joint)


def test_joint_moves_count_against_the_budget(k33):
    spec = GameSpec(graph=k33.graph, variant=Variant.VERTEX, k=2)
    assert estimate_states(spec) == 252
    with pytest.raises(SolverBudgetError, match='joint moves') as info:
        StateSpace(spec, budget=260)
    assert info.value.states > 260


def test_state_indices_round_trip(c4):
    space = StateSpace(GameSpec(graph=c4.graph, variant=Variant.EDGE, k=2))
    assert space.size == 10
    for r in range(space.size):
        assert space.rank(space.unrank(r)) == r
    for index in range(space.states):
        assert space.state_index(space.decode(index)) == index


def test_summary_and_bitmap(star):
    result = solve(star, 'vertex', 3)
    summary = result.summary()
    assert summary['verdict'] == 'cop-win' and summary['k'] == 3
    assert summary['placement'] == list(result.placement) and len(result.placement) == 3
    assert len(result.winning_bitmap()) == -(-result.space.states // 8)


def play_out(result, cops, robber, policy, seen=0):
    """Every robber reply against the extracted cop policy; ranks must strictly fall."""
    spec = result.spec
    here = Configuration.of(cops, robber, Side.COPS)
    value = result.state_rank(here)
    assert value >= 0
    if is_decided(spec, here) or value == 0:
        return
    moved = policy.move(cops, robber)
    after = Configuration.of(moved, robber, Side.ROBBER)
    assert result.state_rank(after) == value - 1
    if is_decided(spec, after):
        return
    for w in robber_moves_from(spec, after):
        assert result.state_rank(Configuration.of(moved, w, Side.COPS)) < value - 1
        play_out(result, moved, w, policy)


@pytest.mark.parametrize('ag, variant, k', [
    (path_graph(2), 'classical', 1),
    (complete_bipartite(3, 3), 'vertex', 3),
    (complete_bipartite(2, 3), 'edge-r', 3),
    (complete_bipartite(1, 3), 'vertex-r', 1),
])
def test_extracted_cop_strategy_wins_within_its_rank(ag, variant, k):
    result = solve(ag, variant, k)
    cop, _ = extract_strategy(result)
    cops = cop.place()
    for v in robber_placements(result.spec, cops):
        assert result.state_rank(Configuration.of(cops, v, Side.COPS)) <= result.placement_rank
        play_out(result, cops, v, cop)


def test_extracted_robber_strategy_never_enters_the_cop_win_set(c4):
    result = solve(c4, 'classical', 1)
    cop, robber = extract_strategy(result, delaying_robber=False)
    assert cop is None
    with pytest.raises(StrategyError):
        CopPolicy(result)
    for p in range(4):
        v = robber.place([p])
        assert not result.is_cop_win(Configuration.of([p], v, Side.COPS))
    for p, v in product(range(4), repeat=2):
        if result.is_cop_win(Configuration.of([p], v, Side.ROBBER)):
            continue
        w = robber.move([p], v)
        assert not result.is_cop_win(Configuration.of([p], w, Side.COPS))


def test_robber_policy_outside_its_region(k33):
    result = solve(k33, 'classical', 2)
    _, strict = extract_strategy(result, delaying_robber=False)
    with pytest.raises(StrategyError):
        strict.place(result.placement)
    _, delaying = extract_strategy(result)
    assert delaying.place(result.placement) in range(6)
