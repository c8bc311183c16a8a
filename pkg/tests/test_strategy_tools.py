import pytest

from surround_tools.bound_tools import cop_number
from surround_tools.errors import ConfigError, IllegalMoveError, StrategyError
from surround_tools.family_tools import complete_bipartite, cycle_graph, path_graph
from surround_tools.game_tools import GameSpec, Side, Variant
from surround_tools.scripted_tools import scripted_strategies
from surround_tools.solver_tools import solve_fixed_k
from surround_tools.strategy_tools import (ADVERSARY_KINDS, LIFTS, CopController, GreedyCops, RandomCops, RandomRobber,
                                           SolverCopController, SolverRobberController, StationaryRobber,
                                           Transcript, adversary, assign_moves, default_step_limit, lift_strategy,
                                           replay_transcript, run_match)


def game(ag, variant, k):
    return GameSpec(graph=ag.graph, variant=Variant(variant), k=k)


class TeleportingCops(CopController):
    def place(self):
        return (0,)

    def move(self, cops, robber):
        return (2,)


@pytest.mark.parametrize('seed', range(10))
def test_bipartite_cops_surround_quickly(k33, seed):
    cops = scripted_strategies(k33, 'bipartite-cops/vertex')
    t = run_match(cops.spec, cops, RandomRobber(cops.spec, seed=seed))
    assert t.outcome == 'cop-win'
    assert t.steps <= 2
    assert replay_transcript(cops.spec, t) == (t.outcome, t.steps)


def test_extracted_robber_reaches_the_step_limit(c4):
    spec = game(c4, 'classical', 1)
    robber = SolverRobberController(solve_fixed_k(spec), delaying=False)
    t = run_match(spec, RandomCops(spec, seed=1), robber, step_limit=200)
    assert t.outcome == 'step-limit'
    assert t.steps == 200
    assert replay_transcript(spec, t) == ('step-limit', 200)
    t = run_match(spec, GreedyCops(spec, seed=1), robber, step_limit=200)
    assert t.outcome == 'step-limit'


def test_illegal_moves_abort_with_the_transcript(c4):
    spec = game(c4, 'vertex', 1)
    with pytest.raises(IllegalMoveError, match='illegal cop move') as info:
        run_match(spec, TeleportingCops(spec), StationaryRobber(spec))
    assert info.value.transcript.moves[-1] == {'side': 'cops', 'to': [2]}


def test_replay_rejects_edited_transcripts(c4):
    spec = game(c4, 'classical', 1)
    t = run_match(spec, RandomCops(spec, seed=0), RandomRobber(spec, seed=0), step_limit=20)
    edited = Transcript.from_dict(t.to_dict())
    edited.robber_start = (t.cops_start[0] + 1) % 4
    edited.moves = [{'side': 'cops', 'to': [(t.cops_start[0] + 2) % 4]}]
    with pytest.raises(IllegalMoveError):
        replay_transcript(spec, edited)
    with pytest.raises(IllegalMoveError, match='another game'):
        replay_transcript(game(c4, 'vertex', 1), t)


def test_stationary_robber_witnesses_the_degree_bound(star):
    spec = game(star, 'edge', 2)
    for kind in ADVERSARY_KINDS:
        t = run_match(spec, adversary(kind, Side.COPS, spec, seed=3), StationaryRobber(spec))
        assert t.robber_start == 0
        assert t.outcome == 'step-limit'
        assert t.steps == default_step_limit(spec)


def test_random_play_on_an_edge_ends_in_capture():
    spec = game(path_graph(2), 'classical', 1)
    t = run_match(spec, adversary('random', Side.COPS, spec, seed=5), adversary('random', Side.ROBBER, spec, seed=5),
                  step_limit=100)
    assert t.outcome == 'cop-win'


def test_adversary_lookup(c4):
    spec = game(c4, 'vertex', 1)
    assert isinstance(adversary('greedy', Side.COPS, spec), GreedyCops)
    with pytest.raises(ConfigError):
        adversary('clever', Side.ROBBER, spec)


def test_assign_moves(c4):
    spec = game(c4, 'vertex', 2)
    assert assign_moves(spec, (0, 2), (3, 1)) == (1, 3)
    with pytest.raises(StrategyError):
        assign_moves(spec, (0, 0), (2, 2))


def test_lifting_restrictive_vertex_cop_on_a_star(star):
    source_spec = game(star, 'vertex-r', 1)
    lifted = lift_strategy(SolverCopController(solve_fixed_k(source_spec)), Variant.VERTEX)
    assert lifted.spec.k == 3
    target = solve_fixed_k(lifted.spec)
    t = run_match(lifted.spec, lifted, SolverRobberController(target))
    assert t.outcome == 'cop-win'
    assert replay_transcript(lifted.spec, t)[0] == 'cop-win'


def test_lifting_restrictive_edge_cops_to_vertex_pairs(k33):
    source = SolverCopController(solve_fixed_k(game(k33, 'edge-r', 3)))
    lifted = lift_strategy(source, Variant.VERTEX_R)
    assert lifted.spec.k == 6
    t = run_match(lifted.spec, lifted, SolverRobberController(solve_fixed_k(lifted.spec)))
    assert t.outcome == 'cop-win'


def test_lifting_needs_a_supported_pair(star):
    source = SolverCopController(solve_fixed_k(game(star, 'classical', 1)))
    with pytest.raises(StrategyError, match='unsupported pair'):
        lift_strategy(source, Variant.VERTEX)


def test_best_effort_solver_cops_wait_outside_their_region(c4):
    result = solve_fixed_k(game(c4, 'classical', 1))
    with pytest.raises(StrategyError, match='robber-win'):
        SolverCopController(result)
    cops = SolverCopController(result, stay_outside=True)
    assert len(cops.place()) == 1
    assert cops.move((0,), 2) == (0,)
    assert cops.move((0,), 1) == (1,)


def test_lifted_cops_play_several_matches(star):
    lifted = lift_strategy(SolverCopController(solve_fixed_k(game(star, 'vertex-r', 1))), Variant.VERTEX)
    robber = SolverRobberController(solve_fixed_k(lifted.spec))
    first = run_match(lifted.spec, lifted, robber)
    second = run_match(lifted.spec, lifted, robber)
    assert first.outcome == second.outcome == 'cop-win'
    assert first.steps == second.steps


@pytest.mark.parametrize('source, target', list(LIFTS), ids=lambda v: v.value)
def test_every_lift_wins_on_a_cycle(c4, source, target):
    report = cop_number(c4.graph, source)
    cops = SolverCopController(solve_fixed_k(GameSpec(c4.graph, source, report.k_star)))
    lifted = lift_strategy(cops, target)
    assert lifted.spec.variant is target
    t = run_match(lifted.spec, lifted, SolverRobberController(solve_fixed_k(lifted.spec)))
    assert t.outcome == 'cop-win'
    assert replay_transcript(lifted.spec, t)[0] == 'cop-win'
