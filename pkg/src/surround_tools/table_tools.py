"""
Batteries reproducing published cop numbers and strategy claims, and the match runner they share with
the ``simulate`` command.

A battery is a list of picklable tasks; every task yields one or more :class:`TableRow`. Rows come back
in task order for any worker count. Statuses:

* ``PASS`` / ``FAIL``: the computed value matches / contradicts the published one.
* ``INDETERMINATE``: the state budget ran out before a verdict.
* ``FINDING``: a computed value recorded without asserting a published one.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from itertools import combinations
from math import ceil
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .bound_tools import atlas_corpus, cop_number
from .config import Settings
from .errors import ConfigError, IllegalMoveError, SolverBudgetError, StrategyError, SurroundError
from .family_tools import (AnnotatedGraph, build_family, expanded_graph, parse_arc_key, two_cop_bounds_hold,
                           evasion_bounds_hold)
from .file_tools import graph_from_dict, graph_to_dict
from .game_tools import GameSpec, Side, Variant
from .graph_tools import (INF, build_graph, degeneracy, degrees, distances_from, girth, is_bipartite_split,
                          multi_source_distances)
from .helper import Stopwatch
from .latin_tools import are_orthogonal, generate_mols, is_latin, square_parts
from .scripted_tools import scripted_strategies
from .solver_tools import SolveResult, Verdict, solve_fixed_k
from .strategy_tools import (LIFTS, Controller, SolverCopController, SolverRobberController, Transcript, adversary,
                             default_step_limit, lift_strategy, run_match)

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

PASS, FAIL, INDETERMINATE, FINDING = 'PASS', 'FAIL', 'INDETERMINATE', 'FINDING'

# H[s, l, m] parameters used by the counterexample battery
HSLM_PARAMS = {1: (13, 3), 2: (8, 6)}

# region rows


@dataclass
class TableRow:
    battery: str
    graph: str
    quantity: str
    expected: Optional[str] = None
    computed: Optional[str] = None
    status: str = PASS
    detail: str = ''
    seconds: float = 0.0
    certificate: Optional[Dict] = None

    def flat(self) -> Dict:
        d = asdict(self)
        d.pop('certificate')
        return d


def exit_code(rows: Sequence[TableRow]) -> int:
    """3 if any row failed, 2 if any row is indeterminate, 0 otherwise."""
    statuses = {r.status for r in rows}
    if FAIL in statuses:
        return 3
    if INDETERMINATE in statuses:
        return 2
    return 0

# endregion

# region matches


PLAYER_KINDS = ('scripted', 'adversary', 'solver')
# solver:best-effort cops also play robber-win games, keeping still outside their winning region
SOLVER_MODES = ('', 'best-effort')


def parse_player(text: str) -> Tuple[str, str]:
    """
    Splits a player description: ``scripted:KEY``, ``adversary:KIND``, ``solver`` or ``solver:MODE``.

    >>> parse_player('adversary:greedy')
    ('adversary', 'greedy')
    >>> parse_player('solver')
    ('solver', '')
    >>> parse_player('solver:best-effort')
    ('solver', 'best-effort')
    """
    kind, _, name = text.partition(':')
    if kind not in PLAYER_KINDS or (kind != 'solver' and not name):
        raise ConfigError(f'player {text!r} is not one of scripted:KEY, adversary:KIND, solver')
    return kind, name


def _check_controller(controller: Controller, role: Side, spec: Optional[GameSpec], text: str) -> None:
    if controller.role is not role:
        raise ConfigError(f'{text} plays the {controller.role.name.lower()}, not the {role.name.lower()}')
    if spec is not None and (controller.spec.variant is not spec.variant or controller.spec.k != spec.k):
        raise ConfigError(f'{text} plays {controller.spec.variant.value} with {controller.spec.k} cops, '
                          f'the match is {spec.variant.value} with {spec.k} cops')


def match_spec(ag: AnnotatedGraph, cops_text: str, robber_text: str, variant: Optional[Variant] = None,
               k: Optional[int] = None, budget: Optional[int] = None) -> GameSpec:
    """
    The game a pair of players meets in. A scripted player fixes the version and the number of cops;
    otherwise both come from ``variant`` and ``k``.

    :raises ConfigError: If the players disagree with each other or with ``variant`` / ``k``.
    """
    kind, name = parse_player(cops_text)
    if kind == 'scripted':
        controller = scripted_strategies(ag, name, budget=budget)
        spec = controller.spec
        _check_controller(controller, Side.COPS, None, cops_text)
        if variant is not None and spec.variant is not variant:
            raise ConfigError(f'{cops_text} plays {spec.variant.value}, not {variant.value}')
        return spec
    kind, name = parse_player(robber_text)
    if kind == 'scripted':
        if k is None:
            raise ConfigError(f'{robber_text} needs the number of cops (--k)')
        controller = scripted_strategies(ag, name, k=k)
        _check_controller(controller, Side.ROBBER, None, robber_text)
        if variant is not None and controller.spec.variant is not variant:
            raise ConfigError(f'{robber_text} plays {controller.spec.variant.value}, not {variant.value}')
        return controller.spec
    if variant is None or k is None:
        raise ConfigError('without a scripted player the match needs a variant and a number of cops')
    return GameSpec(ag.graph, variant, k)


def make_controller(ag: AnnotatedGraph, text: str, role: Side, spec: GameSpec, seed: int = 0,
                    result: Optional[SolveResult] = None, budget: Optional[int] = None) -> Controller:
    """
    Builds one fresh player for ``spec``. Solver players need the solve result of ``spec``; the solver
    robber delays in a lost game.

    :raises ConfigError: On an unknown player or one that does not fit ``spec``.
    :raises StrategyError: For plain solver cops in a robber-win game.
    """
    kind, name = parse_player(text)
    if kind == 'adversary':
        return adversary(name, role, spec, seed=seed)
    if kind == 'solver':
        if name not in SOLVER_MODES:
            raise ConfigError(f'unknown solver mode {name!r}, expected one of {[m for m in SOLVER_MODES if m]}')
        if result is None:
            raise ConfigError('solver players need a solve result')
        if role is Side.ROBBER:
            return SolverRobberController(result, delaying=True)
        return SolverCopController(result, stay_outside=name == 'best-effort')
    controller = scripted_strategies(ag, name, k=spec.k if role is Side.ROBBER else None, budget=budget)
    _check_controller(controller, role, spec, text)
    return controller


def _seed_task(args) -> Dict:
    graph_dict, cops_text, robber_text, variant, k, seed, steps, settings = args
    ag = graph_from_dict(graph_dict)
    spec = GameSpec(ag.graph, Variant(variant), k)
    return _one_match(ag, cops_text, robber_text, spec, seed, steps, settings, None)


def _one_match(ag: AnnotatedGraph, cops_text: str, robber_text: str, spec: GameSpec, seed: int,
               steps: Optional[int], settings: Settings, result: Optional[SolveResult]) -> Dict:
    cops = make_controller(ag, cops_text, Side.COPS, spec, seed, result, settings.budget)
    robber = make_controller(ag, robber_text, Side.ROBBER, spec, seed, result, settings.budget)
    limit = steps if steps is not None else default_step_limit(spec, settings.step_factor)
    meta = {'seed': seed, 'cops': cops_text, 'robber': robber_text, 'family': ag.family}
    return run_match(spec, cops, robber, step_limit=limit, meta=meta).to_dict()


def play_matches(ag: AnnotatedGraph, cops_text: str, robber_text: str, spec: GameSpec, seeds: Sequence[int],
                 steps: Optional[int] = None, settings: Optional[Settings] = None) -> List[Dict]:
    """
    Plays one match per seed and returns the transcripts as dicts, in seed order.

    Matches run on ``settings.workers`` processes unless a solver player is involved; the solve is then
    done once and the seeds are played in this process.

    :raises IllegalMoveError: When a controller emits an illegal move; ``error.transcript`` holds the match.
    :raises ScriptedStrategyAbort: When a scripted controller leaves its case analysis.
    :raises SolverBudgetError: When a solver player's game exceeds the budget.
    """
    settings = settings or Settings()
    seeds = list(seeds)
    if 'solver' in (parse_player(cops_text)[0], parse_player(robber_text)[0]):
        result = solve_fixed_k(spec, budget=settings.budget, chunk=settings.chunk)
        return [_one_match(ag, cops_text, robber_text, spec, s, steps, settings, result) for s in seeds]
    if settings.workers > 1 and len(seeds) > 1:
        graph_dict = graph_to_dict(ag)
        tasks = [(graph_dict, cops_text, robber_text, spec.variant.value, spec.k, s, steps, settings) for s in seeds]
        with ProcessPoolExecutor(max_workers=settings.workers) as pool:
            return list(pool.map(_seed_task, tasks))
    return [_one_match(ag, cops_text, robber_text, spec, s, steps, settings, None) for s in seeds]


def summarize_matches(transcripts: Sequence[Dict]) -> Dict[str, object]:
    outcomes = [t['outcome'] for t in transcripts]
    cop_wins = [t['steps'] for t in transcripts if t['outcome'] == 'cop-win']
    return {
        'matches': len(outcomes),
        'cop-win': len(cop_wins),
        'step-limit': outcomes.count('step-limit'),
        'max_rounds_to_win': max(cop_wins) if cop_wins else None,
    }

# endregion

# region tasks


@lru_cache(maxsize=16)
def _family(family: str, params: Tuple[int, ...]) -> AnnotatedGraph:
    return build_family(family, list(params))


def _graph(task: Dict) -> AnnotatedGraph:
    if 'edges' in task:
        return AnnotatedGraph(graph=build_graph(task['n'], task['edges']), family='custom')
    return _family(task['family'], tuple(task['params']))


def _row(task: Dict, quantity: str, **kw) -> TableRow:
    return TableRow(battery=task['battery'], graph=task['graph'], quantity=quantity, **kw)


def _number_task(task: Dict, settings: Settings) -> List[TableRow]:
    ag = _graph(task)
    variant = Variant(task['variant'])
    report = cop_number(ag.graph, variant, budget=settings.budget, chunk=settings.chunk, graph_id=task['graph'])
    expected = task.get('expected')
    row = _row(task, f'c[{variant.value}]', expected=None if expected is None else str(expected),
               seconds=report.stats['seconds'])
    if not report.decided:
        low, high = report.interval
        row.computed = f'>= {low}'
        row.status = INDETERMINATE
        row.detail = 'state budget exhausted'
        return [row]
    row.computed = str(report.k_star)
    if task.get('finding'):
        row.status = FINDING
        row.detail = task['finding']
    elif expected is None:
        row.status = FINDING
        row.detail = 'no published value'
    elif report.k_star != expected:
        row.status = FAIL
        row.certificate = report.to_dict()
        logger.error(f"{task['graph']} {variant.value}: computed {report.k_star}, published {expected}")
    return [row]


def _verdict_task(task: Dict, settings: Settings) -> List[TableRow]:
    ag = _graph(task)
    spec = GameSpec(ag.graph, Variant(task['variant']), task['k'])
    row = _row(task, task.get('quantity') or f"{spec.variant.value} k={spec.k}", expected=task['expected'])
    try:
        with Stopwatch() as clock:
            result = solve_fixed_k(spec, budget=settings.budget, chunk=settings.chunk)
    except SolverBudgetError as e:
        row.status = INDETERMINATE
        row.detail = f'{e.states:,} states exceed the budget'
        return [row]
    row.seconds = round(clock.elapsed, 3)
    row.computed = result.verdict.value
    if result.verdict.value != task['expected']:
        row.status = FAIL
        row.certificate = result.summary()
    return [row]


def _match_task(task: Dict, settings: Settings) -> List[TableRow]:
    ag = _graph(task)
    quantity = f"{task['cops']} vs {task['robber']}"
    row = _row(task, quantity, expected=f"{task['expect']} x{len(task['seeds'])}")
    try:
        with Stopwatch() as clock:
            spec = match_spec(ag, task['cops'], task['robber'], k=task.get('k'), budget=settings.budget)
            transcripts = play_matches(ag, task['cops'], task['robber'], spec, task['seeds'],
                                       steps=task.get('steps'), settings=settings)
    except SolverBudgetError as e:
        row.status = INDETERMINATE
        row.detail = f'{e.states:,} states exceed the budget'
        return [row]
    except (StrategyError, IllegalMoveError) as e:
        row.status = FAIL
        row.detail = str(e)
        transcript = getattr(e, 'transcript', None)
        row.certificate = transcript.to_dict() if isinstance(transcript, Transcript) else None
        return [row]
    row.seconds = round(clock.elapsed, 3)
    summary = summarize_matches(transcripts)
    row.computed = f"{summary[task['expect']]}/{summary['matches']} {task['expect']}"
    bad = [t for t in transcripts if t['outcome'] != task['expect']]
    if bad:
        row.status = FAIL
        row.detail = f"seed {bad[0]['meta']['seed']} ended {bad[0]['outcome']}"
        row.certificate = bad[0]
    elif task['expect'] == 'cop-win':
        row.detail = f"at most {summary['max_rounds_to_win']} rounds"
    return [row]


def _lift_task(task: Dict, settings: Settings) -> List[TableRow]:
    """Every lift of a certified source win, played against the delaying solver robber of the target game."""
    g = _graph(task).graph
    rows = []
    for source, target in LIFTS:
        row = _row(task, f'lift {source.value} -> {target.value}', expected='cop-win')
        try:
            with Stopwatch() as clock:
                report = cop_number(g, source, budget=settings.budget, chunk=settings.chunk, graph_id=task['graph'])
                if not report.decided:
                    raise SolverBudgetError(0, settings.budget)
                result = solve_fixed_k(GameSpec(g, source, report.k_star), budget=settings.budget, chunk=settings.chunk)
                lifted = lift_strategy(SolverCopController(result), target)
                target_result = solve_fixed_k(lifted.spec, budget=settings.budget, chunk=settings.chunk)
                t = run_match(lifted.spec, lifted, SolverRobberController(target_result, delaying=True),
                              step_limit=default_step_limit(lifted.spec, settings.step_factor))
        except SolverBudgetError:
            row.status = INDETERMINATE
            row.detail = 'state budget exhausted'
            rows.append(row)
            continue
        except (StrategyError, IllegalMoveError) as e:
            row.status, row.detail = FAIL, str(e)
            rows.append(row)
            continue
        row.seconds = round(clock.elapsed, 3)
        row.computed = t.outcome
        row.detail = f'{report.k_star} source cops, {lifted.spec.k} target cops, {t.steps} rounds'
        if t.outcome != 'cop-win':
            row.status = FAIL
            row.certificate = t.to_dict()
        rows.append(row)
    return rows

# endregion

# region structure checks


def _exact(task: Dict, quantity: str, expected, computed, detail: str = '') -> TableRow:
    return _row(task, quantity, expected=str(expected), computed=str(computed),
                status=PASS if expected == computed else FAIL, detail=detail)


def _orthogonality_check(task: Dict) -> List[TableRow]:
    k = task['k']
    family = generate_mols(k)
    latin = all(is_latin(sq) for sq in family.squares)
    pairs = list(combinations(family.squares, 2))
    orthogonal = all(are_orthogonal(a, b) for a, b in pairs)
    return [_exact(task, f'{len(family.squares)} squares of order {k} latin and pairwise orthogonal', True,
                   latin and orthogonal, detail=f'{len(pairs)} pairs')]


def _mols_structure_check(task: Dict) -> List[TableRow]:
    k = task['params'][0]
    ag = _graph(task)
    g = ag.graph
    delta, big, _ = degrees(g)
    g_girth = girth(g)
    first_part = k * k + k
    parts_match = all(
        sorted(g.adjacency[first_part + (s - 1) * k + symbol]) == sorted(i * k + j for i, j in cells)
        for s, square in enumerate(generate_mols(k).squares, start=1)
        for symbol, cells in square_parts(square).items())
    return [
        _exact(task, 'vertices', 2 * k * k, g.n),
        _exact(task, 'regular degree', k, big if delta == big else f'{delta}..{big}'),
        _exact(task, 'positions split from rows and parts', True, is_bipartite_split(g, ag.role('positions'))),
        _exact(task, 'part vertices follow the squares', True, parts_match),
        _row(task, 'girth', expected='>= 6', computed=str(g_girth), status=PASS if g_girth >= 6 else FAIL),
    ]


def _ball_separation(ag: AnnotatedGraph, limit: int) -> Tuple[float, int]:
    """Smallest distance between the balls of non-adjacent base vertices, over the first ``limit`` pairs."""
    base_n = ag.params['base_n']
    base_adj = {parse_arc_key(key) for key in ag.keyed('path')}
    base_adj |= {(b, a) for a, b in base_adj}
    pairs = [(a, b) for a, b in combinations(range(base_n), 2) if (a, b) not in base_adj][:limit]
    best = INF
    for a, b in pairs:
        dist = multi_source_distances(ag.graph, ag.at('ball', a))
        best = min(best, min(dist[v] for v in ag.at('ball', b)))
    return best, len(pairs)


def _hslm_structure_check(task: Dict) -> List[TableRow]:
    s, length, m = task['params']
    ag = _graph(task)
    g = ag.graph
    n_h, e_h = ag.params['base_n'], ag.params['base_m']
    t = 2 ** (s + 1) - 1
    n1 = n_h * t + e_h * 2 * length
    _, big, _ = degrees(g)
    rows = [
        _exact(task, 'vertices', 2 * n1 - 2 * e_h + n_h * m, g.n),
        _exact(task, 'Delta', 3, big),
        _exact(task, 'degeneracy', 2, degeneracy(g)),
    ]
    if s == 1:
        rows.append(_exact(task, 'two-cop parameter bound', True, two_cop_bounds_hold(s, length, m)))
    else:
        rows.append(_exact(task, 'evasion parameter bound', True, evasion_bounds_hold(s, length, m)))

    # distances are measured in the single expansion; Q and the cycle shortcut the full graph
    expansion = expanded_graph(s, length)
    want = 2 * s + 2 * length + 1
    wrong = []
    for key in expansion.keyed('path'):
        a, b = parse_arc_key(key)
        d = distances_from(expansion.graph, expansion.one('root', a))[expansion.one('root', b)]
        if d != want:
            wrong.append(f'{key}:{d}')
    rows.append(_row(task, 'root distance of base neighbours', expected=str(want),
                     computed=str(want) if not wrong else ', '.join(wrong[:5]),
                     status=PASS if not wrong else FAIL, detail=f'{len(expansion.keyed("path"))} arcs'))
    best, checked = _ball_separation(expansion, limit=task.get('pairs', 20))
    rows.append(_row(task, 'ball separation of non-adjacent base vertices', expected=f'> {2 * length}',
                     computed=str(best), status=PASS if best > 2 * length else FAIL, detail=f'{checked} pairs'))
    return rows


CHECKS: Dict[str, Callable[[Dict], List[TableRow]]] = {
    'orthogonality': _orthogonality_check,
    'mols-structure': _mols_structure_check,
    'hslm-structure': _hslm_structure_check,
}


def _check_task(task: Dict, settings: Settings) -> List[TableRow]:
    with Stopwatch() as clock:
        rows = CHECKS[task['check']](task)
    for r in rows:
        r.seconds = round(clock.elapsed / len(rows), 3)
    return rows


TASKS = {
    'number': _number_task,
    'verdict': _verdict_task,
    'match': _match_task,
    'lift': _lift_task,
    'check': _check_task,
}


def _run_task(args) -> List[TableRow]:
    task, settings = args
    logger.debug(f"task {task['kind']} on {task['graph']}")
    try:
        return TASKS[task['kind']](task, settings)
    except SurroundError as e:
        logger.error(f"{task['battery']} {task['graph']}: {e}")
        return [_row(task, task['kind'], status=FAIL, detail=f'{type(e).__name__}: {e}')]

# endregion

# region batteries


def _numbers(battery: str, graph: str, family: str, params: Sequence[int], expected: Dict[Variant, Optional[int]],
             findings: Optional[Dict[Variant, str]] = None) -> List[Dict]:
    findings = findings or {}
    return [{'kind': 'number', 'battery': battery, 'graph': graph, 'family': family, 'params': list(params),
             'variant': v.value, 'expected': c, 'finding': findings.get(v)} for v, c in expected.items()]


def _match(battery: str, graph: str, family: str, params: Sequence[int], cops: str, robber: str,
           seeds: Sequence[int], expect: str = 'cop-win', k: Optional[int] = None,
           steps: Optional[int] = None) -> Dict:
    return {'kind': 'match', 'battery': battery, 'graph': graph, 'family': family, 'params': list(params),
            'cops': cops, 'robber': robber, 'seeds': list(seeds), 'expect': expect, 'k': k, 'steps': steps}


def _pool(battery: str, graph: str, family: str, params: Sequence[int], cops: str, robber: str,
          seeds: Sequence[int], **kw) -> List[Dict]:
    """The same match against the greedy and the random opponent."""
    if cops == 'pool':
        return [_match(battery, graph, family, params, f'adversary:{kind}', robber, seeds, **kw)
                for kind in ('greedy', 'random')]
    return [_match(battery, graph, family, params, cops, f'adversary:{kind}', seeds, **kw)
            for kind in ('greedy', 'random')]


def bipartite_battery(max_size: int = 3, seeds: Sequence[int] = range(1), **_) -> List[Dict]:
    """All five cop numbers of K_{a,b} for 1 <= a <= b <= ``max_size``, and the bipartite strategies."""
    tasks = []
    for a in range(1, max_size + 1):
        for b in range(a, max_size + 1):
            name = f'K_{a},{b}'
            expected = {Variant.CLASSICAL: min(2, a), Variant.VERTEX_R: a}
            expected.update({v: b for v in (Variant.VERTEX, Variant.EDGE, Variant.EDGE_R)})
            tasks += _numbers('bipartite', name, 'k-bipartite', (a, b), expected)
            tasks += [_match('bipartite', name, 'k-bipartite', (a, b), f'scripted:bipartite-cops/{v.value}', 'solver',
                             seeds[:1]) for v in Variant]
    return tasks


def tightness_battery(**_) -> List[Dict]:
    """Graphs on which the upper bounds between versions are tight."""
    tasks = _numbers('tightness', 'K_1,3', 'k-bipartite', (1, 3), {Variant.VERTEX_R: 1, Variant.VERTEX: 3})
    tasks += _numbers('tightness', 'K_3,3', 'k-bipartite', (3, 3), {Variant.VERTEX_R: 3, Variant.EDGE_R: 3})
    for name, params in (('K_1,3', [1, 3]), ('K_3,3', [3, 3])):
        ag = _family('k-bipartite', tuple(params))
        tasks.append({'kind': 'lift', 'battery': 'tightness', 'graph': name, 'n': ag.graph.n,
                      'edges': [list(e) for e in ag.graph.edges]})
    return tasks


def _tightness_post(rows: List[TableRow]) -> List[TableRow]:
    numbers = {(r.graph, r.quantity): r.computed for r in rows if r.status == PASS}
    vr, v = numbers.get(('K_1,3', 'c[vertex-r]')), numbers.get(('K_1,3', 'c[vertex]'))
    if vr is None or v is None:
        return rows
    tight = int(v) == 3 * int(vr)
    return rows + [TableRow(battery='tightness', graph='K_1,3', quantity='c[vertex] = Delta * c[vertex-r]',
                            expected='3', computed=f'{v}/{vr}', status=PASS if tight else FAIL)]


def leafy_edge_battery(delta: int = 3, seeds: Sequence[int] = range(50), **_) -> List[Dict]:
    """K_2 with delta-1 leaves at each end."""
    if delta < 2:
        raise ConfigError(f'leafy-edge needs delta >= 2, got {delta}')
    leaves = delta - 1
    name, family, params = f'K_2+{leaves}', 'leafy-edge', (leaves,)
    tasks = _numbers('leafy-edge', name, family, params, {
        Variant.VERTEX: 2 * leaves, Variant.EDGE: delta, Variant.VERTEX_R: 2, Variant.EDGE_R: delta})
    for key in ('leafy-edge-cops-v', 'leafy-edge-cops-e', 'leafy-two-phase-vr', 'leafy-two-phase-er'):
        tasks.append(_match('leafy-edge', name, family, params, f'scripted:{key}', 'solver', seeds[:1]))
    tasks += _pool('leafy-edge', name, family, params, 'pool', 'scripted:leafy-safe-robber/vertex', seeds,
                   expect='step-limit', k=2 * leaves - 1)
    return tasks


def leafy_bipartite_battery(delta: int = 4, seeds: Sequence[int] = range(50), **_) -> List[Dict]:
    """K_{k,k} with l leaves per vertex, k = floor(delta/2) and l = ceil(delta/2)."""
    if delta < 2:
        raise ConfigError(f'leafy-bipartite needs delta >= 2, got {delta}')
    k, leaves = delta // 2, delta - delta // 2
    name, family, params = f'K_{k},{k}+{leaves}', 'leafy-bipartite', (k, k, leaves)
    findings = {}
    if k * leaves < delta:
        findings[Variant.EDGE] = f'published formula gives {k * leaves}, below the maximum degree {delta}'
    tasks = _numbers('leafy-bipartite', name, family, params, {
        Variant.VERTEX_R: k + 1, Variant.VERTEX: (k + 1) * leaves, Variant.EDGE_R: delta,
        Variant.EDGE: k * leaves}, findings)
    keys = ['leafy-bipartite-cops-v', 'leafy-two-phase-vr', 'leafy-two-phase-er']
    if k >= 2:
        keys.append('leafy-bipartite-cops-e')
    tasks += [_match('leafy-bipartite', name, family, params, f'scripted:{key}', 'solver', seeds[:1]) for key in keys]
    tasks += _pool('leafy-bipartite', name, family, params, 'pool', 'scripted:leafy-safe-robber/vertex', seeds,
                   expect='step-limit', k=(k + 1) * leaves - 1)
    if k >= 2:
        tasks += _pool('leafy-bipartite', name, family, params, 'pool', 'scripted:leafy-safe-robber/edge', seeds,
                       expect='step-limit', k=k * leaves - 1)
    return tasks


def mols_battery(order: int = 3, extended: bool = False, seeds: Sequence[int] = range(50), **_) -> List[Dict]:
    """Orthogonal families, the structure of G_k and its cop numbers."""
    tasks = [{'kind': 'check', 'check': 'orthogonality', 'battery': 'mols', 'graph': f'MOLS({k})', 'k': k}
             for k in (2, 3, 4, 5)]
    name, family, params = f'G_{order}', 'mols-graph', (order,)
    tasks.append({'kind': 'check', 'check': 'mols-structure', 'battery': 'mols', 'graph': name, 'family': family,
                  'params': list(params)})
    tasks += _numbers('mols', name, family, params, {Variant.CLASSICAL: order})
    tasks.append({'kind': 'verdict', 'battery': 'mols', 'graph': name, 'family': family, 'params': list(params),
                  'variant': Variant.VERTEX_R.value, 'k': order + 1, 'expected': Verdict.COP_WIN.value,
                  'quantity': f'c[vertex-r] <= {order + 1}'})
    for key in ('mols-cops-classical', 'mols-cops-vr'):
        tasks.append(_match('mols', name, family, params, f'scripted:{key}', 'solver', seeds[:1]))
    tasks += _pool('mols', name, family, params, 'scripted:mols-cops-classical', 'pool', seeds)
    if extended:
        k = order * (order - 1)
        tasks.append({'kind': 'verdict', 'battery': 'mols', 'graph': name, 'family': family, 'params': list(params),
                      'variant': Variant.EDGE.value, 'k': k - 1, 'expected': Verdict.ROBBER_WIN.value,
                      'quantity': f'c[edge] >= {k}'})
    return tasks


def linegraph_battery(n: int = 4, extended: bool = False, seeds: Sequence[int] = range(50), **_) -> List[Dict]:
    """L(K_n): the vertex cop number, and with ``extended`` the robber-side edge bounds."""
    if n < 4:
        raise ConfigError(f'linegraph needs n >= 4, got {n}')
    name, family, params = f'L(K_{n})', 'line-complete', (n,)
    tasks = _numbers('linegraph', name, family, params,
                     {Variant.VERTEX: 2 * (n - 2), Variant.VERTEX_R: 4 if n == 4 else None})
    tasks.append(_match('linegraph', name, family, params, 'scripted:linegraph-cops-v', 'solver', seeds[:1]))
    tasks += _pool('linegraph', name, family, params, 'scripted:linegraph-cops-v', 'pool', seeds)
    if extended:
        for variant, bound, key in ((Variant.EDGE, ceil(n * (n - 2) / 3), 'linegraph-robber-e'),
                                    (Variant.EDGE_R, ceil(n * n / 12), 'linegraph-robber-er')):
            if bound - 1 < 1:
                continue
            tasks.append({'kind': 'verdict', 'battery': 'linegraph', 'graph': name, 'family': family,
                          'params': list(params), 'variant': variant.value, 'k': bound - 1,
                          'expected': Verdict.ROBBER_WIN.value, 'quantity': f'c[{variant.value}] >= {bound}'})
            tasks += _pool('linegraph', name, family, params, 'pool', f'scripted:{key}', seeds,
                           expect='step-limit', k=bound - 1)
    return tasks


def hslm_battery(s: int = 1, seeds: Sequence[int] = range(50), steps: Optional[int] = None, **_) -> List[Dict]:
    """
    H[s,l,m]. ``s = 1``: structure and the two-cop classical win. ``s = 2``: one restrictive vertex cop loses,
    checked exactly and against the scripted evader.
    """
    if s not in HSLM_PARAMS:
        raise ConfigError(f'hslm battery runs s in {sorted(HSLM_PARAMS)}, got {s}')
    length, m = HSLM_PARAMS[s]
    name, family, params = f'H[{s},{length},{m}]', 'hslm', (s, length, m)
    tasks: List[Dict] = [{'kind': 'check', 'check': 'hslm-structure', 'battery': 'hslm', 'graph': name,
                          'family': family, 'params': list(params)}]
    if s == 1:
        tasks.append({'kind': 'verdict', 'battery': 'hslm', 'graph': name, 'family': family, 'params': list(params),
                      'variant': Variant.CLASSICAL.value, 'k': 2, 'expected': Verdict.COP_WIN.value,
                      'quantity': 'c[classical] <= 2'})
        tasks += _pool('hslm', name, family, params, 'scripted:hslm-cops-classical', 'pool', seeds, steps=steps)
    else:
        tasks.append({'kind': 'verdict', 'battery': 'hslm', 'graph': name, 'family': family, 'params': list(params),
                      'variant': Variant.VERTEX_R.value, 'k': 1, 'expected': Verdict.ROBBER_WIN.value,
                      'quantity': 'c[vertex-r] >= 2'})
        tasks += _pool('hslm', name, family, params, 'pool', 'scripted:hslm-robber-vr', seeds,
                       expect='step-limit', k=1, steps=steps or 10_000)
        tasks.append(_match('hslm', name, family, params, 'solver:best-effort', 'scripted:hslm-robber-vr', seeds[:1],
                            expect='step-limit', k=1, steps=steps or 10_000))
    return tasks


def _hslm_post(rows: List[TableRow]) -> List[TableRow]:
    # an over-budget classical solve is accepted when the scripted two-cop strategy beats the whole pool
    scripted = [r for r in rows if r.quantity.startswith('scripted:hslm-cops-classical')]
    for r in rows:
        if r.quantity == 'c[classical] <= 2' and r.status == INDETERMINATE and scripted \
                and all(x.status == PASS for x in scripted):
            r.status = PASS
            r.detail += '; accepted by the scripted two-cop strategy against the adversary pool'
    return rows


def lifting_battery(max_n: int = 5, **_) -> List[Dict]:
    """The six lifts on every connected atlas graph with at most ``max_n`` vertices."""
    return [{'kind': 'lift', 'battery': 'lifting', 'graph': graph_id, 'n': g.n, 'edges': [list(e) for e in g.edges]}
            for graph_id, g in atlas_corpus(max_n)]


BATTERIES: Dict[str, Tuple[Callable[..., List[Dict]], Optional[Callable]]] = {
    'bipartite': (bipartite_battery, None),
    'tightness': (tightness_battery, _tightness_post),
    'leafy-edge': (leafy_edge_battery, None),
    'leafy-bipartite': (leafy_bipartite_battery, None),
    'mols': (mols_battery, None),
    'linegraph': (linegraph_battery, None),
    'hslm': (hslm_battery, _hslm_post),
    'lifting': (lifting_battery, None),
}
BATTERIES['prop1'] = BATTERIES['bipartite']
BATTERIES['thm2-tightness'] = BATTERIES['tightness']


def run_battery(name: str, settings: Optional[Settings] = None, **options) -> List[TableRow]:
    """
    Builds and runs a named battery. Options are passed to the battery builder (``max_size``, ``delta``,
    ``order``, ``n``, ``s``, ``extended``, ``seeds``, ``steps``, ``max_n``); unknown ones are ignored.

    :raises ConfigError: On an unknown battery or invalid options.
    """
    if name not in BATTERIES:
        raise ConfigError(f'unknown battery {name!r}, expected one of {sorted(BATTERIES)}')
    settings = settings or Settings()
    builder, post = BATTERIES[name]
    tasks = builder(**{k: v for k, v in options.items() if v is not None})
    logger.info(f'battery {name}: {len(tasks)} tasks on {settings.workers} worker(s)')
    args = [(task, settings) for task in tasks]
    if settings.workers > 1:
        with ProcessPoolExecutor(max_workers=settings.workers) as pool:
            nested = list(pool.map(_run_task, args))
    else:
        nested = [_run_task(a) for a in args]
    rows = [row for chunk in nested for row in chunk]
    if post is not None:
        rows = post(rows)
    counts = {s: sum(1 for r in rows if r.status == s) for s in (PASS, FAIL, INDETERMINATE, FINDING)}
    logger.info(f'battery {name}: {counts}')
    return rows

# endregion
