"""
Cop-number search on top of the exact solver, the inequality suite relating the five cop numbers,
and the graph corpora the suite runs on.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import GraphError, SolverBudgetError
from .game_tools import GameSpec, Variant
from .graph_tools import Graph, build_graph, degeneracy, degrees, from_networkx, is_connected
from .helper import Stopwatch
from .solver_tools import DEFAULT_BUDGET, DEFAULT_CHUNK, Verdict, solve_fixed_k

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

# region cop number


@dataclass
class CopNumberReport:
    """
    Result of :func:`cop_number`. ``k_star`` is None when the budget ran out first; ``interval`` then
    brackets the cop number as ``(low, high)`` with ``high`` None when unknown.
    """
    variant: str
    graph_id: str
    k_star: Optional[int]
    start: int
    verdicts: List[Dict] = field(default_factory=list)
    lower_bounds: Dict[str, int] = field(default_factory=dict)
    interval: Tuple[int, Optional[int]] = (1, None)
    stats: Dict[str, float] = field(default_factory=dict)

    @property
    def decided(self) -> bool:
        return self.k_star is not None

    def to_dict(self) -> Dict:
        d = asdict(self)
        d['interval'] = list(self.interval)
        return d


def lower_bounds(g: Graph) -> Dict[str, int]:
    delta, big_delta, _ = degrees(g)
    return {'delta': delta, 'Delta': big_delta, 'degeneracy': degeneracy(g)}


def trivial_lower_bound(g: Graph, variant: Variant) -> int:
    """
    Degeneracy for the restrictive vertex version, maximum degree for the other surround versions
    (the robber may sit still on a vertex of highest degree), 1 for the classical game.
    """
    bounds = lower_bounds(g)
    if variant is Variant.CLASSICAL:
        return 1
    if variant is Variant.VERTEX_R:
        return max(1, bounds['degeneracy'])
    return max(1, bounds['Delta'])


def cop_number(g: Graph, variant: Variant, trust_bounds: bool = False, budget: int = DEFAULT_BUDGET,
               chunk: int = DEFAULT_CHUNK, graph_id: str = 'graph', max_k: Optional[int] = None) -> CopNumberReport:
    """
    Smallest k for which k cops win, by ascending search.

    :param g: Connected graph.
    :param variant: Game version.
    :param trust_bounds: Start at the trivial lower bound instead of 1.
    :param budget: State budget per solve.
    :param chunk: Solver chunk size.
    :param graph_id: Name recorded in the report.
    :param max_k: Largest k tried, defaults to the size of the cop position domain.
    :return: The report; undecided with a bracketing interval if a solve exceeded the budget.
    :raises GraphError: If ``g`` is disconnected.
    """
    if not is_connected(g):
        raise GraphError(f'{graph_id}: the game is played on connected graphs only')
    bounds = lower_bounds(g)
    start = trivial_lower_bound(g, variant) if trust_bounds else 1
    last = max_k if max_k is not None else GameSpec(g, variant, 1).domain_size
    report = CopNumberReport(variant=variant.value, graph_id=graph_id, k_star=None, start=start,
                             lower_bounds=bounds, interval=(start, None))
    seconds = 0.0
    with Stopwatch() as clock:
        for k in range(start, max(start, last) + 1):
            spec = GameSpec(g, variant, k)
            try:
                result = solve_fixed_k(spec, budget=budget, chunk=chunk)
            except SolverBudgetError as e:
                logger.warning(f'{graph_id} {variant.value}: budget exhausted at k={k} ({e.states:,} states)')
                report.verdicts.append({'k': k, 'verdict': 'indeterminate', 'states': e.states})
                report.interval = (k, None)
                break
            seconds += result.stats['seconds']
            report.verdicts.append({'k': k, **result.summary()})
            if result.verdict is Verdict.COP_WIN:
                report.k_star = k
                report.interval = (k, k)
                break
            report.interval = (k + 1, None)
    if report.k_star is not None and report.k_star > start:
        previous = report.verdicts[-2]
        assert previous['k'] == report.k_star - 1 and previous['verdict'] == Verdict.ROBBER_WIN.value
    report.stats = {'solves': len(report.verdicts), 'solver_seconds': round(seconds, 3),
                    'seconds': round(clock.elapsed, 3)}
    logger.info(f'{graph_id} {variant.value}: cop number {report.k_star if report.decided else report.interval}')
    return report

# endregion

# region inequality suite

# (name, bigger side, factor, smaller side): holds iff bigger <= factor * smaller
UPPER_BOUNDS = (
    ('vertex <= Delta * vertex-r', Variant.VERTEX, 'Delta', Variant.VERTEX_R),
    ('edge <= Delta * edge-r', Variant.EDGE, 'Delta', Variant.EDGE_R),
    ('vertex <= 2 * edge', Variant.VERTEX, 2, Variant.EDGE),
    ('vertex-r <= 2 * edge-r', Variant.VERTEX_R, 2, Variant.EDGE_R),
    ('edge <= Delta * vertex', Variant.EDGE, 'Delta', Variant.VERTEX),
    ('edge-r <= Delta * vertex-r', Variant.EDGE_R, 'Delta', Variant.VERTEX_R),
)


def check_inequalities(numbers: Dict[Variant, int], bounds: Dict[str, int]) -> Dict[str, bool]:
    """
    All asserted relations between the five cop numbers of one graph, by name. The containment
    conjecture is reported separately by :func:`containment_conjecture_holds`.
    """
    big = bounds['Delta']
    checks = {
        'vertex-r <= vertex': numbers[Variant.VERTEX_R] <= numbers[Variant.VERTEX],
        'edge-r <= edge': numbers[Variant.EDGE_R] <= numbers[Variant.EDGE],
        'vertex-r >= degeneracy': numbers[Variant.VERTEX_R] >= bounds['degeneracy'],
        'vertex >= Delta': numbers[Variant.VERTEX] >= big,
        'edge >= Delta': numbers[Variant.EDGE] >= big,
        'edge-r >= Delta': numbers[Variant.EDGE_R] >= big,
    }
    for name, lhs, factor, rhs in UPPER_BOUNDS:
        f = big if factor == 'Delta' else factor
        checks[name] = numbers[lhs] <= f * numbers[rhs]
    return checks


def containment_conjecture_holds(numbers: Dict[Variant, int], bounds: Dict[str, int]) -> bool:
    return numbers[Variant.EDGE_R] <= numbers[Variant.CLASSICAL] * bounds['Delta']


@dataclass
class SuiteRow:
    graph_id: str
    n: int
    m: int
    status: str
    numbers: Dict[str, int] = field(default_factory=dict)
    bounds: Dict[str, int] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)
    conjecture: Optional[bool] = None
    certificates: Dict[str, Dict] = field(default_factory=dict)

    def flat(self) -> Dict:
        return {'graph': self.graph_id, 'n': self.n, 'm': self.m, 'status': self.status,
                **{f'c[{k}]': v for k, v in self.numbers.items()}, **self.bounds,
                'violations': len(self.violations), 'containment': self.conjecture}


def suite_row(item: Tuple[str, Graph], budget: int = DEFAULT_BUDGET, chunk: int = DEFAULT_CHUNK) -> SuiteRow:
    """Solves all five cop numbers of one graph and checks every relation."""
    graph_id, g = item
    row = SuiteRow(graph_id=graph_id, n=g.n, m=g.m, status='ok', bounds=lower_bounds(g))
    numbers: Dict[Variant, int] = {}
    reports: Dict[Variant, CopNumberReport] = {}
    for variant in Variant:
        report = cop_number(g, variant, budget=budget, chunk=chunk, graph_id=graph_id)
        reports[variant] = report
        if not report.decided:
            row.status = f'skipped: budget exhausted for {variant.value}'
            return row
        numbers[variant] = report.k_star
    row.numbers = {v.value: c for v, c in numbers.items()}
    checks = check_inequalities(numbers, row.bounds)
    row.violations = [name for name, ok in checks.items() if not ok]
    row.conjecture = containment_conjecture_holds(numbers, row.bounds)
    if row.violations:
        row.status = 'violation'
        row.certificates = {v.value: r.to_dict() for v, r in reports.items()}
        logger.error(f'{graph_id}: violated {row.violations} with {row.numbers}')
    return row


def _suite_task(args) -> SuiteRow:
    item, budget, chunk = args
    return suite_row(item, budget=budget, chunk=chunk)


def verify_inequality_suite(corpus: Iterable[Tuple[str, Graph]], budget: int = DEFAULT_BUDGET,
                            chunk: int = DEFAULT_CHUNK, workers: int = 1) -> List[SuiteRow]:
    """
    Runs :func:`suite_row` over a corpus. Rows come back in corpus order for any worker count.

    :raises GraphError: If a corpus graph is disconnected.
    """
    items = list(corpus)
    for graph_id, g in items:
        if not is_connected(g):
            raise GraphError(f'{graph_id}: the game is played on connected graphs only')
    tasks = [(item, budget, chunk) for item in items]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_suite_task, tasks))
    else:
        rows = [_suite_task(t) for t in tasks]
    bad = sum(1 for r in rows if r.violations)
    skipped = sum(1 for r in rows if r.status.startswith('skipped'))
    logger.info(f'inequality suite: {len(rows)} graphs, {bad} with violations, {skipped} skipped')
    return rows

# endregion

# region corpora


def atlas_corpus(max_n: int) -> List[Tuple[str, Graph]]:
    """
    Connected graphs with ``2 <= n <= max_n`` from the networkx graph atlas (complete up to 7 vertices).
    """
    if max_n > 7:
        raise GraphError(f'the graph atlas stops at 7 vertices, got max_n={max_n}')
    out = []
    for index, h in enumerate(nx.graph_atlas_g()):
        if 2 <= h.number_of_nodes() <= max_n and nx.is_connected(h):
            out.append((f'atlas-{index}', from_networkx(h)))
    return out


def random_connected_graph(n: int, rng: np.random.Generator) -> Graph:
    """Random spanning tree plus each remaining pair with a random density."""
    order = rng.permutation(n)
    edges = {tuple(sorted((int(order[i]), int(order[rng.integers(0, i)])))) for i in range(1, n)}
    density = rng.random() * 0.5
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < density:
                edges.add((u, v))
    return build_graph(n, sorted(edges))


def random_corpus(count: int, max_n: int, seed: int = 0) -> List[Tuple[str, Graph]]:
    if max_n < 2:
        raise GraphError(f'random corpus needs max_n >= 2, got {max_n}')
    rng = np.random.default_rng(seed)
    return [(f'random-{seed}-{i}', random_connected_graph(int(rng.integers(2, max_n + 1)), rng))
            for i in range(count)]


def file_corpus(paths: Sequence[str]) -> List[Tuple[str, Graph]]:
    from .file_tools import load_graph
    return [(path, load_graph(path).graph) for path in paths]

# endregion
