import argparse
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import argcomplete

from . import __version__
from .bound_tools import atlas_corpus, cop_number, file_corpus, random_corpus, verify_inequality_suite
from .config import Settings
from .df_tools import print_df, rows_to_dataframe, write_dataframe_to_file
from .errors import (ConfigError, IllegalMoveError, ScriptedStrategyAbort, SolverBudgetError, SurroundError)
from .family_tools import FAMILIES, build_family
from .file_tools import closest_names, export_dot, load_graph, save_graph, save_solution, write_json, write_transcripts
from .game_tools import (Configuration, GameSpec, Side, Variant, cop_moves_from, describe, is_legal_cop_move,
                         robber_moves_from, robber_placements)
from .helper import config_hash, parse_level, parse_seed_range
from .latin_tools import format_juxtaposition, format_square, generate_mols
from .scripted_tools import SCRIPTED
from .solver_tools import solve_fixed_k
from .strategy_tools import ADVERSARY_KINDS, CopController, RobberController, default_step_limit, run_match
from .table_tools import BATTERIES, exit_code, make_controller, match_spec, parse_player, play_matches, \
    run_battery, summarize_matches

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

EXIT_OK, EXIT_USAGE, EXIT_INDETERMINATE, EXIT_MISMATCH = 0, 1, 2, 3

# region run report


@dataclass
class RunReport:
    """JSON record of one command; identical inputs give identical ``results`` (timings aside)."""
    command: List[str]
    config_hash: str
    settings: Dict[str, Any]
    results: Any = None
    exit_code: int = EXIT_OK
    seconds: float = 0.0
    version: str = __version__
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return asdict(self)


def _report(args: argparse.Namespace, settings: Settings, argv: Sequence[str], results: Any, code: int,
            started: float) -> RunReport:
    # output paths do not change results, keep them out of the hash
    inputs = {k: v for k, v in vars(args).items() if k not in ('out', 'csv', 'config', 'save_solution')}
    return RunReport(command=list(argv), config_hash=config_hash({'args': inputs, 'settings': settings.as_dict()}),
                     settings=settings.as_dict(), results=results, exit_code=code,
                     seconds=round(time.perf_counter() - started, 3))

# endregion

# region interactive play


def _ask_ints(ask: Callable[[str], str], prompt: str, count: int) -> Optional[List[int]]:
    raw = ask(prompt).strip()
    if raw in ('q', 'quit'):
        raise ConfigError('session ended by the player')
    try:
        values = [int(x) for x in raw.replace(',', ' ').split()]
    except ValueError:
        print(f'  not a list of integers: {raw!r}')
        return None
    if len(values) != count:
        print(f'  expected {count} value(s), got {len(values)}')
        return None
    return values


class HumanCops(CopController):
    """Cops entered on the terminal; illegal input re-prompts without changing the game."""

    def __init__(self, spec: GameSpec, ask: Callable[[str], str] = input):
        super().__init__(spec)
        self.ask = ask

    def _where(self) -> str:
        return 'edge ids' if self.spec.variant.on_edges else 'vertices'

    def place(self):
        while True:
            values = _ask_ints(self.ask, f'place {self.spec.k} cop(s), {self._where()} 0..{self.spec.domain_size - 1}: ',
                               self.spec.k)
            if values is not None and all(0 <= p < self.spec.domain_size for p in values):
                return tuple(values)
            print('  illegal placement, try again')

    def move(self, cops, robber):
        print(describe(self.spec, Configuration.of(cops, robber, Side.COPS)))
        for i, p in enumerate(cops):
            print(f'  cop {i} at {p} may go to {cop_moves_from(self.spec, p)}')
        while True:
            values = _ask_ints(self.ask, 'new cop positions in cop order: ', self.spec.k)
            if values is not None and is_legal_cop_move(self.spec, cops, values):
                return tuple(values)
            print('  illegal move, try again')


class HumanRobber(RobberController):
    def __init__(self, spec: GameSpec, ask: Callable[[str], str] = input):
        super().__init__(spec)
        self.ask = ask

    def place(self, cops):
        options = robber_placements(self.spec, cops)
        print(f'cops at {list(cops)}; robber may start on {options}')
        return self._choose(options, 'robber start: ')

    def move(self, cops, robber):
        print(describe(self.spec, Configuration.of(cops, robber, Side.ROBBER)))
        return self._choose(robber_moves_from(self.spec, Configuration.of(cops, robber, Side.ROBBER)), 'robber to: ')

    def _choose(self, options: List[int], prompt: str) -> int:
        print(f'  legal: {options}')
        while True:
            values = _ask_ints(self.ask, prompt, 1)
            if values is not None and values[0] in options:
                return values[0]
            print('  illegal move, try again')

# endregion

# region helpers


def _suggest(name: str, choices: Sequence[str], what: str) -> ConfigError:
    close = [c for c, _ in closest_names(name, choices)]
    hint = f', did you mean {" or ".join(close)}?' if close else f', expected one of {sorted(choices)}'
    return ConfigError(f'unknown {what} {name!r}{hint}')


def _check_player(text: str) -> None:
    kind, name = parse_player(text)
    if kind == 'scripted' and name not in SCRIPTED:
        raise _suggest(name, list(SCRIPTED), 'scripted strategy')
    if kind == 'adversary' and name not in ADVERSARY_KINDS + ('greedy',):
        raise _suggest(name, ADVERSARY_KINDS, 'adversary')


def _variant(args: argparse.Namespace) -> Optional[Variant]:
    return Variant(args.variant) if getattr(args, 'variant', None) else None


def _write_report(report: RunReport, path: Optional[str]) -> None:
    if path:
        write_json(report.to_dict(), path, create_dir=True)

# endregion

# region commands


def cmd_gen(args, settings) -> Any:
    if args.family == 'mols':
        family = generate_mols(args.order)
        for i, sq in enumerate(family.squares, start=1):
            print(f'L{i}\n{format_square(sq)}\n')
        if len(family.squares) >= 2:
            print(f'L1 x L2\n{format_juxtaposition(family.squares[0], family.squares[1])}')
        return {'order': family.order, 'squares': [sq.to_list() for sq in family.squares]}
    if args.family not in FAMILIES:
        raise _suggest(args.family, list(FAMILIES) + ['mols'], 'family')
    ag = build_family(args.family, args.params)
    out = args.out or f"{args.family}-{'-'.join(str(p) for p in args.params) or 'graph'}.json"
    save_graph(ag, out, create_dir=True)
    print(f'{args.family} {args.params}: {ag.graph.n} vertices, {ag.graph.m} edges -> {out}')
    return {'family': ag.family, 'params': ag.params, 'n': ag.graph.n, 'm': ag.graph.m, 'file': out}


def cmd_solve(args, settings):
    ag = load_graph(args.graph)
    variant = Variant(args.variant)
    if args.find_min:
        report = cop_number(ag.graph, variant, trust_bounds=args.trust_bounds, budget=settings.budget,
                            chunk=settings.chunk, graph_id=args.graph)
        print(f'{args.graph} {variant.value}: cop number '
              f'{report.k_star if report.decided else report.interval} ({report.stats["seconds"]} s)')
        return report.to_dict(), EXIT_OK if report.decided else EXIT_INDETERMINATE
    if args.k is None:
        raise ConfigError('solve needs --k or --find-min')
    result = solve_fixed_k(GameSpec(ag.graph, variant, args.k), budget=settings.budget, chunk=settings.chunk)
    if args.save_solution:
        save_solution(result, args.save_solution, create_dir=True)
    print(f'{args.graph} {variant.value} k={args.k}: {result.verdict.value}')
    return result.summary(), EXIT_OK


def cmd_table(args, settings):
    if args.battery not in BATTERIES:
        raise _suggest(args.battery, list(BATTERIES), 'battery')
    seeds = parse_seed_range(args.seeds) if args.seeds else None
    rows = run_battery(args.battery, settings, max_size=args.max_size, delta=args.delta, order=args.order,
                       n=args.n, s=args.s, extended=args.extended, seeds=seeds, steps=args.steps,
                       max_n=args.max_n)
    df = rows_to_dataframe(r.flat() for r in rows)
    print_df(df)
    if args.csv:
        write_dataframe_to_file(df, args.csv, create_dir=True)
    return [asdict(r) for r in rows], exit_code(rows)


def cmd_simulate(args, settings):
    for text in (args.cops, args.robber):
        _check_player(text)
    ag = load_graph(args.graph)
    spec = match_spec(ag, args.cops, args.robber, variant=_variant(args), k=args.k, budget=settings.budget)
    seeds = parse_seed_range(args.seeds) if args.seeds else [settings.seed]
    try:
        transcripts = play_matches(ag, args.cops, args.robber, spec, seeds, steps=args.steps, settings=settings)
    except IllegalMoveError as e:
        if args.out:
            write_transcripts([e.transcript.to_dict()], _transcript_path(args.out), create_dir=True)
        raise
    if args.out:
        write_transcripts(transcripts, _transcript_path(args.out), create_dir=True)
    summary = summarize_matches(transcripts)
    print_df(rows_to_dataframe({'seed': t['meta']['seed'], 'outcome': t['outcome'], 'rounds': t['steps'],
                                'notes': len(t['notes'])} for t in transcripts))
    print(f"{args.cops} vs {args.robber} on {args.graph}: {summary}")
    return {'spec': {'variant': spec.variant.value, 'k': spec.k}, 'summary': summary,
            'outcomes': [t['outcome'] for t in transcripts]}, EXIT_OK


def _transcript_path(out: str) -> str:
    return out if out.endswith('.jsonl') else os.path.join(out, 'transcripts.jsonl')


def cmd_verify_bounds(args, settings):
    corpus = []
    if args.all_connected:
        corpus += atlas_corpus(args.max_n)
    if args.random:
        corpus += random_corpus(args.random, args.max_n, seed=settings.seed)
    if args.graph:
        corpus += file_corpus(args.graph)
    if not corpus:
        raise ConfigError('verify-bounds needs --all-connected, --random or --graph')
    rows = verify_inequality_suite(corpus, budget=settings.budget, chunk=settings.chunk, workers=settings.workers)
    df = rows_to_dataframe(r.flat() for r in rows)
    print_df(df)
    if args.csv:
        write_dataframe_to_file(df, args.csv, create_dir=True)
    violations = sum(len(r.violations) for r in rows)
    skipped = sum(1 for r in rows if r.status.startswith('skipped'))
    print(f'{len(rows)} graphs, {violations} violations, {skipped} skipped')
    code = EXIT_MISMATCH if violations else EXIT_INDETERMINATE if skipped else EXIT_OK
    return [asdict(r) for r in rows], code


def cmd_play(args, settings, ask: Optional[Callable[[str], str]] = None):
    ask = ask or input
    _check_player(args.opponent)
    ag = load_graph(args.graph)
    human_side = Side.COPS if args.role == 'cops' else Side.ROBBER
    cops_text = args.opponent if human_side is Side.ROBBER else 'adversary:stationary'
    robber_text = args.opponent if human_side is Side.COPS else 'adversary:stationary'
    spec = match_spec(ag, cops_text, robber_text, variant=_variant(args), k=args.k, budget=settings.budget)
    result = None
    if parse_player(args.opponent)[0] == 'solver':
        try:
            result = solve_fixed_k(spec, budget=settings.budget, chunk=settings.chunk)
        except SolverBudgetError as e:
            raise ConfigError(f'{e}; the solver cannot play this game, pick a scripted or adversary opponent') from e
    if human_side is Side.COPS:
        cops = HumanCops(spec, ask)
        robber = make_controller(ag, args.opponent, Side.ROBBER, spec, settings.seed, result, settings.budget)
    else:
        cops = make_controller(ag, args.opponent, Side.COPS, spec, settings.seed, result, settings.budget)
        robber = HumanRobber(spec, ask)
    limit = args.steps or default_step_limit(spec, settings.step_factor)
    t = run_match(spec, cops, robber, step_limit=limit, meta={'human': args.role, 'opponent': args.opponent})
    verb = 'captured' if spec.variant is Variant.CLASSICAL else 'surrounded'
    print(f'robber {verb} after {t.steps} rounds' if t.outcome == 'cop-win' else f'robber escaped for {t.steps} rounds')
    if args.out:
        write_json(t.to_dict(), args.out, create_dir=True)
    return {'outcome': t.outcome, 'steps': t.steps}, EXIT_OK


def cmd_export_dot(args, settings):
    ag = load_graph(args.graph)
    out = args.out or os.path.splitext(args.graph)[0] + '.dot'
    export_dot(ag, out, role=args.role, create_dir=True)
    return {'file': out}, EXIT_OK

# endregion

# region parser


def build_parser() -> argparse.ArgumentParser:
    banner = r"""
    ███████╗██╗   ██╗██████╗ ██████╗  ██████╗ ██╗   ██╗███╗   ██╗██████╗
    ██╔════╝██║   ██║██╔══██╗██╔══██╗██╔═══██╗██║   ██║████╗  ██║██╔══██╗
    ███████╗██║   ██║██████╔╝██████╔╝██║   ██║██║   ██║██╔██╗ ██║██║  ██║
    ╚════██║██║   ██║██╔══██╗██╔══██╗██║   ██║██║   ██║██║╚██╗██║██║  ██║
    ███████║╚██████╔╝██║  ██║██║  ██║╚██████╔╝╚██████╔╝██║ ╚████║██████╔╝
    ╚══════╝ ╚═════╝ ╚═╝  ╚═╝╚═╝  ╚═╝ ╚═════╝  ╚═════╝ ╚═╝  ╚═══╝╚═════╝
    """
    parser = argparse.ArgumentParser(
        prog='st',
        description=banner + "Cops and robber surrounding games: exact solving, strategies and cop-number tables.\n\n" +
        "Exit codes: 0 decided/pass, 1 usage or input error, 2 budget exhausted/indeterminate, 3 mismatch.\n",
        formatter_class=argparse.RawTextHelpFormatter
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')

    # settings shared by every sub-command; None means "not given on the command line"
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, help='dotenv-style file with SURROUND_* settings.')
    common.add_argument('--workers', type=int, help='Worker processes for independent work items.')
    common.add_argument('--budget', type=int, help='State budget per solve.')
    common.add_argument('--chunk', type=int, help='Solver chunk size in array elements.')
    common.add_argument('--seed', type=int, help='Seed for randomized commands.')
    common.add_argument('--step-factor', dest='step_factor', type=int, help='Step limit = factor * (n + k*m).')
    common.add_argument('--log-level', dest='log_level', type=str, help='Logging level, e.g. INFO.')
    common.add_argument('--out', type=str, help='Output file.')

    variants = [v.value for v in Variant]
    subparsers = parser.add_subparsers(dest='command', help='Available sub-commands')

    gen_parser = subparsers.add_parser('gen', parents=[common], help='Build a graph family and write it as JSON.')
    gen_parser.add_argument('family', type=str, help=f"One of {', '.join(FAMILIES)}, or mols.")
    gen_parser.add_argument('params', type=int, nargs='*', help='Integer family parameters.')
    gen_parser.add_argument('--order', type=int, default=3, help='Order of the squares for gen mols.')

    solve_parser = subparsers.add_parser('solve', parents=[common], help='Solve a game or find a cop number.')
    solve_parser.add_argument('--graph', type=str, required=True, help='Graph JSON or DOT file.')
    solve_parser.add_argument('--variant', type=str, choices=variants, required=True, help='Game version.')
    solve_parser.add_argument('--k', type=int, help='Number of cops for a single solve.')
    solve_parser.add_argument('--find-min', dest='find_min', action='store_true', help='Search the cop number.')
    solve_parser.add_argument('--trust-bounds', dest='trust_bounds', action='store_true',
                              help='Start the search at the trivial lower bound.')
    solve_parser.add_argument('--save-solution', dest='save_solution', type=str, help='Write the solution as .npz.')

    table_parser = subparsers.add_parser('table', parents=[common], help='Reproduce a battery of published values.')
    table_parser.add_argument('battery', type=str, help=f"One of {', '.join(BATTERIES)}.")
    table_parser.add_argument('--max-size', dest='max_size', type=int, help='bipartite: largest class size.')
    table_parser.add_argument('--delta', type=int, help='leafy-edge / leafy-bipartite: maximum degree.')
    table_parser.add_argument('--order', type=int, help='mols: order k of G_k.')
    table_parser.add_argument('--n', type=int, help='linegraph: n of L(K_n).')
    table_parser.add_argument('--s', type=int, help='hslm: tree height s.')
    table_parser.add_argument('--max-n', dest='max_n', type=int, help='lifting: largest atlas graph.')
    table_parser.add_argument('--extended', action='store_true', default=None, help='Add the slow robber-side rows.')
    table_parser.add_argument('--seeds', type=str, help='Seeds of adversary matches, e.g. 0..49.')
    table_parser.add_argument('--steps', type=int, help='Step limit of adversary matches.')
    table_parser.add_argument('--csv', type=str, help='Also write the table as csv or json.')

    sim_parser = subparsers.add_parser('simulate', parents=[common], help='Play matches between two players.')
    sim_parser.add_argument('--graph', type=str, required=True, help='Graph JSON or DOT file.')
    sim_parser.add_argument('--variant', type=str, choices=variants, help='Game version, if no scripted player.')
    sim_parser.add_argument('--k', type=int, help='Number of cops, if no scripted cop player.')
    sim_parser.add_argument('--cops', type=str, required=True,
                            help='scripted:KEY, adversary:KIND, solver or solver:best-effort.')
    sim_parser.add_argument('--robber', type=str, required=True, help='scripted:KEY, adversary:KIND or solver.')
    sim_parser.add_argument('--seeds', type=str, help='A seed or an inclusive range like 0..49.')
    sim_parser.add_argument('--steps', type=int, help='Step limit per match.')

    bounds_parser = subparsers.add_parser('verify-bounds', parents=[common],
                                          help='Check the relations between the five cop numbers on a corpus.')
    bounds_parser.add_argument('--all-connected', dest='all_connected', action='store_true',
                               help='All connected atlas graphs up to --max-n vertices.')
    bounds_parser.add_argument('--random', type=int, help='Number of random connected graphs.')
    bounds_parser.add_argument('--max-n', dest='max_n', type=int, default=5, help='Largest graph order.')
    bounds_parser.add_argument('--graph', type=str, action='append', help='Graph file; may repeat.')
    bounds_parser.add_argument('--csv', type=str, help='Also write the table as csv or json.')

    play_parser = subparsers.add_parser('play', parents=[common], help='Play a game on the terminal.')
    play_parser.add_argument('--graph', type=str, required=True, help='Graph JSON or DOT file.')
    play_parser.add_argument('--variant', type=str, choices=variants, help='Game version.')
    play_parser.add_argument('--k', type=int, help='Number of cops.')
    play_parser.add_argument('--role', type=str, choices=['cops', 'robber'], required=True, help='Your side.')
    play_parser.add_argument('--opponent', type=str, default='solver', help='solver, scripted:KEY or adversary:KIND.')
    play_parser.add_argument('--steps', type=int, help='Step limit.')

    dot_parser = subparsers.add_parser('export-dot', parents=[common], help='Write a graph file as DOT.')
    dot_parser.add_argument('--graph', type=str, required=True, help='Graph JSON file.')
    dot_parser.add_argument('--role', type=str, help='Plain label role to highlight.')

    return parser


COMMANDS = {
    'gen': cmd_gen,
    'solve': cmd_solve,
    'table': cmd_table,
    'simulate': cmd_simulate,
    'verify-bounds': cmd_verify_bounds,
    'play': cmd_play,
    'export-dot': cmd_export_dot,
}

# endregion


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argcomplete.autocomplete(parser)
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE

    started = time.perf_counter()
    try:
        flags = {k: getattr(args, k) for k in ('budget', 'workers', 'seed', 'step_factor', 'chunk', 'log_level')}
        settings = Settings.resolve(flags, config_path=args.config)
        logger.setLevel(parse_level(settings.log_level))
        logger.debug(f'{args.command}: settings {settings.as_dict()}')
        outcome = COMMANDS[args.command](args, settings)
        results, code = outcome if isinstance(outcome, tuple) else (outcome, EXIT_OK)
    except (IllegalMoveError, ScriptedStrategyAbort) as e:
        logger.error(f'{args.command}: {e}')
        return EXIT_MISMATCH
    except SolverBudgetError as e:
        logger.error(f'{args.command}: {e}')
        return EXIT_INDETERMINATE
    except (SurroundError, ValueError) as e:
        logger.error(f'{args.command}: {e}')
        return EXIT_USAGE

    if args.command in ('solve', 'table', 'verify-bounds'):
        _write_report(_report(args, settings, argv, results, code, started), args.out)
    logger.info(f'{args.command}: exit code {code}')
    return code


if __name__ == '__main__':
    sys.exit(main())
