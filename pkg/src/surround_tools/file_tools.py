import json
import os
import re
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from rapidfuzz import fuzz

from .errors import GraphError, SurroundError
from .family_tools import AnnotatedGraph
from .graph_tools import Graph, Orientation, build_graph

# Any logging activities inside functions should use this global logger.
from .config import get_global_logger
logger = get_global_logger()

# region paths


def _prepare(filepath: str, create_dir: bool) -> str:
    """Checks the parent directory of ``filepath``, creating it on request."""
    path = os.path.dirname(os.path.abspath(filepath))
    if create_dir and not os.path.exists(path):
        os.makedirs(path)
        logger.debug(f'creating {path}...')
    if not os.path.isdir(path):
        raise SurroundError(f'directory {path} does not exist')
    return path


def write_json(data: Any, filepath: str, create_dir: bool = False) -> None:
    """
    Writes ``data`` as indented JSON.

    :param data: JSON-serialisable object.
    :type data: Any
    :param filepath: Target file.
    :type filepath: str
    :param create_dir: Create the parent directory if it is missing.
    :type create_dir: bool
    :raises SurroundError: If the directory does not exist or the file cannot be written.
    """
    _prepare(filepath, create_dir)
    try:
        with open(filepath, 'w', encoding='utf-8') as file:
            json.dump(data, file, indent=2)
    except (IOError, TypeError) as e:
        raise SurroundError(f'failed to write {filepath}: {e}') from e
    logger.info(f"JSON file '{filepath}' written")


def read_json(filepath: str) -> Any:
    """
    :raises SurroundError: If the file is missing or does not parse.
    """
    if not os.path.isfile(filepath):
        raise SurroundError(f'file {filepath} does not exist')
    try:
        with open(filepath, 'r', encoding='utf-8') as file:
            return json.load(file)
    except (IOError, json.JSONDecodeError) as e:
        raise SurroundError(f'failed to read {filepath}: {e}') from e

# endregion

# region graphs


def graph_to_dict(ag: AnnotatedGraph) -> Dict[str, Any]:
    """
    Annotated-graph JSON: ``{"n", "edges", "labels", "params", "family"}`` plus ``"arcs"`` when the
    graph carries an orientation. Edge order is preserved, so edge ids survive the round trip.
    """
    d: Dict[str, Any] = {
        'n': ag.graph.n,
        'edges': [list(e) for e in ag.graph.edges],
        'labels': ag.labels,
        'params': ag.params,
        'family': ag.family,
    }
    if ag.orientation is not None:
        d['arcs'] = [list(a) for a in ag.orientation.arcs]
    return d


def graph_from_dict(d: Dict[str, Any]) -> AnnotatedGraph:
    """
    :raises GraphError: If ``n`` or ``edges`` is missing or the edge list is invalid.
    """
    try:
        n, edges = int(d['n']), d['edges']
    except (KeyError, TypeError, ValueError) as e:
        raise GraphError(f'graph JSON needs "n" and "edges": {e}') from e
    g = build_graph(n, edges)
    orientation = None
    if d.get('arcs') is not None:
        orientation = Orientation(graph=g, arcs=tuple((int(a), int(b)) for a, b in d['arcs']))
    return AnnotatedGraph(graph=g, labels=d.get('labels') or {}, params=d.get('params') or {},
                          family=d.get('family', 'custom'), orientation=orientation)


def save_graph(ag: AnnotatedGraph, filepath: str, create_dir: bool = False) -> None:
    write_json(graph_to_dict(ag), filepath, create_dir=create_dir)


def load_graph(filepath: str) -> AnnotatedGraph:
    """
    Reads an annotated-graph JSON file, or a DOT file when the extension is ``.dot`` / ``.gv``.

    :raises GraphError: On a malformed graph.
    :raises SurroundError: If the file cannot be read.
    """
    if os.path.splitext(filepath)[1] in ('.dot', '.gv'):
        return AnnotatedGraph(graph=read_dot(filepath), family='custom')
    ag = graph_from_dict(read_json(filepath))
    logger.debug(f'loaded {filepath}: {ag.family}, {ag.graph.n} vertices, {ag.graph.m} edges')
    return ag


def to_dot(g: Graph, name: str = 'G', highlight: Iterable[int] = ()) -> str:
    """
    Undirected DOT text; edges are written in edge-id order so :func:`read_dot` restores the ids.

    >>> print(to_dot(build_graph(2, [(0, 1)])))
    graph G {
      0;
      1;
      0 -- 1;
    }
    """
    marked = set(highlight)
    lines = [f'graph {name} {{']
    lines.extend(f'  {v} [style=filled, fillcolor=lightblue];' if v in marked else f'  {v};' for v in range(g.n))
    lines.extend(f'  {u} -- {v};' for u, v in g.edges)
    lines.append('}')
    return '\n'.join(lines)


_DOT_NODE = re.compile(r'^\s*(\d+)\s*(\[.*\])?\s*;?\s*$')
_DOT_EDGE = re.compile(r'^\s*(\d+)\s*--\s*(\d+)\s*(\[.*\])?\s*;?\s*$')


def read_dot(filepath: str) -> Graph:
    """
    Reads the integer-labelled DOT subset written by :func:`to_dot`.

    :raises GraphError: On a line that is neither a node nor an edge statement.
    """
    if not os.path.isfile(filepath):
        raise SurroundError(f'file {filepath} does not exist')
    with open(filepath, 'r', encoding='utf-8') as file:
        body = file.read()
    n, edges = 0, []
    for raw in body.splitlines()[1:]:
        line = raw.strip()
        if not line or line == '}':
            continue
        edge = _DOT_EDGE.match(line)
        node = _DOT_NODE.match(line)
        if edge:
            u, v = int(edge.group(1)), int(edge.group(2))
            edges.append((u, v))
            n = max(n, u + 1, v + 1)
        elif node:
            n = max(n, int(node.group(1)) + 1)
        else:
            raise GraphError(f'{filepath}: cannot parse DOT line {line!r}')
    return build_graph(n, edges)


def export_dot(ag: AnnotatedGraph, filepath: str, role: Optional[str] = None, create_dir: bool = False) -> None:
    """Writes DOT text, optionally filling the vertices of a plain label role."""
    _prepare(filepath, create_dir)
    highlight = ag.role(role) if role else ()
    with open(filepath, 'w', encoding='utf-8') as file:
        file.write(to_dot(ag.graph, name=ag.family.replace('-', '_'), highlight=highlight) + '\n')
    logger.info(f"DOT file '{filepath}' written")

# endregion

# region transcripts and solver artefacts


def write_transcripts(transcripts: Sequence[Dict], filepath: str, create_dir: bool = False) -> None:
    """One JSON object per line."""
    _prepare(filepath, create_dir)
    with open(filepath, 'w', encoding='utf-8') as file:
        file.writelines(json.dumps(t) + '\n' for t in transcripts)
    logger.info(f"{len(transcripts)} transcripts written to '{filepath}'")


def read_transcripts(filepath: str) -> List[Dict]:
    if not os.path.isfile(filepath):
        raise SurroundError(f'file {filepath} does not exist')
    with open(filepath, 'r', encoding='utf-8') as file:
        return [json.loads(line) for line in file if line.strip()]


def save_solution(result, filepath: str, create_dir: bool = False) -> None:
    """
    Stores a solve result as a compressed ``.npz``: the packed cop-win bitmap over state indices, both
    rank tables and the summary as a JSON string.
    """
    _prepare(filepath, create_dir)
    np.savez_compressed(filepath, bitmap=result.winning_bitmap(), rank_cops=result.rank_cops,
                        rank_robber=result.rank_robber, summary=np.array(json.dumps(result.summary())))
    logger.info(f"solution written to '{filepath}'")

# endregion

# region name matching


def normalize_string(s: str, filter_pattern: str = r'[^a-z0-9]+') -> str:
    """
    Lower-cases ``s`` and removes the characters matching ``filter_pattern``.

    >>> normalize_string('Leafy-Bipartite')
    'leafybipartite'
    """
    return re.sub(pattern=filter_pattern, repl='', string=s.lower())


def closest_names(name: str, choices: Iterable[str], similarity_threshold: float = 60.0,
                  limit: int = 3) -> List[Tuple[str, float]]:
    """
    Choices resembling ``name``, best first, by rapidfuzz ratio on normalized strings.

    >>> closest_names('k-bipartit', ['k-bipartite', 'cycle'])[0][0]
    'k-bipartite'
    """
    target = normalize_string(name)
    scored = [(c, fuzz.ratio(target, normalize_string(c))) for c in choices]
    scored = [(c, score) for c, score in scored if score >= similarity_threshold]
    scored.sort(key=lambda x: (-x[1], x[0]))
    return scored[:limit]

# endregion
