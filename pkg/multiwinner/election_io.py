"""
Text formats for elections and reduction instances.

Election file (UTF-8):

    m n k
    <m candidate labels, one per line>
    <n rankings, comma-separated labels, most preferred first>

X3C file: the universe size on the first line, then one set per line as three
1-based elements separated by spaces. Graph file: the vertex count on the first
line, then one edge per line as two 0-based vertex indices.

In every format lines starting with ``#`` and blank lines are skipped.
"""

import logging
from collections.abc import Iterator
from pathlib import Path

from .election import Election
from .errors import InvalidInputError, ParseError
from .generators import Graph, X3cInstance

logger = logging.getLogger(__name__)


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    """Yield (line number, stripped line) for every non-comment, non-blank line."""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


def _ints(line: str, number: int, count: int | None = None) -> list[int]:
    try:
        values = [int(token) for token in line.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {line!r}", line=number) from None
    if count is not None and len(values) != count:
        raise ParseError(f"expected {count} integers, got {len(values)}", line=number)
    return values


def load_election(text: str) -> tuple[Election, int]:
    """Parse an election file, returning the election and the committee size from its header."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty election file", line=1)

    header_line, header = lines[0]
    m, n, k = _ints(header, header_line, 3)
    if m < 1 or n < 1:
        raise ParseError(f"need m >= 1 and n >= 1, got m={m} n={n}", line=header_line)
    if not 1 <= k <= m:
        raise ParseError(f"committee size {k} outside 1..{m}", line=header_line)
    if len(lines) < 1 + m + n:
        raise ParseError(f"expected {m} candidates and {n} votes, file ends early", line=lines[-1][0])
    if len(lines) > 1 + m + n:
        raise ParseError("unexpected content after the last vote", line=lines[1 + m + n][0])

    candidates = []
    index: dict[str, int] = {}
    for number, label in lines[1 : 1 + m]:
        if any(ch.isspace() for ch in label) or "," in label:
            raise ParseError(f"candidate label {label!r} contains whitespace or a comma", line=number)
        if label in index:
            raise ParseError(f"duplicate candidate label {label!r}", line=number)
        index[label] = len(candidates)
        candidates.append(label)

    votes = []
    for number, line in lines[1 + m :]:
        ranking = []
        for token in line.split(","):
            label = token.strip()
            if label not in index:
                raise ParseError(f"unknown candidate label {label!r}", line=number)
            ranking.append(index[label])
        if len(ranking) != m or len(set(ranking)) != m:
            raise ParseError(f"vote is not a permutation of the {m} candidates", line=number)
        votes.append(tuple(ranking))

    election = Election(tuple(candidates), tuple(votes))
    logger.debug(f"Parsed election with m={m} n={n} k={k}")
    return election, k


def parse_election(text: str) -> Election:
    return load_election(text)[0]


def serialize_election(election: Election, k: int = 1) -> str:
    if not 1 <= k <= election.m:
        raise InvalidInputError(f"committee size {k} outside 1..{election.m}")
    lines = [f"{election.m} {election.n} {k}"]
    lines.extend(election.candidates)
    lines.extend(",".join(election.candidates[c] for c in vote) for vote in election.votes)
    return "\n".join(lines) + "\n"


def read_election(path: str | Path) -> tuple[Election, int]:
    return load_election(Path(path).read_text(encoding="utf-8"))


def write_election(path: str | Path, election: Election, k: int = 1):
    Path(path).write_text(serialize_election(election, k), encoding="utf-8")


def parse_x3c(text: str) -> X3cInstance:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty X3C file", line=1)
    number, first = lines[0]
    (universe_size,) = _ints(first, number, 1)
    sets = []
    for number, line in lines[1:]:
        elements = _ints(line, number, 3)
        if len(set(elements)) != 3:
            raise ParseError(f"set {elements} repeats an element", line=number)
        if not all(1 <= e <= universe_size for e in elements):
            raise ParseError(f"set {elements} has elements outside 1..{universe_size}", line=number)
        sets.append(frozenset(elements))
    try:
        return X3cInstance(universe_size, tuple(sets))
    except InvalidInputError as e:
        raise ParseError(str(e)) from e


def serialize_x3c(instance: X3cInstance) -> str:
    lines = [str(instance.universe_size)]
    lines.extend(" ".join(str(e) for e in sorted(s)) for s in instance.sets)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty graph file", line=1)
    number, first = lines[0]
    (vertex_count,) = _ints(first, number, 1)
    edges = []
    for number, line in lines[1:]:
        u, v = _ints(line, number, 2)
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise ParseError(f"edge ({u}, {v}) has a vertex outside 0..{vertex_count - 1}", line=number)
        edges.append((u, v))
    try:
        return Graph(vertex_count, tuple(edges))
    except InvalidInputError as e:
        raise ParseError(str(e)) from e


def serialize_graph(graph: Graph) -> str:
    lines = [str(graph.vertex_count)]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"
