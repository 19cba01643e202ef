"""Text formats for instances, assignments and graphs.

Instance::

    # comment
    semantics: nonerasing
    deletions: 2
    eq: a b c a b | A B

Assignment, one block per line (jokers by their number)::

    A = a b c
    *1 = d

Graph: a header "n m [colors]", m lines "s t" (1-based), then a color line when colors is given.
"""

from typing import Iterable, Optional

from string_equations.core import JOKER, Assignment, Semantics, System, render_symbols, symbols
from string_equations.errors import ParseError
from string_equations.reductions import Graph

EQUATION = "eq:"
SEMANTICS = "semantics:"
DELETIONS = "deletions:"


def _lines(text: str) -> Iterable[tuple[int, str]]:
    """Numbered lines with comments stripped; blank lines skipped."""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield number, line


def _column(line: str, token: str, start: int = 0) -> int:
    return line.find(token, start) + 1


def parse_instance(text: str) -> System:
    """
    Parse an instance file.

    Args:
        text (str): The instance text.

    Returns:
        System: the parsed system; jokers are numbered left to right.
    """
    semantics: Optional[Semantics] = None
    deletions: Optional[int] = None
    equations: list[tuple[list[str], list[str]]] = []
    for number, line in _lines(text):
        stripped = line.strip()
        if stripped.startswith(SEMANTICS):
            value = stripped[len(SEMANTICS) :].strip()
            if semantics is not None:
                raise ParseError("semantics given twice", number, _column(line, SEMANTICS))
            try:
                semantics = Semantics(value)
            except ValueError:
                raise ParseError(f"unknown semantics {value!r}, expected nonerasing or allowempty", number, _column(line, value))
        elif stripped.startswith(DELETIONS):
            value = stripped[len(DELETIONS) :].strip()
            if deletions is not None:
                raise ParseError("deletions given twice", number, _column(line, DELETIONS))
            if not value.isdigit():
                raise ParseError(f"deletions must be a non-negative integer, got {value!r}", number, _column(line, DELETIONS))
            deletions = int(value)
        elif stripped.startswith(EQUATION):
            body = line[line.index(EQUATION) + len(EQUATION) :]
            if body.count("|") != 1:
                raise ParseError("an equation needs exactly one '|' between target and pattern", number, _column(line, EQUATION))
            target, pattern = body.split("|")
            bar = line.index("|")
            for token in pattern.split():
                if token != JOKER and not token.isidentifier():
                    raise ParseError(f"block name {token!r} is not an identifier", number, _column(line, token, bar))
            equations.append((target.split(), pattern.split()))
        else:
            raise ParseError(f"unrecognized line {stripped!r}", number, _column(line, stripped))
    if not equations:
        raise ParseError("instance has no equations")
    return System.from_tokens(equations, semantics=semantics or Semantics.NON_ERASING, deletion_budget=deletions)


def render_instance(system: System) -> str:
    lines = [f"{SEMANTICS} {system.semantics.value}"]
    if system.deletion_budget is not None:
        lines.append(f"{DELETIONS} {system.deletion_budget}")
    for equation in system.equations:
        lines.append(f"{EQUATION} {render_symbols(equation.target)} | {' '.join(str(_) for _ in equation.pattern)}")
    return "\n".join(lines) + "\n"


def parse_assignment(text: str) -> Assignment:
    assignment: Assignment = {}
    for number, line in _lines(text):
        if "=" not in line:
            raise ParseError("expected 'block = symbols'", number, 1)
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ParseError("missing block name", number, 1)
        if key in assignment:
            raise ParseError(f"block {key} assigned twice", number, _column(line, key))
        assignment[key] = symbols(value)
    return assignment


def render_assignment(assignment: Assignment, order: Optional[list[str]] = None) -> str:
    """One "block = symbols" line per block, in the given order (default: insertion order)."""
    keys = order if order is not None else list(assignment)
    return "".join(f"{key} = {render_symbols(assignment[key])}".rstrip() + "\n" for key in keys if key in assignment)


def _integers(line: str, number: int) -> list[int]:
    values = []
    for token in line.split():
        if not token.isdigit():
            raise ParseError(f"expected a non-negative integer, got {token!r}", number, _column(line, token))
        values.append(int(token))
    return values


def parse_graph(text: str) -> Graph:
    """
    Parse a graph file.

    Args:
        text (str): Header "n m [colors]", m edge lines, then the coloring when colors is given.

    Returns:
        Graph: the graph, with default labels v1..vn.
    """
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty graph file")
    number, header = lines[0]
    head = _integers(header, number)
    if len(head) not in (2, 3):
        raise ParseError("graph header must be 'n m' or 'n m colors'", number, 1)
    n, m = head[0], head[1]
    colors = head[2] if len(head) == 3 else None
    expected = 1 + m + (1 if colors is not None else 0)
    if len(lines) != expected:
        raise ParseError(f"expected {expected - 1} lines after the header, got {len(lines) - 1}", number, 1)

    edges = []
    for number, line in lines[1 : 1 + m]:
        pair = _integers(line, number)
        if len(pair) != 2:
            raise ParseError("an edge line holds two vertex indices", number, 1)
        edges.append((pair[0], pair[1]))

    coloring = None
    if colors is not None:
        number, line = lines[-1]
        coloring = tuple(_integers(line, number))
        if len(coloring) != n or any(not 1 <= c <= colors for c in coloring):
            raise ParseError(f"the color line needs {n} colors in 1..{colors}", number, 1)
    return Graph(n=n, edges=tuple(edges), coloring=coloring)


def render_graph(g: Graph) -> str:
    header = f"{g.n} {g.m}" if g.coloring is None else f"{g.n} {g.m} {max(g.coloring, default=0)}"
    lines = [header] + [f"{s} {t}" for s, t in g.edges]
    if g.coloring is not None:
        lines.append(" ".join(str(_) for _ in g.coloring))
    return "\n".join(lines) + "\n"
