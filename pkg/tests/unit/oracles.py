"""Exhaustive reference procedures, independent of the solvers under test."""

import itertools
from typing import Iterator, Optional, Sequence

from string_equations.core import Assignment, Equation, SymbolString, System
from string_equations.reductions import ReductionOutput


def _splits(target: SymbolString, parts: int, allow_empty: bool) -> Iterator[list[SymbolString]]:
    n = len(target)
    cuts = itertools.combinations_with_replacement(range(n + 1), parts - 1) if allow_empty else itertools.combinations(range(1, n), parts - 1)
    for inner in cuts:
        bounds = (0,) + tuple(inner) + (n,)
        yield [target[bounds[i] : bounds[i + 1]] for i in range(parts)]


def split_oracle(system: System, targets: Optional[Sequence[SymbolString]] = None) -> Optional[Assignment]:
    """Try every split of every target; return the first consistent assignment."""
    targets = targets if targets is not None else system.targets
    per_equation = [list(_splits(t, len(e.pattern), system.allow_empty)) for t, e in zip(targets, system.equations)]
    for choice in itertools.product(*per_equation):
        assignment: Assignment = {}
        consistent = True
        for equation, pieces in zip(system.equations, choice):
            for ref, piece in zip(equation.pattern, pieces):
                if assignment.setdefault(ref.key, piece) != piece:
                    consistent = False
                    break
            if not consistent:
                break
        if consistent:
            return assignment
    return None


def deletion_oracle(system: System, d: int) -> bool:
    """Satisfiable after deleting at most d target letters, none of the targets emptied."""
    positions = [(e, p) for e, t in enumerate(system.targets) for p in range(len(t))]
    for count in range(d + 1):
        for dropped in itertools.combinations(positions, count):
            reduced = [tuple(s for p, s in enumerate(t) if (e, p) not in dropped) for e, t in enumerate(system.targets)]
            if all(reduced) and split_oracle(system, reduced) is not None:
                return True
    return False


def _embeds(s: Sequence[str], t: Sequence[str]) -> bool:
    position = 0
    for symbol in s:
        while position < len(t) and t[position] != symbol:
            position += 1
        if position == len(t):
            return False
        position += 1
    return True


def exhaustive_lcs_length(strings: Sequence[SymbolString]) -> int:
    """Longest subsequence of the shortest string that embeds into all others."""
    shortest = min(strings, key=len)
    for length in range(len(shortest), -1, -1):
        for indices in itertools.combinations(range(len(shortest)), length):
            candidate = [shortest[i] for i in indices]
            if all(_embeds(candidate, s) for s in strings):
                return length
    return 0


def lcs_length_dp(a: SymbolString, b: SymbolString) -> int:
    """Textbook two-string LCS table."""
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a)):
        for j in range(len(b)):
            table[i + 1][j + 1] = table[i][j] + 1 if a[i] == b[j] else max(table[i][j + 1], table[i + 1][j])
    return table[len(a)][len(b)]


def is_clique(adjacent: set[tuple[int, int]], vertices: Sequence[int]) -> bool:
    return all((min(u, v), max(u, v)) in adjacent for u, v in itertools.combinations(vertices, 2))


def all_graphs(n: int) -> Iterator[list[tuple[int, int]]]:
    """Every edge set on vertices 1..n."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(2 ** len(pairs)):
        yield [pair for bit, pair in enumerate(pairs) if mask >> bit & 1]


def _find(target: SymbolString, run: SymbolString, start: int) -> int:
    for position in range(start, len(target) - len(run) + 1):
        if target[position : position + len(run)] == run:
            return position
    raise AssertionError(f"{run} does not occur in {target} from position {start}")


def fill_gaps(equation: Equation, known: Assignment) -> Assignment:
    """
    Complete an assignment whose unknown blocks are never adjacent in the pattern.

    Each maximal run of known blocks is placed at its leftmost occurrence; the unknown block in
    between takes whatever lies between two placed runs.
    """
    values = dict(known)
    keys = [ref.key for ref in equation.pattern]
    target = equation.target
    position, gap, i = 0, None, 0
    while i < len(keys):
        if keys[i] not in known:
            assert gap is None, f"unknown blocks {gap} and {keys[i]} are adjacent"
            gap, i = keys[i], i + 1
            continue
        run: list[str] = []
        while i < len(keys) and keys[i] in known:
            run.extend(known[keys[i]])
            i += 1
        start = _find(target, tuple(run), position)
        if gap is None:
            assert start == position, f"run {run} does not continue at position {position}"
        else:
            values[gap], gap = target[position:start], None
        position = start + len(run)
    if gap is not None:
        values[gap] = target[position:]
    return values


def two_eq_witness(output: ReductionOutput, clique: Sequence[int]) -> Assignment:
    """The intended assignment of a two-equation clique instance for a sorted κ-clique."""
    labels = [output.graph.label(v) for v in clique]
    known: Assignment = {}
    for key, role in output.decode_map.items():
        kind = role.split(":")
        if kind[0] == "start":
            known[key] = ("z",)
        elif kind[0] in ("vertex", "mirror"):
            known[key] = (labels[int(kind[1]) - 1],)
        elif kind[0] == "gadget":
            known[key] = (f"φ{key[1:]}",) if key.startswith("F") else ("γ",)
    return fill_gaps(output.system.equations[0], known)
