"""Starting-point enumeration for systems with deletions, on top of a multi-string LCS.

Given where every pattern position starts in its target, each block only has to be a common
subsequence of the regions it covers; a longest one never costs more deletions than any other
choice. Enumerating all starting points therefore decides the problem in O(t^(rc)) branches.
"""

import itertools
import logging
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from string_equations.core import Assignment, Symbol, SymbolCodec, SymbolString, System, verify_deletions
from string_equations.exact_solvers import DEFAULT_BRANCH_CAP, BranchCounter, SolveOutcome, Status

StartingPointChoice = tuple[tuple[int, ...], ...]
FactorBundle = dict[str, list[str]]


def _lcs_table(strings: tuple[str, ...]) -> Callable[[tuple[int, ...]], int]:
    """Memoized length of the LCS of the suffixes starting at the given indices."""

    @lru_cache(maxsize=None)
    def length(indices: tuple[int, ...]) -> int:
        if any(i == len(s) for i, s in zip(indices, strings)):
            return 0
        first = strings[0][indices[0]]
        if all(s[i] == first for i, s in zip(indices, strings)):
            return 1 + length(tuple(i + 1 for i in indices))
        return max(length(indices[:k] + (indices[k] + 1,) + indices[k + 1 :]) for k in range(len(strings)))

    return length


def _multi_lcs_encoded(strings: tuple[str, ...]) -> str:
    length = _lcs_table(strings)
    indices = tuple(0 for _ in strings)
    remaining = length(indices)
    picked = []
    while remaining:
        # leftmost position in the first string that still completes a longest common subsequence
        for p in range(indices[0], len(strings[0])):
            char = strings[0][p]
            following = [s.find(char, i) for s, i in zip(strings[1:], indices[1:])]
            if any(f < 0 for f in following):
                continue
            after = (p + 1,) + tuple(f + 1 for f in following)
            if 1 + length(after) == remaining:
                picked.append(char)
                indices = after
                remaining -= 1
                break
        else:
            raise AssertionError(f"LCS backtracking lost track at {indices}")
    return "".join(picked)


def multi_lcs(strings: Sequence[SymbolString]) -> SymbolString:
    """
    A longest common subsequence of all strings.

    Among all longest ones the result is the one whose embedding into the first string is
    leftmost: every next symbol is taken at the earliest position of the first string that still
    allows a longest completion.

    Args:
        strings: A non-empty list of SymbolStrings.

    Returns:
        SymbolString: the LCS (possibly empty).
    """
    assert len(strings) > 0, "multi_lcs needs at least one string"
    alphabet: dict[Symbol, None] = {}
    for s in strings:
        alphabet.update(dict.fromkeys(s))
    codec = SymbolCodec(alphabet)
    return codec.decode(_multi_lcs_encoded(tuple(codec.encode(s) for s in strings)))


def starting_points(system: System, encoded: list[str]) -> Iterator[StartingPointChoice]:
    """
    All non-decreasing 1-based starting points per equation, in lexicographic order.

    Under AllowEmpty a block may also start at |T|+1, so trailing blocks can take the empty region.
    """
    end = 2 if system.allow_empty else 1
    per_equation = [
        itertools.combinations_with_replacement(range(1, len(target) + end), len(equation.pattern))
        for target, equation in zip(encoded, system.equations)
    ]
    return itertools.product(*[list(_) for _ in per_equation])


def factor_bundle(system: System, encoded: list[str], choice: StartingPointChoice) -> FactorBundle:
    """The regions covered by every block under a starting point choice."""
    bundle: FactorBundle = {}
    for target, equation, starts in zip(encoded, system.equations, choice):
        bounds = list(starts) + [len(target) + 1]
        for position, ref in enumerate(equation.pattern):
            region = target[bounds[position] - 1 : bounds[position + 1] - 1]
            bundle.setdefault(ref.key, []).append(region)
    occurrences = len(system.equations) * max(len(_.pattern) for _ in system.equations)
    assert all(len(regions) <= occurrences for regions in bundle.values()), "h must not exceed r*c"
    return bundle


def solve_deletions_lcs(system: System, d: int, branch_cap: int = DEFAULT_BRANCH_CAP) -> SolveOutcome:
    """
    Decide a system with deletions by enumerating starting points of all pattern positions.

    For each choice every block gets the LCS of its regions (a joker gets its single region) and
    the resulting assignment is checked with verify_deletions.

    Args:
        system (System): The system.
        d (int): Total number of target letters that may be deleted.
        branch_cap (int): Maximum number of branches before BudgetExceeded is raised.

    Returns:
        SolveOutcome: SAT with the first accepted choice's assignment, or UNSAT.
    """
    assert d >= 0, f"deletion budget must be non-negative, got {d}"
    counter = BranchCounter(branch_cap)
    codec = SymbolCodec.for_system(system)
    encoded = [codec.encode(t) for t in system.targets]
    lcs_cache: dict[tuple[str, ...], str] = {}
    for choice in starting_points(system, encoded):
        counter.tick()
        bundle = factor_bundle(system, encoded, choice)
        values = {}
        for key, regions in bundle.items():
            regions_key = tuple(regions)
            if regions_key not in lcs_cache:
                lcs_cache[regions_key] = regions[0] if len(regions) == 1 else _multi_lcs_encoded(regions_key)
            values[key] = lcs_cache[regions_key]
        if not system.allow_empty and not all(values.values()):
            continue
        assignment: Assignment = {key: codec.decode(value) for key, value in values.items()}
        if verify_deletions(system, assignment, d):
            logging.debug(f"solve_deletions_lcs: SAT at starting points {choice} after {counter.branches} branches")
            return SolveOutcome(status=Status.SAT, assignment=assignment, branches=counter.branches, solver="lcs-del")
    logging.debug(f"solve_deletions_lcs: UNSAT after {counter.branches} branches")
    return SolveOutcome(status=Status.UNSAT, branches=counter.branches, solver="lcs-del")
