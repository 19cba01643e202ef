"""Brute-force decision procedures: exact solving and deletion-tolerant solving.

These are the reference oracles the other solvers are checked against. Both return the first
satisfying assignment in a fixed enumeration order, so witnesses are stable across runs.
"""

import itertools
import logging
from enum import Enum
from typing import Optional

from pydantic import BaseModel

from string_equations.core import Assignment, SymbolCodec, System, SymbolString, verify, verify_deletions
from string_equations.errors import BudgetExceeded, InternalInconsistency, UnsupportedVariant

DEFAULT_BRANCH_CAP = 10**8


class Status(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


class SolveOutcome(BaseModel):
    """Result of a solver run: status, witness (when SAT) and the number of branches explored."""

    status: Status
    assignment: Optional[dict[str, SymbolString]] = None
    branches: int = 0
    solver: str = "brute"

    @property
    def sat(self) -> bool:
        return self.status == Status.SAT


class BranchCounter:
    """Counts explored branches and enforces the cap."""

    def __init__(self, cap: int = DEFAULT_BRANCH_CAP):
        self.cap = cap
        self.branches = 0

    def tick(self) -> None:
        self.branches += 1
        if self.branches > self.cap:
            logging.warning(f"Branch cap {self.cap} exceeded")
            raise BudgetExceeded(self.branches, self.cap)


class _Search:
    """
    Depth-first search over block values for a system whose targets are encoded as str.

    Blocks are fixed in first-occurrence order. A block's candidates are the substrings T[i:j] of
    the first target containing it, i ascending then j ascending (the empty string first when
    empty blocks are allowed), restricted to strings that occur in every target containing the
    block. Pruning only discards partial assignments that cannot be completed, so the first
    solution found is the first one in that enumeration order.
    """

    def __init__(
        self, targets: list[str], patterns: list[tuple[str, ...]], order: list[str], allow_empty: bool, counter: BranchCounter
    ):
        self.targets = targets
        self.patterns = patterns
        self.order = order
        self.min_len = 0 if allow_empty else 1
        self.counter = counter
        self.assignment: dict[str, str] = {}
        self.occurrences: dict[str, list[tuple[int, int]]] = {key: [] for key in order}
        for e, pattern in enumerate(patterns):
            for p, key in enumerate(pattern):
                self.occurrences[key].append((e, p))
        self.containing = {key: list(dict.fromkeys(e for e, _ in occ)) for key, occ in self.occurrences.items()}
        self.rank = {key: self._candidates(key) for key in order}

    def _candidates(self, key: str) -> dict[str, int]:
        first, *others = self.containing[key]
        target = self.targets[first]
        ordered: dict[str, int] = {}
        if self.min_len == 0:
            ordered[""] = 0
        for i in range(len(target)):
            for j in range(i + 1, len(target) + 1):
                value = target[i:j]
                if value not in ordered and all(value in self.targets[e] for e in others):
                    ordered[value] = len(ordered)
        return ordered

    def _expansion(self, keys: tuple[str, ...]) -> Optional[str]:
        values = [self.assignment.get(k) for k in keys]
        if any(v is None for v in values):
            return None
        return "".join(values)  # type: ignore[arg-type]

    def _options(self, key: str) -> list[str]:
        rank = self.rank[key]
        for e, p in self.occurrences[key]:
            target = self.targets[e]
            pattern = self.patterns[e]
            before = self._expansion(pattern[:p])
            if before is not None and target.startswith(before):
                offset = len(before)
                values = {target[offset : offset + n] for n in range(self.min_len, len(target) - offset + 1)}
                return sorted((v for v in values if v in rank), key=rank.__getitem__)
            after = self._expansion(pattern[p + 1 :])
            if after is not None and target.endswith(after):
                end = len(target) - len(after)
                values = {target[end - n : end] for n in range(self.min_len, end + 1)}
                return sorted((v for v in values if v in rank), key=rank.__getitem__)
        return list(rank)

    def _consistent(self, e: int) -> bool:
        target = self.targets[e]
        values = [self.assignment.get(k) for k in self.patterns[e]]
        n = len(values)

        i, offset = 0, 0
        while i < n and values[i] is not None:
            value = values[i]
            if not target.startswith(value, offset):  # type: ignore[arg-type]
                return False
            offset += len(value)  # type: ignore[arg-type]
            i += 1
        if i == n:
            return offset == len(target)

        j, end = n - 1, len(target)
        while values[j] is not None:
            value = values[j]
            start = end - len(value)  # type: ignore[arg-type]
            if start < offset or target[start:end] != value:
                return False
            end = start
            j -= 1

        # runs of fixed blocks between the anchored ends, placed leftmost
        position = offset
        q = i
        while q <= j:
            if values[q] is None:
                position += self.min_len
                q += 1
                continue
            run = []
            while q <= j and values[q] is not None:
                run.append(values[q])
                q += 1
            found = target.find("".join(run), position, end)  # type: ignore[arg-type]
            if found < 0:
                return False
            position = found + sum(len(_) for _ in run)  # type: ignore[arg-type]
        return position <= end

    def _dfs(self, depth: int) -> bool:
        if depth == len(self.order):
            return True
        key = self.order[depth]
        for value in self._options(key):
            self.counter.tick()
            self.assignment[key] = value
            if all(self._consistent(e) for e in self.containing[key]) and self._dfs(depth + 1):
                return True
            del self.assignment[key]
        return False

    def run(self) -> Optional[dict[str, str]]:
        return dict(self.assignment) if self._dfs(0) else None


def _search(system: System, codec: SymbolCodec, targets: list[str], counter: BranchCounter) -> Optional[Assignment]:
    patterns = [e.keys for e in system.equations]
    found = _Search(targets, patterns, system.blocks(), system.allow_empty, counter).run()
    if found is None:
        return None
    return {key: codec.decode(value) for key, value in found.items()}


def solve_xp(system: System, branch_cap: int = DEFAULT_BRANCH_CAP) -> SolveOutcome:
    """
    Decide an exact system by enumerating substrings of the targets for every block.

    Args:
        system (System): The system; its deletion budget must be absent or zero.
        branch_cap (int): Maximum number of branches before BudgetExceeded is raised.

    Returns:
        SolveOutcome: SAT with the first witness in enumeration order, or UNSAT.
    """
    if system.deletion_budget:
        raise UnsupportedVariant("solve_xp does not handle deletions, use solve_deletions_xp")
    counter = BranchCounter(branch_cap)
    codec = SymbolCodec.for_system(system)
    logging.debug(f"solve_xp: {len(system.equations)} equations, {len(system.blocks())} blocks, {system.semantics.value}")
    assignment = _search(system, codec, [codec.encode(t) for t in system.targets], counter)
    logging.debug(f"solve_xp: {'SAT' if assignment else 'UNSAT'} after {counter.branches} branches")
    if assignment is None:
        return SolveOutcome(status=Status.UNSAT, branches=counter.branches, solver="brute")
    verdict = verify(system, assignment)
    if not verdict:
        raise InternalInconsistency(f"solve_xp produced an invalid witness: {verdict.reason}")
    return SolveOutcome(status=Status.SAT, assignment=assignment, branches=counter.branches, solver="brute")


def solve_deletions_xp(system: System, d: int, branch_cap: int = DEFAULT_BRANCH_CAP) -> SolveOutcome:
    """
    Decide a system with deletions by enumerating deleted target positions.

    Deletion counts 0..d are tried in order and, for each count, position sets in lexicographic
    (equation, position) order. Reductions that empty a target are skipped; reductions that
    produce targets already tried are not searched again.

    Args:
        system (System): The system.
        d (int): Total number of target letters that may be deleted.
        branch_cap (int): Maximum number of branches before BudgetExceeded is raised.

    Returns:
        SolveOutcome: SAT with the first witness found, or UNSAT.
    """
    assert d >= 0, f"deletion budget must be non-negative, got {d}"
    counter = BranchCounter(branch_cap)
    codec = SymbolCodec.for_system(system)
    encoded = [codec.encode(t) for t in system.targets]
    positions = [(e, p) for e, target in enumerate(encoded) for p in range(len(target))]
    tried: set[tuple[str, ...]] = set()
    skipped = 0
    for count in range(d + 1):
        for dropped in itertools.combinations(positions, count):
            counter.tick()
            reduced = list(encoded)
            for e, p in reversed(dropped):
                reduced[e] = reduced[e][:p] + reduced[e][p + 1 :]
            if not all(reduced):
                skipped += 1
                continue
            if tuple(reduced) in tried:
                continue
            tried.add(tuple(reduced))
            assignment = _search(system, codec, reduced, counter)
            if assignment is None:
                continue
            verdict = verify_deletions(system, assignment, d)
            if not verdict:
                raise InternalInconsistency(f"solve_deletions_xp produced an invalid witness: {verdict.reason}")
            logging.debug(f"solve_deletions_xp: SAT with {count} deletions after {counter.branches} branches")
            return SolveOutcome(status=Status.SAT, assignment=assignment, branches=counter.branches, solver="brute")
    logging.debug(f"solve_deletions_xp: UNSAT after {counter.branches} branches, {skipped} emptying reductions skipped")
    return SolveOutcome(status=Status.UNSAT, branches=counter.branches, solver="brute")
