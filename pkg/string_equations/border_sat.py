"""Polynomial solver for systems whose non-border blocks are all jokers, by reduction to 2SAT.

Every border block p gets boolean variables "p≤ℓ" (the value of p has length at most ℓ). Six
clause families tie the lengths to the targets; a satisfying valuation yields the lengths, the
targets' prefixes and suffixes yield the values, and middle jokers take what is left.
"""

import logging
from collections import defaultdict
from typing import Optional, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, model_validator

from string_equations.core import Assignment, SymbolString, System, classify, render_symbols, verify
from string_equations.errors import InternalInconsistency, MalformedSystem, NotBorderOnly, UnsupportedVariant
from string_equations.exact_solvers import SolveOutcome, Status


class LengthVar(BaseModel):
    """The proposition "the value of block has length at most bound"."""

    model_config = ConfigDict(frozen=True)

    block: str
    bound: int

    def __str__(self) -> str:
        return f"{self.block}≤{self.bound}"


Literal = tuple[LengthVar, bool]
Valuation = dict[LengthVar, bool]


class Clause(BaseModel):
    model_config = ConfigDict(frozen=True)

    literals: tuple[Literal, ...]
    family: int
    origin: str

    @model_validator(mode="after")
    def _one_or_two(self) -> "Clause":
        if not 1 <= len(self.literals) <= 2:
            raise MalformedSystem(f"2SAT clauses have one or two literals, got {len(self.literals)}")
        return self

    def __str__(self) -> str:
        return " ∨ ".join(f"{'' if positive else '¬'}{var}" for var, positive in self.literals)


class Formula2SAT(BaseModel):
    """
    Clauses over LengthVars. Clauses whose literals all simplified to false are kept apart in
    `contradictions`; a formula with any of them is unsatisfiable.
    """

    variables: list[LengthVar]
    clauses: list[Clause]
    contradictions: list[str] = []


class ValidLengthTable(BaseModel):
    """Per border block: valid lengths ℓ ≥ 1 and the string σ_ℓ every such length forces."""

    lengths: dict[str, dict[int, SymbolString]]

    def valid(self, block: str) -> list[int]:
        return sorted(self.lengths[block])


def _border_ends(system: System) -> tuple[dict[str, list[SymbolString]], dict[str, list[SymbolString]]]:
    if not classify(system).only_border_blocks:
        raise NotBorderOnly("a non-border position holds a block that occurs more than once")
    starts: dict[str, list[SymbolString]] = defaultdict(list)
    ends: dict[str, list[SymbolString]] = defaultdict(list)
    for equation in system.equations:
        starts[equation.pattern[0].key].append(equation.target)
        ends[equation.pattern[-1].key].append(equation.target)
    return starts, ends


def border_blocks(system: System) -> list[str]:
    """Blocks that start or end some equation, in first-occurrence order."""
    border = {e.pattern[0].key for e in system.equations} | {e.pattern[-1].key for e in system.equations}
    return [key for key in system.blocks() if key in border]


def compute_valid_lengths(system: System) -> ValidLengthTable:
    """
    Find, for every border block, the lengths on which all its prefix and suffix constraints agree.

    Args:
        system (System): A system with only border blocks.

    Returns:
        ValidLengthTable: valid lengths and the canonical string for each of them.
    """
    starts, ends = _border_ends(system)
    t = system.max_target_length()
    lengths: dict[str, dict[int, SymbolString]] = {}
    for block in border_blocks(system):
        lengths[block] = {}
        for ell in range(1, t + 1):
            pieces = {target[:ell] for target in starts[block] if ell <= len(target)}
            pieces |= {target[len(target) - ell :] for target in ends[block] if ell <= len(target)}
            fits = all(ell <= len(target) for target in starts[block] + ends[block])
            if fits and len(pieces) == 1:
                lengths[block][ell] = pieces.pop()
    return ValidLengthTable(lengths=lengths)


class _ClauseBuilder:
    """Emits clauses, folding bounds outside the variable range into constants."""

    def __init__(self, t: int):
        self.t = t
        self.clauses: list[Clause] = []
        self.contradictions: list[str] = []

    def at_most(self, block: str, bound: int) -> Union[Literal, bool]:
        if bound >= self.t:
            return True
        if bound < 0:
            return False
        return LengthVar(block=block, bound=bound), True

    @staticmethod
    def negate(literal: Union[Literal, bool]) -> Union[Literal, bool]:
        if isinstance(literal, bool):
            return not literal
        var, positive = literal
        return var, not positive

    def add(self, family: int, origin: str, *literals: Union[Literal, bool]) -> None:
        if any(_ is True for _ in literals):
            return
        kept = tuple(_ for _ in literals if not isinstance(_, bool))
        if not kept:
            self.contradictions.append(f"family {family} ({origin}) is constant false")
            return
        if len(kept) == 2 and kept[0] == kept[1]:
            kept = kept[:1]
        self.clauses.append(Clause(literals=kept, family=family, origin=origin))


def build_formula(system: System, table: ValidLengthTable) -> Formula2SAT:
    """
    Build the 2SAT formula whose satisfiability is equivalent to that of the system.

    Args:
        system (System): A system with only border blocks.
        table (ValidLengthTable): Output of compute_valid_lengths for the same system.

    Returns:
        Formula2SAT: the clauses of families 1-6, tagged with family and origin.
    """
    _border_ends(system)
    t = system.max_target_length()
    blocks = border_blocks(system)
    builder = _ClauseBuilder(t)
    at_most, negate = builder.at_most, builder.negate

    for p in blocks:
        builder.add(1, p, negate(at_most(p, 0)))
    for p in blocks:
        for ell in range(0, t + 1):
            for ell2 in range(ell + 1, t + 1):
                builder.add(2, p, negate(at_most(p, ell)), at_most(p, ell2))
    for p in blocks:
        for ell in range(1, t + 1):
            if ell not in table.lengths[p]:
                builder.add(3, p, negate(at_most(p, ell)), at_most(p, ell - 1))
    for index, equation in enumerate(system.equations):
        size, length = len(equation.pattern), len(equation.target)
        p, q = equation.pattern[0].key, equation.pattern[-1].key
        origin = f"equation {index}"
        if size == 1:
            builder.add(4, origin, negate(at_most(p, length - 1)))
        if size == 2:
            for ell in range(0, length + 1):
                builder.add(5, origin, negate(at_most(p, ell)), negate(at_most(q, length - 1 - ell)))
        if size >= 2:
            for ell in range(0, length + 1):
                builder.add(6, origin, at_most(p, ell), at_most(q, length - size - ell + 1))

    variables = [LengthVar(block=p, bound=ell) for p in blocks for ell in range(0, t)]
    logging.debug(f"build_formula: {len(variables)} variables, {len(builder.clauses)} clauses")
    return Formula2SAT(variables=variables, clauses=builder.clauses, contradictions=builder.contradictions)


def two_sat(formula: Formula2SAT) -> Optional[Valuation]:
    """
    Decide a 2SAT formula on its implication graph.

    A variable is true iff its positive literal's component comes after its negation's in a
    topological order of the condensation.

    Args:
        formula (Formula2SAT): The formula.

    Returns:
        Optional[Valuation]: a satisfying valuation over all variables, or None.
    """
    if formula.contradictions:
        return None
    graph = nx.DiGraph()
    for var in formula.variables:
        graph.add_node((var, True))
        graph.add_node((var, False))
    for clause in formula.clauses:
        if len(clause.literals) == 1:
            (var, positive) = clause.literals[0]
            graph.add_edge((var, not positive), (var, positive))
        else:
            (a, pa), (b, pb) = clause.literals
            graph.add_edge((a, not pa), (b, pb))
            graph.add_edge((b, not pb), (a, pa))

    components = list(nx.strongly_connected_components(graph))
    condensed = nx.condensation(graph, scc=components)
    component_of = condensed.graph["mapping"]
    order = {component: position for position, component in enumerate(nx.topological_sort(condensed))}

    valuation: Valuation = {}
    for var in formula.variables:
        positive, negative = component_of[(var, True)], component_of[(var, False)]
        if positive == negative:
            return None
        valuation[var] = order[positive] > order[negative]
    return valuation


def render_formula(formula: Formula2SAT) -> str:
    """One clause per line, tagged with its family and origin."""
    lines = [f"c {len(formula.variables)} variables {len(formula.clauses)} clauses"]
    lines += [f"c contradiction: {_}" for _ in formula.contradictions]
    lines += [f"{clause}  # family {clause.family}, {clause.origin}" for clause in formula.clauses]
    return "\n".join(lines) + "\n"


def solve_border(system: System) -> SolveOutcome:
    """
    Solve a non-erasing system with only border blocks in polynomial time.

    Args:
        system (System): Only border blocks, non-erasing, no deletion budget.

    Returns:
        SolveOutcome: SAT with the extracted and verified witness, or UNSAT.
    """
    if system.allow_empty:
        raise UnsupportedVariant("the border solver handles non-erasing semantics only")
    if system.deletion_budget:
        raise UnsupportedVariant("the border solver does not handle deletions")
    table = compute_valid_lengths(system)
    formula = build_formula(system, table)
    valuation = two_sat(formula)
    branches = len(formula.clauses)
    if valuation is None:
        logging.debug("solve_border: formula unsatisfiable")
        return SolveOutcome(status=Status.UNSAT, branches=branches, solver="border-sat")

    t = system.max_target_length()
    assignment: Assignment = {}
    for block in border_blocks(system):
        bounds = [var.bound for var, value in valuation.items() if var.block == block and value]
        assert bounds == list(range(min(bounds, default=t), t)), f"valuation of {block} is not upward closed"
        ell = min(bounds, default=t)
        if ell not in table.lengths[block]:
            raise InternalInconsistency(f"extracted length {ell} is not valid for block {block}")
        assignment[block] = table.lengths[block][ell]

    for index, equation in enumerate(system.equations):
        middle = equation.pattern[1:-1]
        if not middle:
            continue
        target = equation.target
        start = len(assignment[equation.pattern[0].key])
        end = len(target) - len(assignment[equation.pattern[-1].key])
        if end - start < len(middle):
            raise InternalInconsistency(f"equation {index} leaves {end - start} symbols for {len(middle)} jokers")
        for offset, ref in enumerate(middle):
            last = offset == len(middle) - 1
            assignment[ref.key] = target[start + offset : end] if last else target[start + offset : start + offset + 1]

    verdict = verify(system, assignment)
    if not verdict:
        raise InternalInconsistency(f"border extraction failed verification: {verdict.reason}")
    logging.debug(f"solve_border: SAT, {', '.join(f'{k}={render_symbols(v)}' for k, v in assignment.items())}")
    return SolveOutcome(status=Status.SAT, assignment=assignment, branches=branches, solver="border-sat")
