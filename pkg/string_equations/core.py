"""Domain model for systems of string equations.

A system is a list of equations ``T ≡ X1 X2 ... Xc`` where ``T`` is a string of symbols and the
``Xi`` are block variables. An assignment maps every block to a string; it satisfies the system
when replacing each pattern by the concatenation of its blocks' values yields the target.
"""

import sys
from collections import Counter
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from string_equations.errors import DuplicateJoker, EmptyPattern, EmptyTarget, MalformedSystem, MissingBlock

Symbol = str
SymbolString = tuple[Symbol, ...]
Assignment = dict[str, SymbolString]

JOKER = "*"


def symbol(label: str) -> Symbol:
    """Intern a symbol label, so equal labels share one object."""
    return sys.intern(label)


def symbols(text: Union[str, Iterable[str]]) -> SymbolString:
    """
    Build a SymbolString.

    Args:
        text: Either whitespace separated tokens ("a b y_0") or an iterable of labels.

    Returns:
        SymbolString: the interned symbols, in order.
    """
    tokens = text.split() if isinstance(text, str) else text
    return tuple(symbol(_) for _ in tokens)


def render_symbols(s: SymbolString) -> str:
    return " ".join(s)


class Semantics(str, Enum):
    NON_ERASING = "nonerasing"
    ALLOW_EMPTY = "allowempty"


class BlockRef(BaseModel):
    """One position of a pattern: a named block or a joker (a block occurring once)."""

    model_config = ConfigDict(frozen=True)

    name: str
    joker: bool = False

    @property
    def key(self) -> str:
        """The assignment key of this block."""
        return self.name

    def __str__(self) -> str:
        return JOKER if self.joker else self.name


def named(name: str) -> BlockRef:
    return BlockRef(name=name)


def joker(number: int) -> BlockRef:
    return BlockRef(name=f"{JOKER}{number}", joker=True)


class Equation(BaseModel):
    model_config = ConfigDict(frozen=True)

    target: SymbolString
    pattern: tuple[BlockRef, ...]

    @model_validator(mode="after")
    def _non_empty(self) -> "Equation":
        if not self.target:
            raise EmptyTarget("target string must be non-empty")
        if not self.pattern:
            raise EmptyPattern("pattern must contain at least one block")
        return self

    @property
    def keys(self) -> tuple[str, ...]:
        return tuple(_.key for _ in self.pattern)


class System(BaseModel):
    """A set of equations sharing one symbol table, plus semantics and an optional deletion budget."""

    model_config = ConfigDict(frozen=True)

    equations: tuple[Equation, ...]
    semantics: Semantics = Semantics.NON_ERASING
    deletion_budget: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _jokers_unique(self) -> "System":
        if not self.equations:
            raise MalformedSystem("a system needs at least one equation")
        seen: set[str] = set()
        for equation in self.equations:
            for ref in equation.pattern:
                if not ref.joker:
                    if ref.name.startswith(JOKER):
                        raise MalformedSystem(f"named block {ref.name!r} uses the joker prefix")
                    continue
                if ref.name in seen:
                    raise DuplicateJoker(f"joker {ref.name} occurs more than once")
                seen.add(ref.name)
        return self

    @classmethod
    def from_tokens(
        cls,
        equations: Iterable[tuple[Sequence[str], Sequence[str]]],
        semantics: Semantics = Semantics.NON_ERASING,
        deletion_budget: Optional[int] = None,
    ) -> "System":
        """
        Build a system from token lists, numbering jokers left to right over the whole system.

        Args:
            equations: (target tokens, pattern tokens) pairs; the pattern token "*" is a fresh joker.
            semantics: NonErasing (default) or AllowEmpty.
            deletion_budget: Optional deletion budget d.

        Returns:
            System: the validated system.
        """
        built = []
        jokers = 0
        for target, pattern in equations:
            refs = []
            for token in pattern:
                if token == JOKER:
                    jokers += 1
                    refs.append(joker(jokers))
                else:
                    refs.append(named(token))
            built.append(Equation(target=symbols(target), pattern=tuple(refs)))
        return cls(equations=tuple(built), semantics=semantics, deletion_budget=deletion_budget)

    @property
    def targets(self) -> list[SymbolString]:
        return [_.target for _ in self.equations]

    @property
    def allow_empty(self) -> bool:
        return self.semantics == Semantics.ALLOW_EMPTY

    def blocks(self) -> list[str]:
        """Block keys (named and joker) in order of first occurrence."""
        ordered: dict[str, None] = {}
        for equation in self.equations:
            for ref in equation.pattern:
                ordered.setdefault(ref.key, None)
        return list(ordered)

    def occurrences(self) -> Counter[str]:
        return Counter(ref.key for equation in self.equations for ref in equation.pattern)

    def is_joker(self, ref: BlockRef, occurrences: Optional[Counter[str]] = None) -> bool:
        """A joker ref, or a named block that occurs exactly once in the system."""
        if ref.joker:
            return True
        occurrences = occurrences if occurrences is not None else self.occurrences()
        return occurrences[ref.key] == 1

    def max_target_length(self) -> int:
        return max(len(_.target) for _ in self.equations)

    def alphabet(self) -> list[Symbol]:
        ordered: dict[Symbol, None] = {}
        for equation in self.equations:
            for _ in equation.target:
                ordered.setdefault(_, None)
        return list(ordered)

    def with_semantics(self, semantics: Semantics) -> "System":
        return System(equations=self.equations, semantics=semantics, deletion_budget=self.deletion_budget)


class SystemStats(BaseModel):
    """The parameters k, r, c, t plus structural flags of a system."""

    k: int
    r: int
    c: int
    t: int
    duplicate_free: bool
    only_border_blocks: bool
    unique_target: bool


def classify(system: System) -> SystemStats:
    """
    Compute the parameters and structural flags of a system.

    Jokers count toward k, one per occurrence.

    Args:
        system (System): The system to classify.

    Returns:
        SystemStats: exact k, r, c, t and the duplicate-free / only-border-blocks / unique-target flags.
    """
    occurrences = system.occurrences()
    k = len(occurrences)
    r = len(system.equations)
    c = max(len(_.pattern) for _ in system.equations)
    t = system.max_target_length()

    duplicate_free = True
    only_border_blocks = True
    for equation in system.equations:
        named_keys = [ref.key for ref in equation.pattern if not ref.joker]
        if len(named_keys) != len(set(named_keys)):
            duplicate_free = False
        for ref in equation.pattern[1:-1]:
            if not system.is_joker(ref, occurrences):
                only_border_blocks = False

    unique_target = len({_.target for _ in system.equations}) == 1
    stats = SystemStats(
        k=k,
        r=r,
        c=c,
        t=t,
        duplicate_free=duplicate_free,
        only_border_blocks=only_border_blocks,
        unique_target=unique_target,
    )
    assert stats.k <= stats.r * stats.c, f"k must not exceed r*c: {stats}"
    return stats


def expand(assignment: Assignment, pattern: Sequence[BlockRef]) -> SymbolString:
    """Concatenate the values of the pattern's blocks, in pattern order."""
    expanded: list[Symbol] = []
    for ref in pattern:
        if ref.key not in assignment:
            raise MissingBlock(f"no value assigned to block {ref.key}")
        expanded.extend(assignment[ref.key])
    return tuple(expanded)


class Verdict(BaseModel):
    """Outcome of a verification: truthy iff the assignment is accepted."""

    ok: bool
    reason: Optional[str] = None
    equation: Optional[int] = None
    position: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def _first_mismatch(a: SymbolString, b: SymbolString) -> int:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return min(len(a), len(b))


def _check_entries(system: System, assignment: Assignment) -> Optional[Verdict]:
    for index, equation in enumerate(system.equations):
        for ref in equation.pattern:
            value = assignment.get(ref.key)
            if value is None:
                return Verdict(ok=False, reason=f"block {ref.key} has no value", equation=index)
            if not value and not system.allow_empty:
                return Verdict(ok=False, reason=f"block {ref.key} is empty under non-erasing semantics", equation=index)
    return None


def verify(system: System, assignment: Assignment) -> Verdict:
    """
    Check that an assignment satisfies every equation exactly.

    Args:
        system (System): The system.
        assignment (Assignment): Values for every block and joker.

    Returns:
        Verdict: ok, or the first failing equation and mismatching target position.
    """
    failed = _check_entries(system, assignment)
    if failed:
        return failed
    for index, equation in enumerate(system.equations):
        expanded = expand(assignment, equation.pattern)
        if expanded != equation.target:
            position = _first_mismatch(expanded, equation.target)
            return Verdict(ok=False, reason="expansion differs from target", equation=index, position=position)
    return Verdict(ok=True)


def verify_deletions(system: System, assignment: Assignment, d: int) -> Verdict:
    """
    Check that deleting at most d target letters in total makes the assignment satisfying.

    Each expansion must be a subsequence of its (non-empty) target; the deletions spent are the
    total length difference.

    Args:
        system (System): The system.
        assignment (Assignment): Values for every block and joker.
        d (int): The deletion budget.

    Returns:
        Verdict: ok, or the reason for rejection.
    """
    failed = _check_entries(system, assignment)
    if failed:
        return failed
    spent = 0
    for index, equation in enumerate(system.equations):
        expanded = expand(assignment, equation.pattern)
        if not expanded:
            return Verdict(ok=False, reason="reduced target would be empty", equation=index)
        if not is_subsequence(expanded, equation.target):
            return Verdict(ok=False, reason="expansion is not a subsequence of the target", equation=index)
        spent += len(equation.target) - len(expanded)
    if spent > d:
        return Verdict(ok=False, reason=f"needs {spent} deletions, budget is {d}")
    return Verdict(ok=True)


def is_subsequence(s: Sequence[Symbol], t: Sequence[Symbol]) -> bool:
    """True iff s embeds into t preserving order (greedy, leftmost)."""
    remaining = iter(t)
    return all(_ in remaining for _ in s)


class SymbolCodec:
    """
    Maps each symbol of an alphabet to one code point, so solvers can work on native str.

    Args:
        alphabet (Iterable[Symbol]): The symbols to encode; order fixes the code points.
    """

    BASE = 0x10000

    def __init__(self, alphabet: Iterable[Symbol]):
        self._to_char: dict[Symbol, str] = {}
        self._to_symbol: dict[str, Symbol] = {}
        for _ in alphabet:
            self.add(_)

    @classmethod
    def for_system(cls, system: System) -> "SymbolCodec":
        return cls(system.alphabet())

    def add(self, s: Symbol) -> str:
        if s not in self._to_char:
            char = chr(self.BASE + len(self._to_char))
            self._to_char[s] = char
            self._to_symbol[char] = s
        return self._to_char[s]

    def encode(self, s: Sequence[Symbol]) -> str:
        return "".join(self._to_char[_] if _ in self._to_char else self.add(_) for _ in s)

    def decode(self, text: str) -> SymbolString:
        return tuple(self._to_symbol[_] for _ in text)
