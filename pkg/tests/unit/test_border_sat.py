import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from string_equations.border_sat import (
    Clause,
    Formula2SAT,
    LengthVar,
    build_formula,
    compute_valid_lengths,
    render_formula,
    solve_border,
    two_sat,
)
from string_equations.core import Semantics, System, symbols, verify
from string_equations.errors import MalformedSystem, NotBorderOnly, UnsupportedVariant
from string_equations.exact_solvers import solve_xp


def test_valid_lengths_common_prefix():
    system = System.from_tokens([("a b c".split(), ["A", "*"]), ("a b d".split(), ["A", "*"])])
    table = compute_valid_lengths(system)
    assert table.valid("A") == [1, 2]
    assert table.lengths["A"] == {1: symbols("a"), 2: symbols("a b")}


def test_valid_lengths_single_constraint():
    system = System.from_tokens([("a b c".split(), ["A", "*"])])
    assert compute_valid_lengths(system).valid("A") == [1, 2, 3]


def test_valid_lengths_prefix_against_suffix():
    system = System.from_tokens([("a b c".split(), ["A", "*"]), ("x b c".split(), ["*", "A"])])
    assert compute_valid_lengths(system).valid("A") == []


def _has_clause(formula, family, *literals):
    return any(clause.family == family and set(clause.literals) == set(literals) for clause in formula.clauses)


def test_single_block_forces_full_length():
    system = System.from_tokens([("a b c".split(), ["A"])])
    formula = build_formula(system, compute_valid_lengths(system))
    assert _has_clause(formula, 4, (LengthVar(block="A", bound=2), False)), render_formula(formula)


def test_size_two_split():
    system = System.from_tokens([("a a".split(), ["A", "B"])])
    formula = build_formula(system, compute_valid_lengths(system))
    a0, b0 = LengthVar(block="A", bound=0), LengthVar(block="B", bound=0)
    assert _has_clause(formula, 1, (a0, False))
    assert _has_clause(formula, 1, (b0, False))
    assert _has_clause(formula, 5, (LengthVar(block="A", bound=1), False), (b0, False)), render_formula(formula)


def test_pattern_longer_than_target_is_unsat():
    system = System.from_tokens([("a b".split(), ["A", "*", "B"])])
    formula = build_formula(system, compute_valid_lengths(system))
    assert two_sat(formula) is None
    assert not solve_border(system).sat


def test_two_sat_small():
    x, y = LengthVar(block="x", bound=0), LengthVar(block="y", bound=0)
    contradiction = Formula2SAT(
        variables=[x], clauses=[Clause(literals=((x, True),), family=0, origin="t"), Clause(literals=((x, False),), family=0, origin="t")]
    )
    assert two_sat(contradiction) is None

    formula = Formula2SAT(
        variables=[x, y],
        clauses=[Clause(literals=((x, True), (y, True)), family=0, origin="t"), Clause(literals=((x, False),), family=0, origin="t")],
    )
    assert two_sat(formula) == {x: False, y: True}


def test_two_sat_contradictions():
    assert two_sat(Formula2SAT(variables=[], clauses=[], contradictions=["family 4 (equation 0) is constant false"])) is None


def test_clause_width():
    x = LengthVar(block="x", bound=0)
    with pytest.raises(MalformedSystem):
        Clause(literals=(), family=0, origin="t")
    with pytest.raises(MalformedSystem):
        Clause(literals=((x, True),) * 3, family=0, origin="t")


def test_split_valuation():
    system = System.from_tokens([("a b c".split(), ["A", "B"])])
    valuation = two_sat(build_formula(system, compute_valid_lengths(system)))
    assert valuation is not None
    a1, a2 = LengthVar(block="A", bound=1), LengthVar(block="A", bound=2)
    assert valuation[a2], "A is never the whole target"
    assert not valuation[a1] or valuation[a2]


def test_solve_border_examples():
    outcome = solve_border(System.from_tokens([("a a".split(), ["A", "B"])]))
    assert outcome.assignment == {"A": ("a",), "B": ("a",)}, outcome

    outcome = solve_border(System.from_tokens([("a b".split(), ["A", "B"]), ("b a".split(), ["B", "A"])]))
    assert outcome.assignment == {"A": ("a",), "B": ("b",)}, outcome
    assert outcome.solver == "border-sat"


def test_solve_border_fills_middle_jokers():
    system = System.from_tokens([("a b c d e".split(), ["A", "*", "*", "B"]), ("a b".split(), ["A", "*"])])
    outcome = solve_border(system)
    assert outcome.sat
    assert verify(system, outcome.assignment)


def test_solve_border_rejects_other_variants(fig1_system):
    with pytest.raises(NotBorderOnly):
        solve_border(fig1_system)
    with pytest.raises(UnsupportedVariant):
        solve_border(System.from_tokens([(["a"], ["A"])], semantics=Semantics.ALLOW_EMPTY))
    with pytest.raises(UnsupportedVariant):
        solve_border(System.from_tokens([(["a"], ["A"])], deletion_budget=1))


def test_render_formula():
    system = System.from_tokens([("a b c".split(), ["A"])])
    text = render_formula(build_formula(system, compute_valid_lengths(system)))
    assert "¬A≤2" in text
    assert "family 4" in text


def border_equation(blocks: str, length: int, middle: int):
    target = st.lists(st.sampled_from("ab"), min_size=1, max_size=length)
    first, last = st.sampled_from(blocks), st.sampled_from(blocks)
    single = st.tuples(target, first.map(lambda _: [_]))
    wide = st.tuples(target, st.tuples(first, st.integers(0, middle), last).map(lambda _: [_[0]] + ["*"] * _[1] + [_[2]]))
    return st.one_of(single, wide)


def _agree(system: System) -> None:
    expected = solve_xp(system)
    outcome = solve_border(system)
    assert outcome.sat == expected.sat, system
    if outcome.sat:
        assert verify(system, outcome.assignment), system


@settings(max_examples=1000, deadline=None)
@given(st.lists(border_equation("ABC", 7, 1), min_size=1, max_size=2))
def test_border_matches_brute_random(equations):
    _agree(System.from_tokens(equations))


def _all_border_equations(length: int):
    targets = [list(w) for n in range(1, length + 1) for w in itertools.product("ab", repeat=n)]
    patterns = [[p] for p in "AB"] + [[p] + ["*"] * m + [q] for p in "AB" for q in "AB" for m in (0, 1)]
    return [(t, p) for t in targets for p in patterns]


@pytest.mark.slow
def test_border_matches_brute_exhaustive():
    equations = _all_border_equations(5)
    for equation in equations:
        _agree(System.from_tokens([equation]))
    for pair in itertools.combinations_with_replacement(equations, 2):
        _agree(System.from_tokens(list(pair)))
