import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from string_equations.core import Semantics, SymbolCodec, System, is_subsequence, symbols, verify_deletions
from string_equations.exact_solvers import solve_deletions_xp
from string_equations.lcs_solver import factor_bundle, multi_lcs, solve_deletions_lcs, starting_points
from string_equations.reductions import gen_from_lcs_multi
from tests.unit.oracles import exhaustive_lcs_length
from tests.unit.test_exact_solvers import small_systems


def test_multi_lcs_examples():
    assert multi_lcs([symbols("a b c")]) == symbols("a b c")
    assert multi_lcs([symbols("a b c d"), symbols("a c b d")]) == symbols("a b d")
    assert multi_lcs([symbols("a b"), symbols("c d")]) == ()


def test_multi_lcs_is_common_and_longest():
    strings = [symbols("b a c a b"), symbols("a b c b a"), symbols("c a b a")]
    lcs = multi_lcs(strings)
    assert all(is_subsequence(lcs, s) for s in strings)
    assert len(lcs) == exhaustive_lcs_length(strings)


strings_ab = st.lists(st.lists(st.sampled_from("ab"), min_size=1, max_size=5).map(tuple), min_size=1, max_size=3)


@settings(max_examples=200, deadline=None)
@given(strings_ab)
def test_multi_lcs_matches_exhaustive(strings):
    lcs = multi_lcs(strings)
    assert len(lcs) == exhaustive_lcs_length(strings), strings
    assert all(is_subsequence(lcs, s) for s in strings)


@pytest.mark.slow
def test_multi_lcs_exhaustive_sweep():
    words = [tuple(w) for n in range(0, 7) for w in itertools.product("ab", repeat=n)]
    for r in (1, 2, 3):
        for strings in itertools.product(words, repeat=r):
            if not any(strings):
                continue
            assert len(multi_lcs(list(strings))) == exhaustive_lcs_length(strings), strings


def test_starting_points_are_non_decreasing():
    system = System.from_tokens([("a b c".split(), ["A", "B"])])
    codec = SymbolCodec.for_system(system)
    choices = list(starting_points(system, [codec.encode(t) for t in system.targets]))
    assert choices[0] == ((1, 1),)
    assert len(choices) == 6, choices
    assert all(starts == tuple(sorted(starts)) for (starts,) in choices)


def test_factor_bundle_collects_regions():
    system = System.from_tokens([("a b c".split(), ["A", "B"]), ("a c".split(), ["A", "B"])])
    codec = SymbolCodec.for_system(system)
    encoded = [codec.encode(t) for t in system.targets]
    bundle = factor_bundle(system, encoded, ((1, 2), (1, 2)))
    assert [codec.decode(_) for _ in bundle["A"]] == [symbols("a"), symbols("a")]
    assert [codec.decode(_) for _ in bundle["B"]] == [symbols("b c"), symbols("c")]


def test_solve_deletions_lcs_single():
    system = System.from_tokens([(["a", "b"], ["X"]), (["b"], ["X"])])
    outcome = solve_deletions_lcs(system, 1)
    assert outcome.sat
    assert outcome.assignment == {"X": ("b",)}, outcome
    assert outcome.solver == "lcs-del"


def test_solve_deletions_lcs_embedding():
    system, budget = gen_from_lcs_multi([symbols("a b c d"), symbols("a c b d")])
    d = budget(3)
    assert d == 2
    outcome = solve_deletions_lcs(system, d)
    assert outcome.sat
    assert len(outcome.assignment["X"]) == 3, outcome
    assert not solve_deletions_lcs(system, 0).sat


def test_large_budget_is_always_sat(fig1_system):
    d = sum(len(t) for t in fig1_system.targets)
    outcome = solve_deletions_lcs(fig1_system, d)
    assert outcome.sat
    assert verify_deletions(fig1_system, outcome.assignment, d)


@settings(max_examples=500, deadline=None)
@given(small_systems(), st.integers(min_value=0, max_value=2))
def test_lcs_solver_matches_brute(system, d):
    assert solve_deletions_lcs(system, d).sat == solve_deletions_xp(system, d).sat, (system, d)


def test_starting_points_allow_empty_reach_past_the_end():
    system = System.from_tokens([("a b c".split(), ["A", "B"])], semantics=Semantics.ALLOW_EMPTY)
    codec = SymbolCodec.for_system(system)
    choices = list(starting_points(system, [codec.encode(t) for t in system.targets]))
    assert len(choices) == 10, choices
    assert ((1, 4),) in choices
    assert choices[-1] == ((4, 4),)


def test_solve_deletions_lcs_allow_empty_trailing_block():
    system = System.from_tokens([(["a"], ["X", "Y"]), (["b", "a"], ["Y", "X"])], semantics=Semantics.ALLOW_EMPTY)
    for d in (0, 1):
        outcome = solve_deletions_lcs(system, d)
        assert outcome.sat == solve_deletions_xp(system, d).sat, d
    outcome = solve_deletions_lcs(system, 1)
    assert outcome.sat, outcome
    assert verify_deletions(system, outcome.assignment, 1)


@settings(max_examples=300, deadline=None)
@given(small_systems(Semantics.ALLOW_EMPTY), st.integers(min_value=0, max_value=2))
def test_lcs_solver_matches_brute_allow_empty(system, d):
    outcome = solve_deletions_lcs(system, d)
    assert outcome.sat == solve_deletions_xp(system, d).sat, (system, d)
    if outcome.sat:
        assert verify_deletions(system, outcome.assignment, d)
