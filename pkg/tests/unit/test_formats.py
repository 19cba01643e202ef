import pytest

from string_equations.core import Semantics, symbols
from string_equations.errors import EmptyPattern, EmptyTarget, MalformedSystem, NotColored, ParseError
from string_equations.formats import parse_assignment, parse_graph, parse_instance, render_assignment, render_graph, render_instance
from string_equations.reductions import gen_clique_mixed, gen_clique_single_eq, gen_clique_two_eq, gen_clique_two_eq_empty, gen_mcc_size3


def test_parse_equation():
    system = parse_instance("eq: a b c a b | A B")
    (equation,) = system.equations
    assert equation.target == symbols("a b c a b")
    assert equation.keys == ("A", "B")
    assert system.semantics == Semantics.NON_ERASING
    assert system.deletion_budget is None


def test_parse_jokers():
    system = parse_instance("eq: a b | A * *\n")
    assert system.equations[0].keys == ("A", "*1", "*2")


def test_parse_headers_and_comments(fixtures_path):
    with open(f"{fixtures_path}/fig1.eq") as f:
        system = parse_instance(f.read())
    assert len(system.equations) == 3
    system = parse_instance("semantics: allowempty\ndeletions: 2\n# comment\n\neq: a | A  # trailing\n")
    assert system.allow_empty
    assert system.deletion_budget == 2


def test_parse_empty_sides():
    with pytest.raises(EmptyPattern):
        parse_instance("eq: a |")
    with pytest.raises(EmptyTarget):
        parse_instance("eq: | A")


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("eq: a b A B", 1, 1),
        ("semantics: erasing\neq: a | A", 1, 12),
        ("eq: a | A\nfoo", 2, 1),
        ("eq: a | A 1B", 1, 11),
        ("deletions: -1\neq: a | A", 1, 1),
    ],
)
def test_parse_errors(text, line, column):
    with pytest.raises(ParseError) as e:
        parse_instance(text)
    assert (e.value.line, e.value.column) == (line, column), str(e.value)


def test_parse_no_equations():
    with pytest.raises(ParseError):
        parse_instance("semantics: nonerasing\n")


def test_render_instance(fig1_system):
    text = render_instance(fig1_system)
    assert text.splitlines()[1] == "eq: a b c a b | A B"
    assert parse_instance(text) == fig1_system


def test_generated_instances_round_trip(fig2_graph, fig2_colored_graph):
    outputs = [
        gen_clique_single_eq(fig2_graph, 3),
        gen_clique_two_eq(fig2_graph, 3),
        gen_clique_two_eq_empty(fig2_graph, 3),
        gen_clique_mixed(fig2_graph, 3),
        gen_mcc_size3(fig2_colored_graph, 3),
    ]
    for output in outputs:
        assert parse_instance(render_instance(output.system)) == output.system, output.construction


def test_assignment(fixtures_path, fig1_witness):
    with open(f"{fixtures_path}/fig1.assignment") as f:
        assert parse_assignment(f.read()) == fig1_witness
    text = render_assignment({"*1": (), "A": symbols("a b")}, ["A", "*1"])
    assert text == "A = a b\n*1 =\n"
    assert parse_assignment(text) == {"A": symbols("a b"), "*1": ()}


def test_assignment_errors():
    with pytest.raises(ParseError):
        parse_assignment("A a b")
    with pytest.raises(ParseError):
        parse_assignment("A = a\nA = b")


def test_graph(fixtures_path):
    with open(f"{fixtures_path}/fig2.graph") as f:
        g = parse_graph(f.read())
    assert g.n == 4
    assert g.edges == ((1, 2), (1, 3), (2, 3), (2, 4), (3, 4))
    assert g.coloring is None
    assert parse_graph(render_graph(g)) == g

    with open(f"{fixtures_path}/fig2_colored.graph") as f:
        colored = parse_graph(f.read())
    assert colored.coloring == (1, 1, 2, 3)
    assert render_graph(colored).splitlines()[0] == "4 5 3"


def test_graph_errors():
    with pytest.raises(ParseError):
        parse_graph("3 2\n1 2\n")
    with pytest.raises(ParseError):
        parse_graph("2 1 2\n1 2\n1 3\n")
    with pytest.raises(MalformedSystem):
        parse_graph("2 1\n1 1\n")
    with pytest.raises(NotColored):
        parse_graph("2 1 2\n1 2\n1 1\n")
