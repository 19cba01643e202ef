import json
import logging
import math
import sys
import time
from typing import Optional, TextIO

import click
import yaml
from click_default_group import DefaultGroup
from halo import Halo
from pydantic import BaseModel

from string_equations import DEFAULT_LOG_FILE, setup_logging
from string_equations.border_sat import build_formula, compute_valid_lengths, render_formula, solve_border
from string_equations.core import Assignment, System, SystemStats, classify, symbols, verify, verify_deletions
from string_equations.errors import DecodeFailure, UnsupportedVariant
from string_equations.exact_solvers import DEFAULT_BRANCH_CAP, SolveOutcome, solve_deletions_xp, solve_xp
from string_equations.formats import parse_assignment, parse_graph, parse_instance, render_assignment, render_graph, render_instance
from string_equations.lcs_solver import solve_deletions_lcs
from string_equations.reductions import (
    CLIQUE_MIXED,
    CLIQUE_SINGLE_EQ,
    CLIQUE_TWO_EQ,
    CLIQUE_TWO_EQ_EMPTY,
    GRAPH_CONSTRUCTIONS,
    LCS_MULTI,
    LCS_SINGLE,
    MCC_SIZE3,
    Graph,
    ReductionOutput,
    decode as decode_witness,
    gen_clique_mixed,
    gen_clique_single_eq,
    gen_clique_two_eq,
    gen_clique_two_eq_empty,
    gen_from_lcs_multi,
    gen_from_lcs_single,
    gen_mcc_size3,
    lcs_budget,
)

SOLVERS = ["auto", "brute", "border-sat", "lcs-del"]

GENERATORS = {
    CLIQUE_SINGLE_EQ: gen_clique_single_eq,
    CLIQUE_TWO_EQ: gen_clique_two_eq,
    CLIQUE_TWO_EQ_EMPTY: gen_clique_two_eq_empty,
    MCC_SIZE3: gen_mcc_size3,
    CLIQUE_MIXED: gen_clique_mixed,
}

EXIT_SAT, EXIT_UNSAT, EXIT_ERROR = 0, 1, 2


class Report(BaseModel):
    """Machine-readable result of `solve --json`."""

    status: str
    witness: Optional[dict[str, list[str]]] = None
    stats: SystemStats
    solver: str
    branches: int
    ms: float


def choose_solver(system: System, d: int) -> str:
    """
    Pick a solver for `--solver auto`.

    border-sat for non-erasing border-only systems without deletions, brute for the other exact
    systems. With deletions, lcs-del explores at most t^(rc) starting points and brute at most
    (sum of C(N, c) for c <= d) * t^(2k) branches; the smaller bound wins, brute on ties.
    """
    stats = classify(system)
    if d == 0:
        return "border-sat" if stats.only_border_blocks and not system.allow_empty else "brute"
    total = sum(len(_) for _ in system.targets)
    lcs_bound = stats.t ** (stats.r * stats.c)
    brute_bound = sum(math.comb(total, count) for count in range(d + 1)) * stats.t ** (2 * stats.k)
    logging.debug(f"choose_solver: lcs-del bound {lcs_bound}, brute bound {brute_bound}")
    return "lcs-del" if lcs_bound < brute_bound else "brute"


def run_solver(system: System, solver: str, d: int, branch_cap: int) -> SolveOutcome:
    if solver == "auto":
        solver = choose_solver(system, d)
    if solver == "border-sat":
        if d:
            raise UnsupportedVariant("the border solver does not handle deletions")
        return solve_border(system.model_copy(update={"deletion_budget": None}))
    if solver == "lcs-del":
        return solve_deletions_lcs(system, d, branch_cap)
    if d:
        return solve_deletions_xp(system, d, branch_cap)
    return solve_xp(system.model_copy(update={"deletion_budget": None}), branch_cap)


def _fail(e: Exception, debug: bool) -> None:
    logging.error(f"Error: {e}", exc_info=True)
    click.echo(f"Error: {e}", file=sys.stderr)
    if debug:
        raise e
    sys.exit(EXIT_ERROR)


def _budget(system: System, deletions: Optional[int]) -> int:
    return deletions if deletions is not None else system.deletion_budget or 0


@click.group(cls=DefaultGroup, default="solve")
def cli() -> None:
    """Solve, verify and generate systems of string equations."""
    pass


@cli.command()
@click.argument("instance", type=click.File("r"))
@click.option("--solver", type=click.Choice(SOLVERS), default="auto", show_default=True, help="Decision procedure to run.")
@click.option("--deletions", type=click.IntRange(min=0), default=None, help="Deletion budget d. default: the instance header, else 0")
@click.option("--branch-cap", type=click.IntRange(min=1), default=DEFAULT_BRANCH_CAP, show_default=True, help="Give up after this many branches.")
@click.option("--json", "as_json", is_flag=True, default=False, help="Print a JSON report instead of the witness.")
@click.option("--debug", is_flag=True, help="Enable debug mode.")
@click.option("--log-file", default=DEFAULT_LOG_FILE, help=f'Path to the log file. default="{DEFAULT_LOG_FILE}"')
def solve(instance: TextIO, solver: str, deletions: Optional[int], branch_cap: int, as_json: bool, debug: bool, log_file: str) -> None:
    """Decide an instance; exit 0 when satisfiable, 1 when not, 2 on errors.
    \b

    INSTANCE: Path to the instance file, "-" for stdin.
    """

    setup_logging(debug, log_file)

    try:
        system = parse_instance(instance.read())
        d = _budget(system, deletions)
        stats = classify(system)
        started = time.perf_counter()
        with Halo(text=f"Solving {instance.name}", spinner="dots", stream=sys.stderr, enabled=sys.stderr.isatty()):
            outcome = run_solver(system, solver, d, branch_cap)
        ms = (time.perf_counter() - started) * 1000
        logging.info(f"{instance.name}: {outcome.status.value} by {outcome.solver} in {outcome.branches} branches, {ms:.1f} ms")

        if as_json:
            witness = {key: list(outcome.assignment[key]) for key in system.blocks()} if outcome.assignment else None
            report = Report(status=outcome.status.value, witness=witness, stats=stats, solver=outcome.solver, branches=outcome.branches, ms=ms)
            click.echo(json.dumps(report.model_dump()))
        else:
            click.echo(outcome.status.value)
            if outcome.assignment:
                click.echo(render_assignment(outcome.assignment, system.blocks()), nl=False)
        click.echo(f"{outcome.status.value} ({outcome.solver}, {outcome.branches} branches, {ms:.1f} ms)", file=sys.stderr)
    except Exception as e:
        _fail(e, debug)
    sys.exit(EXIT_SAT if outcome.sat else EXIT_UNSAT)


@cli.command(name="verify")
@click.argument("instance", type=click.File("r"))
@click.option("--assignment", "assignment_file", type=click.File("r"), required=True, help="Path to the assignment file.")
@click.option("--deletions", type=click.IntRange(min=0), default=None, help="Deletion budget d. default: the instance header, else 0")
@click.option("--debug", is_flag=True, help="Enable debug mode.")
@click.option("--log-file", default=DEFAULT_LOG_FILE, help=f'Path to the log file. default="{DEFAULT_LOG_FILE}"')
def verify_(instance: TextIO, assignment_file: TextIO, deletions: Optional[int], debug: bool, log_file: str) -> None:
    """Check an assignment against an instance; exit 0 when accepted, 1 when rejected."""

    setup_logging(debug, log_file)

    try:
        system = parse_instance(instance.read())
        assignment = parse_assignment(assignment_file.read())
        d = _budget(system, deletions)
        verdict = verify_deletions(system, assignment, d) if d else verify(system, assignment)
        if verdict:
            click.echo("OK")
        else:
            where = "" if verdict.equation is None else f" (equation {verdict.equation}"
            where += "" if verdict.position is None else f", position {verdict.position}"
            where += ")" if where else ""
            click.echo(f"REJECTED: {verdict.reason}{where}")
    except Exception as e:
        _fail(e, debug)
    sys.exit(EXIT_SAT if verdict else EXIT_UNSAT)


def _write(output: TextIO, text: str) -> None:
    output.write(text)
    if output is not sys.stdout:
        click.echo(f"Wrote {output.name}", file=sys.stderr)


def _read_graph(graph_file: Optional[TextIO]) -> Graph:
    if graph_file is None:
        raise click.UsageError("graph constructions need --graph")
    g = parse_graph(graph_file.read())
    logging.debug(f"graph:\n{render_graph(g)}")
    return g


@cli.command()
@click.argument("construction", type=click.Choice(GRAPH_CONSTRUCTIONS + [LCS_MULTI, LCS_SINGLE]))
@click.option("--graph", "graph_file", type=click.File("r"), default=None, help="Path to the graph file.")
@click.option("--kappa", type=int, default=None, help="Clique size (number of colors for mcc-size3).")
@click.option("--strings", "strings", multiple=True, help='Input string for lcs constructions, whitespace separated symbols. Repeatable.')
@click.option("--lcs-length", type=int, default=None, help="Common subsequence length λ for lcs-multi, or for lcs-single in place of --deletions.")
@click.option("--deletions", type=click.IntRange(min=0), default=None, help="Deletion budget d for lcs-single.")
@click.option("-o", "--output", type=click.File("w"), default="-", help="Path to the output file. default: stdout")
@click.option("--debug", is_flag=True, help="Enable debug mode.")
@click.option("--log-file", default=DEFAULT_LOG_FILE, help=f'Path to the log file. default="{DEFAULT_LOG_FILE}"')
def gen(
    construction: str,
    graph_file: Optional[TextIO],
    kappa: Optional[int],
    strings: tuple[str, ...],
    lcs_length: Optional[int],
    deletions: Optional[int],
    output: TextIO,
    debug: bool,
    log_file: str,
) -> None:
    """Generate an instance from a hardness construction.
    \b

    CONSTRUCTION: One of the graph constructions (needs --graph, --kappa) or lcs-multi / lcs-single (need --strings).
    """

    setup_logging(debug, log_file)

    if construction in GRAPH_CONSTRUCTIONS and (graph_file is None or kappa is None):
        raise click.UsageError(f"{construction} needs --graph and --kappa")
    if construction == LCS_MULTI and (not strings or lcs_length is None):
        raise click.UsageError("lcs-multi needs --strings and --lcs-length")
    if construction == LCS_SINGLE and (not strings or (deletions is None) == (lcs_length is None)):
        raise click.UsageError("lcs-single needs --strings and exactly one of --deletions, --lcs-length")

    try:
        if construction == LCS_MULTI:
            system, budget = gen_from_lcs_multi([symbols(_) for _ in strings])
            system = system.model_copy(update={"deletion_budget": budget(lcs_length)})
        elif construction == LCS_SINGLE:
            inputs = [symbols(_) for _ in strings]
            if deletions is None:
                deletions = lcs_budget(sum(len(_) for _ in inputs), len(inputs), lcs_length, allow_zero=True)  # type: ignore[arg-type]
            system = gen_from_lcs_single(inputs, deletions)
        else:
            system = GENERATORS[construction](_read_graph(graph_file), kappa).system  # type: ignore[arg-type]
        _write(output, render_instance(system))
    except Exception as e:
        _fail(e, debug)


@cli.command(name="classify")
@click.argument("instance", type=click.File("r"))
@click.option("--debug", is_flag=True, help="Enable debug mode.")
@click.option("--log-file", default=DEFAULT_LOG_FILE, help=f'Path to the log file. default="{DEFAULT_LOG_FILE}"')
def classify_(instance: TextIO, debug: bool, log_file: str) -> None:
    """Print the parameters k, r, c, t and the structural flags as YAML."""

    setup_logging(debug, log_file)

    try:
        system = parse_instance(instance.read())
        stats = classify(system).model_dump()
        stats["semantics"] = system.semantics.value
        stats["deletions"] = system.deletion_budget or 0
        click.echo(yaml.dump(stats, default_flow_style=False, sort_keys=False), nl=False)
    except Exception as e:
        _fail(e, debug)


@cli.command()
@click.argument("instance", type=click.File("r"))
@click.option("--debug", is_flag=True, help="Enable debug mode.")
@click.option("--log-file", default=DEFAULT_LOG_FILE, help=f'Path to the log file. default="{DEFAULT_LOG_FILE}"')
def formula(instance: TextIO, debug: bool, log_file: str) -> None:
    """Dump the 2SAT clauses of a border-only instance, one per line."""

    setup_logging(debug, log_file)

    try:
        system = parse_instance(instance.read())
        click.echo(render_formula(build_formula(system, compute_valid_lengths(system))), nl=False)
    except Exception as e:
        _fail(e, debug)


def _labels_to_vertices(g: Graph, labels: set[str]) -> list[int]:
    return sorted(g.labels.index(_) + 1 for _ in labels)


def _check_clique(output: ReductionOutput, vertices: list[int]) -> None:
    g = output.graph
    if len(vertices) != output.kappa:
        raise DecodeFailure(f"decoded {len(vertices)} vertices, expected {output.kappa}")
    for position, u in enumerate(vertices):
        for v in vertices[position + 1 :]:
            if not g.has_edge(u, v):
                raise DecodeFailure(f"decoded vertices {g.label(u)} and {g.label(v)} are not adjacent")
    if g.coloring is not None and output.construction == MCC_SIZE3:
        if sorted(g.coloring[v - 1] for v in vertices) != list(range(1, output.kappa + 1)):
            raise DecodeFailure("decoded clique does not take one vertex of every color")


@cli.command(name="decode")
@click.argument("construction", type=click.Choice(GRAPH_CONSTRUCTIONS))
@click.option("--graph", "graph_file", type=click.File("r"), required=True, help="Path to the graph file.")
@click.option("--kappa", type=int, required=True, help="Clique size (number of colors for mcc-size3).")
@click.option("--assignment", "assignment_file", type=click.File("r"), default=None, help="Witness to decode. default: solve the instance")
@click.option("--branch-cap", type=click.IntRange(min=1), default=DEFAULT_BRANCH_CAP, show_default=True, help="Give up after this many branches.")
@click.option("--debug", is_flag=True, help="Enable debug mode.")
@click.option("--log-file", default=DEFAULT_LOG_FILE, help=f'Path to the log file. default="{DEFAULT_LOG_FILE}"')
def decode_(
    construction: str, graph_file: TextIO, kappa: int, assignment_file: Optional[TextIO], branch_cap: int, debug: bool, log_file: str
) -> None:
    """Regenerate a construction, solve it (or read a witness) and print the decoded clique."""

    setup_logging(debug, log_file)

    found = True
    try:
        output = GENERATORS[construction](parse_graph(graph_file.read()), kappa)
        assignment: Optional[Assignment]
        if assignment_file is not None:
            assignment = parse_assignment(assignment_file.read())
            verdict = verify(output.system, assignment)
            if not verdict:
                raise DecodeFailure(f"assignment does not satisfy the instance: {verdict.reason}")
        else:
            with Halo(text=f"Solving {construction}", spinner="dots", stream=sys.stderr, enabled=sys.stderr.isatty()):
                assignment = solve_xp(output.system, branch_cap).assignment
        if assignment is None:
            found = False
            click.echo(f"UNSAT: no {kappa}-clique")
        else:
            vertices = _labels_to_vertices(output.graph, decode_witness(output, assignment))
            _check_clique(output, vertices)
            click.echo(" ".join(output.graph.label(v) for v in vertices))
    except Exception as e:
        _fail(e, debug)
    sys.exit(EXIT_SAT if found else EXIT_UNSAT)
