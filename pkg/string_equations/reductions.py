"""Instance generators for the hardness constructions, with clique oracles and witness decoding.

Every graph construction maps (G, κ) to a system that is satisfiable iff G has a κ-clique (a
multicolored one for mcc-size3). Together with the brute-force oracles below they give
round-trip checks for all solvers.
"""

import itertools
import logging
from functools import partial
from typing import Any, Callable, Iterator, Optional, Sequence

import networkx as nx
from pydantic import BaseModel, ConfigDict, PrivateAttr, model_validator

from string_equations.core import JOKER, Assignment, Semantics, Symbol, SymbolString, System
from string_equations.errors import BadKappa, DecodeFailure, LabelClash, MalformedSystem, MinLcsOne, NotColored, ReductionError

CLIQUE_SINGLE_EQ = "clique-1eq"
CLIQUE_TWO_EQ = "clique-2eq"
CLIQUE_TWO_EQ_EMPTY = "clique-2eq-empty"
MCC_SIZE3 = "mcc-size3"
CLIQUE_MIXED = "clique-mixed"
LCS_MULTI = "lcs-multi"
LCS_SINGLE = "lcs-single"

GRAPH_CONSTRUCTIONS = [CLIQUE_SINGLE_EQ, CLIQUE_TWO_EQ, CLIQUE_TWO_EQ_EMPTY, MCC_SIZE3, CLIQUE_MIXED]

GAMMA, DOLLAR = "γ", "$"


class Graph(BaseModel):
    """
    Undirected graph on vertices 1..n, edges as sorted pairs (s, t) with s < t.

    Labels name the vertex symbols used in targets (default v1..vn). An optional coloring gives
    each vertex a color in 1..κ; it must be proper.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    labels: tuple[str, ...] = ()
    coloring: Optional[tuple[int, ...]] = None

    _edge_set: frozenset[tuple[int, int]] = PrivateAttr(default_factory=frozenset)

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data: Any) -> Any:
        if isinstance(data, dict):
            data = dict(data)
            edges = {(min(s, t), max(s, t)) for s, t in data.get("edges", ())}
            data["edges"] = tuple(sorted(edges))
            if not data.get("labels"):
                data["labels"] = tuple(f"v{i}" for i in range(1, data.get("n", 0) + 1))
        return data

    @model_validator(mode="after")
    def _check(self) -> "Graph":
        if self.n < 0:
            raise MalformedSystem(f"vertex count must be non-negative, got {self.n}")
        for s, t in self.edges:
            if not 1 <= s < t <= self.n:
                raise MalformedSystem(f"edge ({s}, {t}) is not a pair of distinct vertices in 1..{self.n}")
        if len(self.labels) != self.n or len(set(self.labels)) != self.n:
            raise MalformedSystem("labels must name every vertex exactly once")
        if self.coloring is not None:
            if len(self.coloring) != self.n:
                raise NotColored(f"coloring has {len(self.coloring)} entries for {self.n} vertices")
            for s, t in self.edges:
                if self.coloring[s - 1] == self.coloring[t - 1]:
                    raise NotColored(f"edge {self.label(s)}{self.label(t)} joins two vertices of color {self.coloring[s - 1]}")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._edge_set = frozenset(self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def label(self, vertex: int) -> Symbol:
        return self.labels[vertex - 1]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_set

    def color_class(self, color: int) -> list[int]:
        assert self.coloring is not None, "graph is not colored"
        return [v for v in range(1, self.n + 1) if self.coloring[v - 1] == color]

    def with_coloring(self, coloring: Optional[Sequence[int]]) -> "Graph":
        return Graph(n=self.n, edges=self.edges, labels=self.labels, coloring=tuple(coloring) if coloring else None)

    def proper_colorings(self, kappa: int) -> Iterator["Graph"]:
        """Every proper coloring with colors 1..κ, each as a colored copy of this graph."""
        for coloring in itertools.product(range(1, kappa + 1), repeat=self.n):
            if all(coloring[s - 1] != coloring[t - 1] for s, t in self.edges):
                yield self.with_coloring(coloring)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from((v, {"label": self.label(v)}) for v in range(1, self.n + 1))
        graph.add_edges_from(self.edges)
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph, labels: Optional[Sequence[str]] = None) -> "Graph":
        nodes = sorted(graph.nodes)
        index = {node: position for position, node in enumerate(nodes, start=1)}
        edges = [(index[u], index[v]) for u, v in graph.edges]
        return cls(n=len(nodes), edges=tuple(edges), labels=tuple(labels) if labels else ())


class ReductionOutput(BaseModel):
    """A generated system plus what is needed to read a clique back out of a witness."""

    construction: str
    system: System
    decode_map: dict[str, str]
    graph: Graph
    kappa: int


class _Builder:
    """Collects equations as token lists; jokers are the "*" token."""

    def __init__(self, separators: Sequence[str], graph: Optional[Graph] = None):
        if graph is not None:
            clash = set(graph.labels) & set(separators)
            if clash:
                raise LabelClash(f"vertex labels {sorted(clash)} collide with separator symbols")
        self.equations: list[tuple[list[str], list[str]]] = []
        self.roles: dict[str, str] = {}

    def block(self, name: str, role: str) -> str:
        self.roles[name] = role
        return name

    def add(self, target: list[str], pattern: list[str]) -> None:
        self.equations.append((target, pattern))

    def system(self, semantics: Semantics = Semantics.NON_ERASING) -> System:
        return System.from_tokens(self.equations, semantics=semantics)


def _check_kappa(kappa: int) -> None:
    if kappa < 2:
        raise BadKappa(f"κ must be at least 2, got {kappa}")


def _pairs(kappa: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(1, kappa + 1), 2))


def _edge_section(graph: Graph, separator: str, indexed: bool) -> list[str]:
    def sep(j: int) -> str:
        return f"{separator}_{j}" if indexed else separator

    tokens = [sep(0)]
    for j, (s, t) in enumerate(graph.edges, start=1):
        tokens += [graph.label(s), graph.label(t), sep(j)]
    return tokens


def _output(construction: str, builder: _Builder, graph: Graph, kappa: int, semantics: Semantics = Semantics.NON_ERASING) -> ReductionOutput:
    system = builder.system(semantics)
    logging.debug(
        f"{construction}: {len(system.equations)} equations, {len(system.blocks())} blocks, "
        f"max target {system.max_target_length()}"
    )
    return ReductionOutput(construction=construction, system=system, decode_map=builder.roles, graph=graph, kappa=kappa)


def gen_clique_single_eq(g: Graph, kappa: int) -> ReductionOutput:
    """
    One equation: T = y_0 e_1 y_1 ... e_m y_m against * X_1 X_2 * X_1 X_3 * ... X_{κ-1} X_κ *.

    Args:
        g (Graph): The graph.
        kappa (int): Clique size, at least 2.

    Returns:
        ReductionOutput: satisfiable iff g has a κ-clique.
    """
    _check_kappa(kappa)
    builder = _Builder([f"y_{j}" for j in range(g.m + 1)], g)
    pattern = [JOKER]
    for i, j in _pairs(kappa):
        pattern += [builder.block(f"X{i}", f"vertex:{i}"), builder.block(f"X{j}", f"vertex:{j}"), JOKER]
    builder.add(_edge_section(g, "y", indexed=True), pattern)
    return _output(CLIQUE_SINGLE_EQ, builder, g, kappa)


def _vertex_runs(g: Graph, kappa: int, guard: Optional[str] = None) -> list[str]:
    tokens = ["x_0"]
    for v in range(1, g.n + 1):
        run = [g.label(v)] * (kappa - 1)
        tokens += ([guard] + run + [guard] if guard else run) + [f"x_{v}"]
    return tokens


def _two_eq_separators(g: Graph) -> list[str]:
    return ["z"] + [f"x_{i}" for i in range(g.n + 1)] + [f"y_{j}" for j in range(g.m + 1)]


def _coding(builder: _Builder, prime: bool, i: int, j: int) -> str:
    return builder.block(f"{'Xp' if prime else 'X'}{i}_{j}", f"{'mirror' if prime else 'vertex'}:{i}:{j}")


def _vertex_section(builder: _Builder, kappa: int, prime: bool, guards: Optional[tuple[str, str]] = None) -> list[str]:
    pattern = []
    for i in range(1, kappa + 1):
        group = [_coding(builder, prime, i, j) for j in range(1, kappa + 1) if j != i]
        if guards:
            opening, closing = (builder.block(f"{_}_{i}", "gadget") for _ in guards)
            group = [opening] + group + [closing]
        pattern += group + [builder.block(f"A{i}", "gap")]
    return pattern


def _edge_blocks(builder: _Builder, kappa: int, prime: bool) -> list[str]:
    pattern = [builder.block("B0", "gap")]
    for i, j in _pairs(kappa):
        pattern += [_coding(builder, prime, i, j), _coding(builder, prime, j, i), builder.block(f"B{i}_{j}", "gap")]
    return pattern


def gen_clique_two_eq(g: Graph, kappa: int) -> ReductionOutput:
    """
    Two duplicate-free equations over one target split into a vertex and an edge section.

    T = z x_0 (v_1^{κ-1} x_1) ... (v_n^{κ-1} x_n) z y_0 (e_1 y_1) ... (e_m y_m). The first pattern codes
    vertices with X_{i,j} and edges with X'_{i,j}, the second swaps the roles; Z and Z' are both
    forced to z. One gap A_i follows each vertex group, one gap B_{i,j} each selected edge.

    Args:
        g (Graph): The graph.
        kappa (int): Clique size, at least 2.

    Returns:
        ReductionOutput: satisfiable iff g has a κ-clique.
    """
    _check_kappa(kappa)
    builder = _Builder(_two_eq_separators(g), g)
    target = ["z"] + _vertex_runs(g, kappa) + ["z"] + _edge_section(g, "y", indexed=True)
    z, z_prime, a0 = builder.block("Z", "start"), builder.block("Zp", "start"), builder.block("A0", "gap")
    first = [z, a0] + _vertex_section(builder, kappa, prime=False) + [z_prime] + _edge_blocks(builder, kappa, prime=True)
    second = [z_prime, a0] + _vertex_section(builder, kappa, prime=True) + [z] + _edge_blocks(builder, kappa, prime=False)
    builder.add(target, first)
    builder.add(target, second)
    return _output(CLIQUE_TWO_EQ, builder, g, kappa)


def _anchor_length(kappa: int) -> int:
    """Longer than any chain of non-Φ blocks whose order the two patterns reverse."""
    return 2 * kappa + 5


def gen_clique_two_eq_empty(g: Graph, kappa: int) -> ReductionOutput:
    """
    The two-equation construction for semantics that allow empty blocks.

    The targets open with γ^{2κ+1} φ_1 ... φ_L, and the second target carries the φ run reversed.
    Each φ must sit alone in a block, and those blocks must appear in opposite orders in the two
    patterns. Outside the Φ blocks no such chain reaches length L, so Φ_a = φ_a. Once the Φ
    blocks are pinned, the γ prefix pins the Γ guards, and the guards around every vertex run
    force Z and the coding blocks to be non-empty.

    Args:
        g (Graph): The graph.
        kappa (int): Clique size, at least 2.

    Returns:
        ReductionOutput: an AllowEmpty system, satisfiable iff g has a κ-clique.
    """
    _check_kappa(kappa)
    anchors = [f"φ{a}" for a in range(1, _anchor_length(kappa) + 1)]
    builder = _Builder(_two_eq_separators(g) + [GAMMA] + anchors, g)
    body = ["z", GAMMA] + _vertex_runs(g, kappa, guard=GAMMA) + ["z"] + _edge_section(g, "y", indexed=True)
    target = [GAMMA] * (2 * kappa + 1) + anchors + body
    target_prime = [GAMMA] * (2 * kappa + 1) + anchors[::-1] + body

    def prefix(name: str) -> list[str]:
        blocks = [builder.block(f"{name}0", "gadget")]
        for i in range(1, kappa + 1):
            blocks += [builder.block(f"{name}0_{i}", "gadget"), builder.block(f"{name}1_{i}", "gadget")]
        return blocks

    phis = [builder.block(f"F{a}", "gadget") for a in range(1, len(anchors) + 1)]
    z, z_prime, a0 = builder.block("Z", "start"), builder.block("Zp", "start"), builder.block("A0", "gap")
    first = (
        prefix("G")
        + phis
        + [z, "Gp0", a0]
        + _vertex_section(builder, kappa, prime=False, guards=("Gp0", "Gp1"))
        + [z_prime]
        + _edge_blocks(builder, kappa, prime=True)
    )
    second = (
        prefix("Gp")
        + phis[::-1]
        + [z_prime, "G0", a0]
        + _vertex_section(builder, kappa, prime=True, guards=("G0", "G1"))
        + [z]
        + _edge_blocks(builder, kappa, prime=False)
    )
    builder.add(target, first)
    builder.add(target_prime, second)
    return _output(CLIQUE_TWO_EQ_EMPTY, builder, g, kappa, Semantics.ALLOW_EMPTY)


def gen_mcc_size3(g: Graph, kappa: int) -> ReductionOutput:
    """
    Equations of size at most 3 for multicolored clique, with separators x, y and z.

    T_{1,i} = x (vertices of color i) x, T_2 = y e_1 y ... e_m y, T_3 = z e_1 z ... e_m z where every
    edge is written lower color first.

    Args:
        g (Graph): A properly colored graph with colors in 1..κ.
        kappa (int): Number of colors, at least 2.

    Returns:
        ReductionOutput: satisfiable iff g has a clique with one vertex of each color.
    """
    _check_kappa(kappa)
    if g.coloring is None:
        raise NotColored("mcc-size3 needs a vertex coloring")
    if any(not 1 <= color <= kappa for color in g.coloring):
        raise NotColored(f"colors must lie in 1..{kappa}")
    builder = _Builder(["x", "y", "z"], g)
    coloring = g.coloring

    def oriented(s: int, t: int) -> list[str]:
        return [g.label(s), g.label(t)] if coloring[s - 1] < coloring[t - 1] else [g.label(t), g.label(s)]

    edges = [oriented(s, t) for s, t in g.edges]
    t2 = ["y"] + [token for edge in edges for token in edge + ["y"]]
    t3 = ["z"] + [token for edge in edges for token in edge + ["z"]]

    for i in range(1, kappa + 1):
        builder.add(["x"] + [g.label(v) for v in g.color_class(i)] + ["x"], [JOKER, builder.block(f"X{i}", f"vertex:{i}"), JOKER])
    for i, j in _pairs(kappa):
        builder.add(t2, [JOKER, builder.block(f"E{i}_{j}", f"edge:{i}:{j}"), JOKER])
    for i, j in _pairs(kappa):
        builder.add(t3, [builder.block(f"A{i}_{j}", "gap"), f"E{i}_{j}", builder.block(f"B{i}_{j}", "gap")])
    for i, j in _pairs(kappa):
        builder.add(t3, [f"A{i}_{j}", f"X{i}", JOKER])
    for i, j in _pairs(kappa):
        builder.add(t3, [JOKER, f"X{j}", f"B{i}_{j}"])
    return _output(MCC_SIZE3, builder, g, kappa)


def pre(g: Graph, i: int) -> list[str]:
    """x v_1 ... v_{i-1} (1-based i)."""
    return ["x"] + [g.label(v) for v in range(1, i)]


def suf(g: Graph, i: int) -> list[str]:
    """v_i ... v_n (1-based i)."""
    return [g.label(v) for v in range(i, g.n + 1)]


def gen_clique_mixed(g: Graph, kappa: int) -> ReductionOutput:
    """
    Size-2 equations over T_v = x v_1 ... v_n plus one duplicate-free equation over
    T_e = y pre(u) suf(v) y ... for every edge uv.

    Args:
        g (Graph): The graph.
        kappa (int): Clique size, at least 2.

    Returns:
        ReductionOutput: satisfiable iff g has a κ-clique.
    """
    _check_kappa(kappa)
    builder = _Builder(["x", "y"], g)
    t_v = ["x"] + list(g.labels)
    t_e = ["y"]
    for s, t in g.edges:
        t_e += pre(g, s) + suf(g, t) + ["y"]

    for i in range(1, kappa + 1):
        builder.add(t_v, [builder.block(f"X{i}", f"vertex:{i}"), builder.block(f"Xp{i}", f"suffix:{i}")])
    for i, j in _pairs(kappa):
        builder.add(t_v, [builder.block(f"X{i}_{j}", f"edge:{i}:{j}"), f"Xp{i}"])
        builder.add(t_v, [f"X{j}", builder.block(f"Xp{j}_{i}", f"edge:{j}:{i}")])
    pattern = [JOKER]
    for i, j in _pairs(kappa):
        pattern += [f"X{i}_{j}", f"Xp{j}_{i}", JOKER]
    builder.add(t_e, pattern)
    return _output(CLIQUE_MIXED, builder, g, kappa)


def lcs_budget(total_length: int, r: int, lcs_length: int, allow_zero: bool = False) -> int:
    """Deletions needed to cut r strings of the given total length down to a common subsequence."""
    if lcs_length < 1 and not allow_zero:
        raise MinLcsOne("a non-erasing block cannot hold a common subsequence of length 0")
    budget = total_length - r * lcs_length
    if budget < 0:
        raise ReductionError(f"no string set of total length {total_length} has a common subsequence of length {lcs_length}")
    return budget


def gen_from_lcs_multi(strings: Sequence[SymbolString]) -> tuple[System, Callable[[int], int]]:
    """
    One equation T_i ≡ X per string.

    Args:
        strings: The non-empty input strings.

    Returns:
        tuple: the system, and d(λ) = Σ|T_i| - r·λ, the budget that admits a common subsequence of length λ.
    """
    assert strings, "at least one string is required"
    system = System.from_tokens([(s, ["X"]) for s in strings])
    return system, partial(lcs_budget, sum(len(s) for s in strings), len(strings))


def gen_from_lcs_single(strings: Sequence[SymbolString], d: int) -> System:
    """
    The single equation P T_1 P T_2 ... P T_r ≡ X X ... X with P = $^d.

    Args:
        strings: The non-empty input strings.
        d (int): Deletion budget, also the length of the $ prefix.

    Returns:
        System: satisfiable with d deletions iff the strings have an LCS of length (Σ|T_i| - d) / r.
    """
    assert strings, "at least one string is required"
    assert d >= 0, f"deletion budget must be non-negative, got {d}"
    if any(DOLLAR in s for s in strings):
        raise LabelClash(f"input strings must not contain the padding symbol {DOLLAR}")
    target = [token for s in strings for token in [DOLLAR] * d + list(s)]
    return System.from_tokens([(target, ["X"] * len(strings))], deletion_budget=d)


def clique_oracle(g: Graph, kappa: int) -> bool:
    """Does g have κ pairwise adjacent vertices? Searches the maximal cliques."""
    return any(len(clique) >= kappa for clique in nx.find_cliques(g.to_networkx()))


def mcc_oracle(g: Graph, kappa: int) -> bool:
    """Exhaustive: is there one vertex per color 1..κ with all pairs adjacent?"""
    if g.coloring is None:
        raise NotColored("mcc_oracle needs a vertex coloring")
    classes = [g.color_class(color) for color in range(1, kappa + 1)]
    return any(
        all(g.has_edge(u, v) for u, v in itertools.combinations(choice, 2))
        for choice in itertools.product(*classes)
    )


def _vertex_of(g: Graph, value: SymbolString, block: str) -> str:
    if len(value) != 1 or value[0] not in g.labels:
        raise DecodeFailure(f"block {block} should hold a single vertex, got {' '.join(value) or 'ε'}")
    return value[0]


def decode(output: ReductionOutput, assignment: Assignment) -> set[str]:
    """
    Read the selected vertices out of a satisfying assignment.

    Args:
        output (ReductionOutput): The generated instance.
        assignment (Assignment): A witness satisfying output.system.

    Returns:
        set[str]: the labels of the selected vertices.
    """
    g = output.graph
    selectors: dict[int, list[str]] = {}
    for block, role in output.decode_map.items():
        kind, _, index = role.partition(":")
        if kind == "vertex":
            selectors.setdefault(int(index.split(":")[0]), []).append(block)
    if not selectors:
        raise DecodeFailure(f"{output.construction} has no vertex selector blocks")

    vertices = set()
    for i in sorted(selectors):
        values = {tuple(assignment[block]) for block in selectors[i] if block in assignment}
        if len(values) != 1:
            raise DecodeFailure(f"vertex selectors of position {i} disagree or are missing: {sorted(values)}")
        value = values.pop()
        if output.construction == CLIQUE_MIXED:
            if not 1 <= len(value) <= g.n or list(value) != pre(g, len(value)):
                raise DecodeFailure(f"X{i} = {' '.join(value)} is not pre(v) for any vertex")
            vertices.add(g.label(len(value)))
        else:
            vertices.add(_vertex_of(g, value, selectors[i][0]))
    return vertices
