# tests/conftest.py
import itertools

import pytest

from string_equations.core import System
from string_equations.reductions import Graph

FIXTURES = "tests/fixtures"


@pytest.fixture
def fixtures_path() -> str:
    return FIXTURES


@pytest.fixture
def fig1_system() -> System:
    return System.from_tokens(
        [
            ("a b c a b".split(), ["A", "B"]),
            ("a b c d a b c d".split(), ["A", "C", "A", "C"]),
            ("a b d".split(), ["B", "C"]),
        ]
    )


@pytest.fixture
def fig1_witness() -> dict[str, tuple[str, ...]]:
    return {"A": ("a", "b", "c"), "B": ("a", "b"), "C": ("d",)}


@pytest.fixture
def fig2_graph() -> Graph:
    """Vertices a b c d with edges ab ac bc bd cd: triangles abc and bcd."""
    return Graph(n=4, edges=((1, 2), (1, 3), (2, 3), (2, 4), (3, 4)), labels=tuple("abcd"))


@pytest.fixture
def fig2_colored_graph() -> Graph:
    """Edges ac ad bc bd cd; a, b red, c green, d blue."""
    return Graph(n=4, edges=((1, 3), (1, 4), (2, 3), (2, 4), (3, 4)), labels=tuple("abcd"), coloring=(1, 1, 2, 3))


@pytest.fixture
def k3() -> Graph:
    return Graph(n=3, edges=((1, 2), (1, 3), (2, 3)))


@pytest.fixture
def k4() -> Graph:
    return Graph(n=4, edges=tuple(itertools.combinations(range(1, 5), 2)))


@pytest.fixture
def c5() -> Graph:
    return Graph(n=5, edges=((1, 2), (2, 3), (3, 4), (4, 5), (1, 5)))


@pytest.fixture
def edgeless() -> Graph:
    return Graph(n=3)
