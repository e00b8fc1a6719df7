"""Shared fixtures for the certifier test suite.

Fixtures are small named graphs and the two desk-scale extremal
families, built once per test through the public constructors so that
every module is tested on the same inputs.
"""

from __future__ import annotations

import pytest

from certifier.config import resolve_tolerances
from certifier.graph import (
    FamilySpec,
    build_family,
    cycle_graph,
    make_complete,
    path_graph,
    star_graph,
)


@pytest.fixture
def k4():
    return make_complete(4)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def c6():
    return cycle_graph(6)


@pytest.fixture
def p5():
    return path_graph(5)


@pytest.fixture
def claw():
    """K_{1,3}."""
    return star_graph(3)


@pytest.fixture
def fke_extremal_a():
    """K_2 ∨ (K_8 ∪ K_1), the n=11, k=1 extremal graph."""
    return build_family(FamilySpec("fke-extremal-a", 11, k=1))


@pytest.fixture
def tree_extremal():
    """K_1 ∨ (K_14 ∪ K_1), the n=16, d=4 extremal graph."""
    return build_family(FamilySpec("tree-extremal", 16, d=4))


@pytest.fixture
def tolerances():
    return resolve_tolerances()
