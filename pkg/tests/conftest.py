"""Shared test corpus: every 3-vertex digraph plus seeded random digraphs."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from forestcalc import Digraph

THREE_VERTEX_PAIRS = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))
RANDOM_SHAPES = ((4, 5), (4, 7), (5, 8), (5, 10), (6, 10), (6, 13))
WEIGHT_CHOICES = (Fraction(1, 2), Fraction(1), Fraction(2))
SEED = 20240817


def all_three_vertex_digraphs() -> list[Digraph]:
    graphs = []
    for mask in range(1 << len(THREE_VERTEX_PAIRS)):
        arcs = [THREE_VERTEX_PAIRS[b] for b in range(len(THREE_VERTEX_PAIRS)) if mask >> b & 1]
        graphs.append(Digraph.build(3, arcs))
    return graphs


def random_arc_sets() -> list[tuple[int, list[tuple[int, int]]]]:
    rng = random.Random(SEED)
    out = []
    for n, m in RANDOM_SHAPES:
        pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
        for _ in range(2):
            out.append((n, sorted(rng.sample(pairs, m))))
    return out


def random_weighted_digraphs() -> list[Digraph]:
    rng = random.Random(SEED + 1)
    graphs = []
    for n, arcs in random_arc_sets():
        weighted = [(i, j, rng.choice(WEIGHT_CHOICES)) for (i, j) in arcs]
        graphs.append(Digraph.build(n, weighted))
    return graphs


def random_unit_digraphs() -> list[Digraph]:
    return [Digraph.build(n, arcs) for n, arcs in random_arc_sets()]


@pytest.fixture(scope="session")
def three_vertex_corpus() -> list[Digraph]:
    return all_three_vertex_digraphs()


@pytest.fixture(scope="session")
def corpus(three_vertex_corpus) -> list[Digraph]:
    return three_vertex_corpus + random_weighted_digraphs() + random_unit_digraphs()


@pytest.fixture(scope="session")
def small_corpus(three_vertex_corpus) -> list[Digraph]:
    """Corpus members small enough for path-by-path exhaustive arguments."""
    extra = [g for g in random_weighted_digraphs() + random_unit_digraphs() if g.n <= 5]
    return three_vertex_corpus + extra


@pytest.fixture
def p3() -> Digraph:
    return Digraph.build(3, [(1, 2), (2, 3)])


@pytest.fixture
def cycle2() -> Digraph:
    return Digraph.build(2, [(1, 2), (2, 1)])


@pytest.fixture
def cycle3() -> Digraph:
    return Digraph.build(3, [(1, 2), (2, 3), (3, 1)])


@pytest.fixture
def two_sources() -> Digraph:
    return Digraph.build(3, [(1, 3), (2, 3)])


@pytest.fixture
def fan_out() -> Digraph:
    return Digraph.build(3, [(3, 1), (3, 2)])


@pytest.fixture
def edgeless4() -> Digraph:
    return Digraph.build(4, [])
