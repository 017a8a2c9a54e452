"""Exhaustive enumeration of spanning diverging forests with exact weights.

This is the ground truth every linear-algebra identity is checked against on
small digraphs.  Enumeration walks all arc subsets and keeps the diverging
forests, so it is exponential by design; the guards below keep it at desk
scale where that is still instant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .digraph import Arc, Digraph, source_knots

MAX_VERTICES = 8
MAX_ARCS = 24


@dataclass(frozen=True, eq=False)
class SpanningForest:
    """A spanning diverging forest: indegree <= 1 everywhere, no circuits.

    ``tree_assignment`` maps every vertex to the root of its tree; roots map
    to themselves.  The weight is the product of the arc weights (1 for the
    empty forest).
    """

    arcs: tuple[Arc, ...]
    roots: frozenset[int]
    tree_assignment: dict[int, int]
    weight: Fraction

    @property
    def arc_pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((a.tail, a.head) for a in self.arcs)

    @property
    def tree_count(self) -> int:
        return len(self.roots)


@dataclass(frozen=True, eq=False)
class ForestSet:
    """All spanning diverging forests of a digraph, grouped by arc count."""

    n: int
    by_arc_count: dict[int, tuple[SpanningForest, ...]]

    @property
    def max_arc_count(self) -> int:
        return max(self.by_arc_count)

    @property
    def dimension(self) -> int:
        """Tree count of the maximum forests (minimum over all forests)."""
        return self.n - self.max_arc_count

    def forests(self, k: int) -> tuple[SpanningForest, ...]:
        return self.by_arc_count.get(k, ())

    def all_forests(self) -> tuple[SpanningForest, ...]:
        return tuple(
            f for k in sorted(self.by_arc_count) for f in self.by_arc_count[k]
        )

    def sigma(self, k: int) -> Fraction:
        """Total weight of the k-arc forests; zero for an empty class."""
        return sum((f.weight for f in self.forests(k)), Fraction(0))

    @property
    def sigma_total(self) -> Fraction:
        return sum((self.sigma(k) for k in self.by_arc_count), Fraction(0))


def classify_forest(n: int, arcs: tuple[Arc, ...]) -> SpanningForest | None:
    """Return the SpanningForest for an arc subset, or None if it is not one."""
    parent: dict[int, int] = {}
    weight = Fraction(1)
    for a in arcs:
        if a.head in parent:
            return None
        parent[a.head] = a.tail
        weight *= a.weight
    assignment: dict[int, int] = {}
    for v in range(1, n + 1):
        chain = []
        u = v
        while u not in assignment:
            if u in chain:
                return None
            chain.append(u)
            if u in parent:
                u = parent[u]
            else:
                assignment[u] = u
        root = assignment[u]
        for c in chain:
            assignment[c] = root
    roots = frozenset(v for v in range(1, n + 1) if assignment[v] == v)
    return SpanningForest(arcs, roots, assignment, weight)


@lru_cache(maxsize=None)
def enumerate_out_forests(g: Digraph, limit: int = MAX_VERTICES) -> ForestSet:
    """Enumerate every spanning diverging forest of g, grouped by arc count."""
    if g.n > limit:
        raise ValueError(f"enumeration limited to {limit} vertices, got {g.n}")
    if len(g.arcs) > MAX_ARCS:
        raise ValueError(f"enumeration limited to {MAX_ARCS} arcs, got {len(g.arcs)}")
    arcs = g.arcs
    grouped: dict[int, list[SpanningForest]] = {}
    for mask in range(1 << len(arcs)):
        subset = tuple(arcs[b] for b in range(len(arcs)) if mask >> b & 1)
        forest = classify_forest(g.n, subset)
        if forest is not None:
            grouped.setdefault(len(subset), []).append(forest)
    return ForestSet(g.n, {k: tuple(v) for k, v in grouped.items()})


def forest_matrix(fs: ForestSet, k: int) -> list[list[Fraction]]:
    """Exact matrix of k-arc forests: entry (i, j) sums the weights of the
    forests in which j lies in the tree diverging from i."""
    if k < 0 or k > fs.max_arc_count:
        raise ValueError(f"no forests with {k} arcs (max {fs.max_arc_count})")
    q = [[Fraction(0)] * fs.n for _ in range(fs.n)]
    for forest in fs.forests(k):
        for j, root in forest.tree_assignment.items():
            q[root - 1][j - 1] += forest.weight
    return q


def normalized_forest_matrix(fs: ForestSet) -> list[list[Fraction]]:
    """Exact normalized matrix over all forests: (i, j) entry is the weight of
    forests where i roots j's tree, divided by the total forest weight."""
    total = fs.sigma_total
    q = [[Fraction(0)] * fs.n for _ in range(fs.n)]
    for forest in fs.all_forests():
        for j, root in forest.tree_assignment.items():
            q[root - 1][j - 1] += forest.weight
    return [[x / total for x in row] for row in q]


def extend_path_to_forest(g: Digraph, path: tuple[int, ...], f_max: SpanningForest) -> SpanningForest:
    """Merge a path into a maximum out-forest without breaking forestness.

    Joins the path arcs with the forest and drops every forest arc that
    enters a path vertex without being a path arc.  The result contains the
    whole path, is rooted at the path start, and loses at most one arc
    relative to the maximum.
    """
    if not path:
        raise ValueError("path must contain at least one vertex")
    if len(set(path)) != len(path):
        raise ValueError("path vertices must be distinct")
    for v in path:
        if not (1 <= v <= g.n):
            raise ValueError(f"vertex id out of range 1..{g.n}: {v}")
    path_arcs = []
    for tail, head in zip(path, path[1:]):
        if not g.has_arc(tail, head):
            raise ValueError(f"({tail}, {head}) is not an arc of the digraph")
        path_arcs.append(Arc(tail, head, g.weight_of(tail, head)))
    max_size = g.n - source_knots(g).d_prime
    if classify_forest(g.n, f_max.arcs) is None or any(
        g.weight_of(a.tail, a.head) != a.weight for a in f_max.arcs
    ):
        raise ValueError("f_max is not a forest of this digraph")
    if len(f_max.arcs) != max_size:
        raise ValueError(f"f_max must have {max_size} arcs, got {len(f_max.arcs)}")
    on_path = set(path)
    kept = [a for a in f_max.arcs if a.head not in on_path]
    merged = tuple(sorted(set(kept) | set(path_arcs), key=lambda a: (a.tail, a.head)))
    result = classify_forest(g.n, merged)
    if result is None:
        raise AssertionError("path extension produced a non-forest")
    return result
