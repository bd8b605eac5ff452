"""Brute-force reference checks for the combinatorial layer.

Exponential in the vertex count; meant for cross-checking the pebble game
on small graphs (<= 6 vertices is instant, <= 10 is still fine).
"""

from __future__ import annotations

from itertools import combinations

from .graphs import Graph


def induced_edge_count(g: Graph, vs: frozenset[int]) -> int:
    return sum(1 for u, v in g.edges if u in vs and v in vs)


def brute_is_sparse(g: Graph) -> bool:
    """Check |E'| <= 2|V'| - 3 on every vertex subset of size >= 2."""
    verts = g.sorted_vertices()
    for size in range(2, len(verts) + 1):
        for sub in combinations(verts, size):
            vs = frozenset(sub)
            if induced_edge_count(g, vs) > 2 * size - 3:
                return False
    return True


def brute_is_tight(g: Graph) -> bool:
    if g.n_vertices == 1:
        return g.n_edges == 0
    return g.n_edges == 2 * g.n_vertices - 3 and brute_is_sparse(g)


def brute_spanned_sets(g: Graph) -> list[frozenset[int]]:
    """All vertex sets of tight subgraphs of a sparse graph.

    In a sparse graph these are exactly the subsets with the extremal
    induced edge count (such subsets are automatically connected).
    """
    out = []
    verts = g.sorted_vertices()
    for size in range(2, len(verts) + 1):
        for sub in combinations(verts, size):
            vs = frozenset(sub)
            if induced_edge_count(g, vs) == 2 * size - 3:
                out.append(vs)
    return out


def brute_max_tight_parts(g: Graph) -> list[tuple[frozenset[int], frozenset[tuple[int, int]]]]:
    """Inclusion-maximal tight subgraphs plus single-vertex parts.

    Mirrors the shape of TightDecomposition.parts, including its ordering.
    """
    spanned = brute_spanned_sets(g)
    maximal = [vs for vs in spanned if not any(vs < other for other in spanned)]
    parts = []
    covered: set[int] = set()
    for vs in maximal:
        es = frozenset(e for e in g.edges if e[0] in vs and e[1] in vs)
        parts.append((vs, es))
        covered |= vs
    parts.sort(key=lambda p: min(p[1]))
    for v in sorted(g.vertices - covered):
        parts.append((frozenset([v]), frozenset()))
    return parts
