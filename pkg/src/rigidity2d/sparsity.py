"""(2,3)-sparsity via the pebble game, max-tight decomposition, Henneberg moves.

The pebble game state is a partial orientation of the graph.  Every vertex
starts with 2 pebbles; inserting an edge requires 4 pebbles on its endpoints
and consumes one from the tail.  The bookkeeping identity that everything
below leans on: for any vertex set S,

    pebbles(S) = 2|S| - |E(S)| - out(S)

where E(S) counts inserted edges inside S and out(S) counts directed edges
leaving S.  A set S with |E(S)| = 2|S| - 3 ("spanned": the vertex set of a
tight subgraph) is therefore exactly one with pebbles(S) + out(S) = 3.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Edge, Graph, ValidationError, edge_key, induced_subgraph


class _PebbleGame:
    def __init__(self, vertices):
        self.pebbles = {v: 2 for v in vertices}
        self.out: dict[int, set[int]] = {v: set() for v in vertices}

    def _path_to_pebble(self, start: int, blocked: tuple[int, int]) -> list[int] | None:
        """Depth-first search for a directed path to a free pebble.

        Vertices in ``blocked`` never count as pebble sources.  Returns the
        path as a vertex list, or None.  Deterministic: neighbors are
        visited in sorted order.
        """
        parent = {start: None}
        stack = [start]
        while stack:
            w = stack.pop()
            if w not in blocked and self.pebbles[w] > 0:
                path = [w]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                return path
            for x in sorted(self.out[w], reverse=True):
                if x not in parent:
                    parent[x] = w
                    stack.append(x)
        return None

    def _move_pebble_to(self, target: int, other: int) -> bool:
        """Try to bring one pebble onto ``target``, not stealing from ``other``."""
        path = self._path_to_pebble(target, blocked=(target, other))
        if path is None:
            return False
        # Reverse the path: the far end loses a pebble, the start gains one.
        self.pebbles[path[-1]] -= 1
        self.pebbles[target] += 1
        for a, b in zip(path, path[1:]):
            self.out[a].remove(b)
            self.out[b].add(a)
        return True

    def gather(self, u: int, v: int, target: int) -> bool:
        """Gather pebbles onto {u, v} until they hold ``target`` of them."""
        while self.pebbles[u] + self.pebbles[v] < target:
            if self.pebbles[u] < 2 and self._move_pebble_to(u, v):
                continue
            if self.pebbles[v] < 2 and self._move_pebble_to(v, u):
                continue
            return False
        return True

    def insert(self, u: int, v: int) -> bool:
        """Insert the edge {u, v} if the sparsity count allows it."""
        if not self.gather(u, v, 4):
            return False
        if self.pebbles[u] == 0:
            u, v = v, u
        self.pebbles[u] -= 1
        self.out[u].add(v)
        return True

    def spanned_region(self, u: int, v: int) -> frozenset[int]:
        """The maximal spanned vertex set containing the inserted edge {u, v}.

        Requires 3 pebbles gathered on {u, v} first (always possible after a
        successful insertion run on a sparse graph).  With those 3 in place,
        a vertex belongs to the region exactly when it cannot reach, along
        directed edges, any free pebble held outside {u, v}: such a set has
        no outgoing edges and carries exactly the 3 pebbles on {u, v}, which
        is the spanned condition, and every spanned superset of {u, v} is
        forced inside it.
        """
        if not self.gather(u, v, 3):
            raise AssertionError("cannot gather 3 pebbles on an edge of a sparse graph")
        # Reverse reachability: walk backwards from every free pebble
        # outside {u, v}.
        rev: dict[int, set[int]] = {w: set() for w in self.out}
        for w, outs in self.out.items():
            for x in outs:
                rev[x].add(w)
        escaped: set[int] = set()
        stack = [w for w in self.out if w not in (u, v) and self.pebbles[w] > 0]
        escaped.update(stack)
        while stack:
            w = stack.pop()
            for x in rev[w]:
                if x not in escaped:
                    escaped.add(x)
                    stack.append(x)
        return frozenset(w for w in self.out if w not in escaped)


def _played_game(g: Graph) -> _PebbleGame | None:
    """Insert all edges in lexicographic order; None if some insertion fails."""
    game = _PebbleGame(g.vertices)
    for u, v in g.sorted_edges():
        if not game.insert(u, v):
            return None
    return game


def is_sparse(g: Graph) -> bool:
    """True iff every subgraph on >= 2 vertices has at most 2|V'| - 3 edges."""
    return _played_game(g) is not None


def is_tight(g: Graph) -> bool:
    """Sparse with the extremal global count (or a single vertex)."""
    if g.n_vertices == 1:
        return g.n_edges == 0
    return g.n_edges == 2 * g.n_vertices - 3 and is_sparse(g)


@dataclass(frozen=True)
class TightDecomposition:
    """The unique partition of the edge set into maximal tight subgraphs.

    ``parts`` lists (vertex set, edge set) pairs; parts with edges come
    first, ordered lexicographically by their smallest edge, then
    single-vertex parts for isolated vertices, ordered by label.
    ``indices`` maps each edge to the index of its part.
    """

    parts: tuple[tuple[frozenset[int], frozenset[Edge]], ...]
    indices: dict[Edge, int]

    def part_graphs(self, g: Graph) -> list[Graph]:
        return [induced_subgraph(g, vs) for vs, _ in self.parts]

    @property
    def n_parts(self) -> int:
        return len(self.parts)


def max_tight_decomposition(g: Graph) -> TightDecomposition:
    """Compute the max-tight decomposition of a sparse graph.

    Each edge's part is the maximal spanned vertex set containing it, read
    off the finished pebble game; in a sparse graph a maximal tight
    subgraph is induced, so the part's edge set is the induced one.
    """
    game = _played_game(g)
    if game is None:
        raise ValidationError("graph is not (2,3)-sparse; no max-tight decomposition")
    region_of: dict[Edge, frozenset[int]] = {}
    regions: dict[frozenset[int], set[Edge]] = {}
    for e in g.sorted_edges():
        region = game.spanned_region(*e)
        region_of[e] = region
        regions.setdefault(region, set()).add(e)
    edge_parts = sorted(regions.items(), key=lambda item: min(item[1]))
    covered = set().union(*regions) if regions else set()
    isolated = sorted(g.vertices - covered)
    parts = tuple([(vs, frozenset(es)) for vs, es in edge_parts]
                  + [(frozenset([v]), frozenset()) for v in isolated])
    indices = {}
    for i, (_, es) in enumerate(parts):
        for e in es:
            indices[e] = i
    return TightDecomposition(parts, indices)


# ---------------------------------------------------------------------------
# Henneberg sequences.

@dataclass(frozen=True)
class HennebergStep:
    """One construction move.

    kind 0: new vertex ``vertex`` joined to ``attach`` = (v1, v2).
    kind 1: new vertex ``vertex`` joined to ``attach`` = (v1, v2, v3), with
    the previously present edge {v2, v3} removed (the removed edge is
    always between the last two attachment vertices).
    """

    kind: int
    vertex: int
    attach: tuple[int, ...]

    @property
    def removed_edge(self) -> Edge | None:
        if self.kind == 0:
            return None
        return edge_key(self.attach[1], self.attach[2])


@dataclass(frozen=True)
class HennebergSequence:
    start_edge: Edge
    steps: tuple[HennebergStep, ...]


def replay_henneberg(seq: HennebergSequence) -> Graph:
    """Apply the moves starting from the single start edge."""
    vertices = set(seq.start_edge)
    edges = {seq.start_edge}
    for step in seq.steps:
        if step.vertex in vertices:
            raise ValidationError("step reuses existing vertex %d" % step.vertex)
        if len(set(step.attach)) != len(step.attach) or any(a not in vertices for a in step.attach):
            raise ValidationError("invalid attachment %r" % (step.attach,))
        if step.kind == 1:
            removed = step.removed_edge
            if removed not in edges:
                raise ValidationError("removed edge %r is not present" % (removed,))
            edges.remove(removed)
        vertices.add(step.vertex)
        for a in step.attach:
            edges.add(edge_key(step.vertex, a))
    return Graph(frozenset(vertices), frozenset(edges))


def henneberg_sequence(g: Graph) -> HennebergSequence | None:
    """A certified construction of a tight graph from a single edge.

    Returns None when the graph is not tight or has fewer than 2 vertices.
    Reverse search: peel a degree-2 vertex greedily (always safe), else try
    every legal undo of a degree-3 vertex with backtracking.
    """
    if g.n_vertices < 2 or not is_tight(g):
        return None

    def reverse(graph: Graph) -> list[HennebergStep] | None:
        if graph.n_vertices == 2:
            return []
        # A tight graph has average degree < 4, so a vertex of degree 2 or 3
        # always exists; degree cannot drop below 2.
        for v in graph.sorted_vertices():
            if graph.degree(v) == 2:
                n1, n2 = graph.neighbors(v)
                smaller = induced_subgraph(graph, graph.vertices - {v})
                rest = reverse(smaller)
                if rest is None:
                    return None
                rest.append(HennebergStep(0, v, (n1, n2)))
                return rest
        for v in graph.sorted_vertices():
            if graph.degree(v) != 3:
                continue
            nbrs = graph.neighbors(v)
            stripped = induced_subgraph(graph, graph.vertices - {v})
            # Re-insert one edge among the three neighbors to undo a
            # 1-extension; not every choice keeps the graph tight, so
            # backtrack over all of them.
            for i in range(3):
                for j in range(i + 1, 3):
                    e = edge_key(nbrs[i], nbrs[j])
                    if e in stripped.edges:
                        continue
                    candidate = stripped.with_edges([e])
                    if not is_tight(candidate):
                        continue
                    rest = reverse(candidate)
                    if rest is None:
                        continue
                    others = [n for n in nbrs if n not in e]
                    rest.append(HennebergStep(1, v, (others[0], e[0], e[1])))
                    return rest
        return None

    steps = reverse(g)
    if steps is None:
        return None
    # The two vertices that survive the peeling form the start edge.
    remaining = set(g.vertices)
    for step in steps:
        remaining.discard(step.vertex)
    a, b = sorted(remaining)
    return HennebergSequence(edge_key(a, b), tuple(steps))
