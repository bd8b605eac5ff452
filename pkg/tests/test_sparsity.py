"""Pebble game vs exhaustive subgraph counting, decompositions, Henneberg."""

import itertools
import random

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from rigidity2d.bruteforce import (brute_is_sparse, brute_is_tight,
                                   brute_max_tight_parts)
from rigidity2d.graphs import ValidationError, catalog, catalog_names, make_graph
from rigidity2d.sparsity import (henneberg_sequence, is_sparse, is_tight,
                                 max_tight_decomposition, replay_henneberg)


def random_graph(rng, n_max=6):
    n = rng.randint(2, n_max)
    vertices = list(range(n))
    pairs = list(itertools.combinations(vertices, 2))
    m = rng.randint(0, len(pairs))
    return make_graph(vertices, rng.sample(pairs, m))


def test_catalog_sparsity_facts():
    # every shipped graph is sparse
    for name in catalog_names():
        assert is_sparse(catalog(name)), name
    tight = {"triangle", "fig_mr", "fig_main2", "fig_split_G", "fig_split_H",
             "fig_split_C5", "L", "R", "C_v", "fig_m_left", "fig_m_right",
             "fig_real", "fig_codim_G", "fig_coupler"}
    expected_tight = {"triangle", "fig_mr", "fig_split_G"}
    for name in sorted(tight):
        assert is_tight(catalog(name)) == (name in expected_tight), name


def test_k4_is_not_sparse():
    k4 = make_graph(range(4), itertools.combinations(range(4), 2))
    assert not is_sparse(k4)
    assert not is_tight(k4)
    with pytest.raises(ValidationError):
        max_tight_decomposition(k4)


def test_single_vertex_and_edge():
    assert is_tight(make_graph([5], []))
    assert is_tight(make_graph([0, 1], [[0, 1]]))
    dec = max_tight_decomposition(make_graph([0, 1], [[0, 1]]))
    assert dec.n_parts == 1
    assert dec.parts[0][1] == frozenset([(0, 1)])


@given(st.integers(0, 10 ** 9))
@settings(max_examples=300, deadline=None)
def test_pebble_game_matches_brute_force(seed):
    rng = random.Random(seed)
    g = random_graph(rng)
    assert is_sparse(g) == brute_is_sparse(g)
    assert is_tight(g) == brute_is_tight(g)


def test_decomposition_invariants_on_random_graphs():
    rng = random.Random(4242)
    checked = 0
    while checked < 120:
        g = random_graph(rng)
        if not is_sparse(g):
            continue
        checked += 1
        dec = max_tight_decomposition(g)
        # edge sets partition E
        seen = set()
        for _, es in dec.parts:
            assert not (seen & es)
            seen |= es
        assert seen == g.edges
        # vertex sets cover V
        covered = set()
        for vs, _ in dec.parts:
            covered |= vs
        assert covered == g.vertices
        # each part with edges is tight
        from rigidity2d.graphs import induced_subgraph
        for vs, es in dec.parts:
            if es:
                assert is_tight(induced_subgraph(g, vs))
        # indices map back to the right parts
        for e, i in dec.indices.items():
            assert e in dec.parts[i][1]


def test_decomposition_matches_brute_force_maximality():
    rng = random.Random(99)
    checked = 0
    while checked < 60:
        g = random_graph(rng)
        if not is_sparse(g) or g.n_edges == 0:
            continue
        checked += 1
        got = sorted((tuple(sorted(vs)), tuple(sorted(es)))
                     for vs, es in max_tight_decomposition(g).parts if es)
        want = sorted((tuple(sorted(vs)), tuple(sorted(es)))
                      for vs, es in brute_max_tight_parts(g))
        assert got == want


def test_fig_coupler_decomposition_from_figure():
    dec = max_tight_decomposition(catalog("fig_coupler"))
    vertex_sets = sorted(tuple(sorted(vs)) for vs, es in dec.parts if es)
    assert vertex_sets == [(0, 3, 4), (1, 2), (1, 3), (2, 4)]


def test_fig_main1_decomposition_has_eight_parts():
    dec = max_tight_decomposition(catalog("fig_main1"))
    assert dec.n_parts == 8
    vertex_sets = sorted(tuple(sorted(vs)) for vs, _ in dec.parts)
    assert (0, 6, 8, 9) in vertex_sets
    assert (1, 2, 3, 4) in vertex_sets
    singles = [vs for vs in vertex_sets if len(vs) == 2]
    assert sorted(singles) == [(1, 7), (3, 5), (4, 6), (5, 6), (5, 7), (7, 8)]


def test_henneberg_replay_reconstructs_tight_graphs():
    rng = random.Random(7)
    replayed = 0
    while replayed < 40:
        g = random_graph(rng)
        seq = henneberg_sequence(g)
        if not is_tight(g) or g.n_vertices < 2:
            assert seq is None
            continue
        assert seq is not None
        rebuilt = replay_henneberg(seq)
        assert rebuilt.vertices == g.vertices
        assert rebuilt.edges == g.edges
        replayed += 1


def test_henneberg_known_lengths():
    assert len(henneberg_sequence(make_graph([0, 1], [[0, 1]])).steps) == 0
    assert len(henneberg_sequence(catalog("triangle")).steps) == 1
    assert len(henneberg_sequence(catalog("fig_mr")).steps) == 2
