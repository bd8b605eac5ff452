"""Graph and length containers: parsing, catalogs, sampling."""

from fractions import Fraction

import pytest

from rigidity2d.graphs import (EdgeLengths, ValidationError, catalog,
                               catalog_names, edge_key, induced_subgraph,
                               make_graph, make_realization, parse_graph,
                               parse_lengths, realization_residual,
                               sample_lengths, serialize_graph,
                               serialize_lengths)


def test_edge_key_orders_endpoints():
    assert edge_key(3, 1) == (1, 3)
    assert edge_key(1, 3) == (1, 3)
    with pytest.raises(ValidationError):
        edge_key(2, 2)


def test_make_graph_rejects_bad_labels():
    with pytest.raises(ValidationError):
        make_graph([0, 1], [[0, 2]])          # edge endpoint not a vertex
    with pytest.raises(ValidationError):
        make_graph([0, 1, 2], [[0, 1]], base_edge=(0, 2))  # not an edge
    with pytest.raises(ValidationError):
        make_graph([0, 1, 2], [[0, 1]], coupler_vertex=9)


def test_parse_serialize_round_trip():
    g = catalog("fig_coupler")
    again = parse_graph(serialize_graph(g))
    assert again.vertices == g.vertices
    assert again.edges == g.edges
    assert again.base_edge == g.base_edge
    assert again.coupler_vertex == g.coupler_vertex


def test_parse_graph_rejects_unknown_keys():
    with pytest.raises(ValidationError):
        parse_graph('{"vertices": [0, 1], "edges": [[0, 1]], "extra": 1}')
    with pytest.raises(ValidationError):
        parse_graph("not json")
    with pytest.raises(ValidationError):
        parse_graph('[1, 2]')


def test_catalog_is_closed_under_names():
    for name in catalog_names():
        g = catalog(name)
        assert g.n_vertices >= 1
    with pytest.raises(ValidationError):
        catalog("no_such_graph")


def test_catalog_figure_graphs_have_roles():
    for name in ("fig_coupler", "fig_main1", "fig_main2", "fig_split_H",
                 "fig_split_C5", "fig_split_G", "L", "R", "C_v"):
        g = catalog(name)
        assert g.base_edge == (1, 2)
        assert g.coupler_vertex == 0
    # the unlabeled ones really are unlabeled
    for name in ("triangle", "fig_mr", "fig_codim_G"):
        g = catalog(name)
        assert g.base_edge is None


def test_induced_subgraph_keeps_only_inside_edges():
    g = catalog("fig_coupler")
    sub = induced_subgraph(g, [0, 3, 4])
    assert sub.vertices == frozenset([0, 3, 4])
    assert sub.edges == frozenset([(0, 3), (0, 4), (3, 4)])


def test_lengths_round_trip_and_domain():
    g = catalog("triangle")
    lam = EdgeLengths({(1, 2): Fraction(1), (1, 3): Fraction(5, 4),
                       (2, 3): Fraction(2)})
    again = parse_lengths(serialize_lengths(lam), g)
    assert again.values == lam.values
    with pytest.raises(ValidationError):
        # missing an edge of the triangle
        parse_lengths('{"lengths": {"1-2": "1"}}', g)
    with pytest.raises(ValidationError):
        parse_lengths('{"lengths": {"2-1": "1"}}')   # non-canonical key
    with pytest.raises(ValidationError):
        parse_lengths('{"lengths": {"1-2": "x"}}')


def test_sample_lengths_is_deterministic_and_normalized():
    g = catalog("fig_coupler")
    a = sample_lengths(g, 7)
    b = sample_lengths(g, 7)
    assert a.values == b.values
    assert sample_lengths(g, 8).values != a.values
    # base edge length is normalized to 1 for graphs that declare one
    assert a.values[(1, 2)] == 1


def test_realization_residual_vanishes_on_exact_points():
    g = catalog("triangle")
    lam = EdgeLengths({(1, 2): Fraction(1), (1, 3): Fraction(1),
                       (2, 3): Fraction(1)})
    pts = {1: (0.0 + 0j, 0.0 + 0j), 2: (1.0 + 0j, 0.0 + 0j),
           3: (0.5 + 0j, 3 ** 0.5 / 2 + 0j)}
    assert realization_residual(g, lam, pts) < 1e-12
    r = make_realization(g, lam, pts)
    assert r.max_residual < 1e-12
    bad = dict(pts)
    bad[3] = (2.0 + 0j, 2.0 + 0j)
    # the residual is recorded, not policed; consumers check it
    assert make_realization(g, lam, bad).max_residual > 1
    with pytest.raises(ValidationError):
        make_realization(g, lam, {1: pts[1]})    # missing vertices
