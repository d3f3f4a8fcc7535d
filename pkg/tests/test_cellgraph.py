"""Unit tests for cell graphs, edge contraction, and the enumeration oracles."""

from fractions import Fraction

import pytest

from tqftrec.cellgraph import (
    CellGraph,
    all_matchings,
    count_arrowed_graphs,
    count_lattice_points,
    count_matchings_by_genus,
    eca_evaluate,
    eca_evaluate_all_orders,
)
from tqftrec.exact import BudgetError
from tqftrec.frobenius import omega_tqft, trivial_algebra
from tqftrec.groups import load_group, orbifold_frobenius


def one_vertex_loop():
    return CellGraph([2], [((1, 0), (1, 1))])


def crossing_loops():
    # two loops interleaved at one vertex: the genus-one graph
    return CellGraph(
        [4], [((1, 0), (1, 2)), ((1, 1), (1, 3))]
    )


def test_genus_by_face_tracing():
    assert one_vertex_loop().genus() == 0
    assert crossing_loops().genus() == 1
    nested = CellGraph([4], [((1, 0), (1, 1)), ((1, 2), (1, 3))])
    assert nested.genus() == 0


def test_connectivity():
    two = CellGraph([2, 2], [((1, 0), (1, 1)), ((2, 0), (2, 1))])
    assert not two.is_connected()
    bridge = CellGraph([1, 1], [((1, 0), (2, 0))])
    assert bridge.is_connected()


def test_odd_half_edges_rejected():
    with pytest.raises(ValueError):
        CellGraph([3], [((1, 0), (1, 1))])


def test_eca_matches_surface_amplitude_spot():
    A = orbifold_frobenius(load_group("builtin:Z3"))
    g = crossing_loops()
    for i in range(A.dim):
        vs = [A.basis(i)]
        assert eca_evaluate(g, A, vs) == omega_tqft(A, 1, 1, vs)


def test_all_orders_is_singleton():
    A = orbifold_frobenius(load_group("builtin:S3"))
    g = crossing_loops()
    vs = [A.basis(0)]
    vals = eca_evaluate_all_orders(g, A, vs)
    assert vals == {omega_tqft(A, 1, 1, vs)}


def test_all_orders_shared_memo_consistent():
    A = orbifold_frobenius(load_group("builtin:Z2"))
    memo = {}
    for g in (one_vertex_loop(), crossing_loops()):
        for i in range(A.dim):
            vs = [A.basis(i)]
            fresh = eca_evaluate_all_orders(g, A, vs)
            shared = eca_evaluate_all_orders(g, A, vs, memo)
            assert fresh == shared


def test_disconnected_graph_rejected_by_eca():
    A = trivial_algebra()
    two = CellGraph([2, 2], [((1, 0), (1, 1)), ((2, 0), (2, 1))])
    with pytest.raises(ValueError):
        eca_evaluate(two, A, [A.basis(0), A.basis(0)])


def test_arrowed_graph_counts_pinned():
    # one-vertex counts are the Catalan numbers interleaved by genus
    assert count_arrowed_graphs(0, 1, (2,)) == 1
    assert count_arrowed_graphs(0, 1, (4,)) == 2
    assert count_arrowed_graphs(0, 1, (6,)) == 5
    assert count_arrowed_graphs(1, 1, (4,)) == 1
    assert count_arrowed_graphs(1, 1, (6,)) == 10
    assert count_arrowed_graphs(0, 1, (3,)) == 0
    assert count_arrowed_graphs(0, 1, (0,)) == 1
    assert count_arrowed_graphs(1, 1, (0,)) == 0


def test_matchings_by_genus_totals():
    # all perfect matchings of 2k half-edges: (2k-1)!!
    counts = count_matchings_by_genus((6,))
    assert sum(counts.values()) == 15
    assert counts == {0: 5, 1: 10}


def test_all_matchings_enumerates_double_factorial():
    graphs = list(all_matchings((4,)))
    assert len(graphs) == 3


def test_half_edge_budget():
    with pytest.raises(BudgetError):
        count_matchings_by_genus((18,))


def test_lattice_catalog_values():
    # N_{1,1}: one 4-valent and one 6-valent topology on the torus
    assert count_lattice_points(1, 1, (4,)) == Fraction(1, 4)
    assert count_lattice_points(1, 1, (6,)) == Fraction(2, 3)
    assert count_lattice_points(0, 3, (1, 1, 2)) == 1


def test_lattice_catalog_scope():
    with pytest.raises(BudgetError):
        count_lattice_points(0, 4, (1, 1, 1, 1))


def test_cellgraph_serialization_round_trip():
    g = crossing_loops()
    h = CellGraph.from_json(g.to_json())
    assert h.degrees == g.degrees
    assert h.partner == g.partner
    assert h.genus() == g.genus()
