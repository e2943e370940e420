"""Tests for the half-edge graph representation."""

import pytest

from feyncut.core.errors import (
    BadEdgePartError,
    BridgedSubgraphError,
    GraphError,
    NoSuchEdgeError,
    NonPartitionError,
    SmallCorollaError,
)
from feyncut.core.graph import Graph


def inserted_self_energy() -> Graph:
    """Two-point graph whose edge 0-2-3-1 carries a one-loop bubble on e2, e3."""
    return Graph.from_edges([(0, 2), (2, 3), (2, 3), (3, 1), (0, 1)], legs=[0, 1])


class TestGraphConstruction:
    """Test cases for building and validating graphs."""

    def test_from_edges_counts(self, triangle):
        """Test vertex, edge, leg and loop counts of the triangle."""
        assert triangle.n_vertices == 3
        assert triangle.n_edges == 3
        assert triangle.n_legs == 3
        assert triangle.loops == 1
        assert triangle.is_connected()

    def test_from_edges_names(self, dunce):
        """Test generated edge and leg names."""
        assert dunce.edge_names == ('e1', 'e2', 'e3', 'e4')
        assert dunce.legs == ('l1', 'l2', 'l3', 'l4')
        assert dunce.endpoints['e1'] == (0, 2)
        assert dunce.legs_at(0) == [1, 2]

    def test_small_corolla_rejected(self):
        """Test that a corolla with two half-edges is rejected."""
        with pytest.raises(SmallCorollaError, match="has 2 half-edges"):
            Graph([['a', 'b']], {}, ['a', 'b'])

    def test_small_corolla_allowed_when_not_strict(self):
        """Test that non-strict graphs accept small corollas."""
        graph = Graph([['a', 'b']], {}, ['a', 'b'], strict=False)
        assert graph.valence(0) == 2

    def test_half_edge_in_two_corollas(self):
        """Test that a half-edge shared by two corollas is rejected."""
        with pytest.raises(NonPartitionError, match="appears in two corollas"):
            Graph([['a', 'b', 'c'], ['c', 'd', 'e']], {}, ['a', 'b', 'c', 'd', 'e'])

    def test_partitions_disagree(self):
        """Test that a half-edge missing from the edge partition is rejected."""
        with pytest.raises(NonPartitionError, match="disagree"):
            Graph([['a', 'b', 'c']], {}, ['a', 'b'])

    def test_graph_errors_are_value_errors(self):
        """Test the exception hierarchy."""
        assert issubclass(SmallCorollaError, GraphError)
        assert issubclass(GraphError, ValueError)

    def test_description_round_trip(self, dunce):
        """Test that the JSON description rebuilds the same graph."""
        assert Graph.from_description(dunce.to_description()) == dunce

    def test_description_with_masses(self):
        """Test that edge masses survive serialization."""
        graph = Graph.from_edges([(0, 1), (0, 1)], legs=[0, 0, 1, 1], masses={0: 'm'})
        rebuilt = Graph.from_description(graph.to_description())
        assert rebuilt.masses == {'e1': 'm'}

    def test_description_bad_edge_part(self):
        """Test that an edge part with three half-edges is rejected."""
        description = {
            'vertices': [['a', 'b', 'c'], ['d', 'e', 'f']],
            'edges': [['a', 'b', 'd']],
            'externals': ['c', 'e', 'f'],
        }
        with pytest.raises(BadEdgePartError, match="more than two"):
            Graph.from_description(description)

    def test_description_halfedges_mismatch(self):
        """Test that a wrong halfedges list is rejected."""
        description = {
            'halfedges': ['a', 'b'],
            'vertices': [['a', 'b', 'c']],
            'edges': [],
            'externals': ['a', 'b', 'c'],
        }
        with pytest.raises(NonPartitionError, match="halfedges list"):
            Graph.from_description(description)


class TestGraphStructure:
    """Test cases for structural queries."""

    def test_bridges(self):
        """Test that the edge between two self-loops is a bridge."""
        dumbbell = Graph.from_edges([(0, 0), (0, 1), (1, 1)], legs=[0, 1])
        assert dumbbell.bridges == frozenset({'e2'})
        assert not dumbbell.is_bridgeless()

    def test_parallel_edges_are_not_bridges(self, dunce):
        """Test that multi-edges do not count as bridges."""
        assert dunce.is_bridgeless()

    def test_self_loop(self, self_loop):
        """Test self-loop detection and loop count."""
        assert self_loop.is_self_loop('e1')
        assert self_loop.loops == 1
        assert self_loop.valence(0) == 4

    def test_networkx_view(self, dunce):
        """Test that the networkx view keys edges by name."""
        view = dunce.to_networkx()
        assert view.number_of_edges() == 4
        assert view.has_edge(1, 2, key='e3')

    def test_subgraph_keeps_full_corollas(self, dunce):
        """Test that other half-edges of touched corollas become legs."""
        sub = dunce.subgraph(['e3', 'e4'])
        assert sub.n_vertices == 2
        assert sub.n_legs == 4
        assert sub.loops == 1

    def test_delete_edges(self, triangle):
        """Test that deleting an edge adds two legs."""
        cut = triangle.delete_edges(['e1'])
        assert cut.n_edges == 2
        assert cut.n_legs == 5
        assert cut.loops == 0

    def test_unknown_edge(self, triangle):
        """Test that unknown edge names are rejected."""
        with pytest.raises(NoSuchEdgeError, match="e9"):
            triangle.delete_edges(['e9'])

    def test_zero_momentum_legs(self, sunset):
        """Test that a leg is added only at legless vertices."""
        graph = Graph.from_edges([(0, 1), (0, 1), (0, 1)], legs=[0])
        augmented = graph.add_zero_momentum_legs()
        assert augmented.n_legs == 2
        assert augmented.legs_at(1) == [2]
        assert sunset.add_zero_momentum_legs() == sunset


class TestContraction:
    """Test cases for contraction and elision."""

    def test_contract_single_edge(self, triangle):
        """Test contracting one triangle edge gives a three-leg bubble."""
        contracted = triangle.contract('e1')
        assert contracted.n_vertices == 2
        assert contracted.n_edges == 2
        assert contracted.n_legs == 3

    def test_contract_subgraph(self, dunce):
        """Test that the co-graph of the bubble in the Dunce's cap is a bubble."""
        co = dunce.contract_subgraph(['e3', 'e4'])
        assert co.n_vertices == 2
        assert sorted(co.edges) == ['e1', 'e2']
        assert co.loops == 1

    def test_bridged_subgraph_rejected(self, triangle):
        """Test that contracting a single tree edge as a subgraph is rejected."""
        with pytest.raises(BridgedSubgraphError, match="has bridges"):
            triangle.contract_subgraph(['e1'])

    def test_elision_merges_edges(self):
        """Test that a 2-valent vertex left by contraction is elided."""
        graph = inserted_self_energy()
        result = graph.contract_with_origins(['e2', 'e3'])
        assert result.graph.n_vertices == 2
        assert sorted(result.graph.edges) == ['e1', 'e5']
        assert result.origins['e1'] == frozenset({'e1', 'e4'})
        assert len(result.elided['e1']) == 1

    def test_contract_raw_preserves_names(self):
        """Test that raw contraction keeps a 2-valent vertex and every edge name."""
        graph = inserted_self_energy()
        raw = graph.contract_raw(['e2', 'e3'])
        assert sorted(raw.edges) == ['e1', 'e4', 'e5']
        assert raw.n_vertices == 3
