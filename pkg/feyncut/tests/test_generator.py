"""Tests for graph enumeration."""

import pytest

from feyncut.core.forests import spt
from feyncut.core.generator import GraphGenerator, enumerate_graphs, graphs_by_loop_order


class TestGraphGenerator:
    """Test cases for the graph generator."""

    def test_small_valence_rejected(self):
        """Test that two-valent vertices are rejected."""
        with pytest.raises(ValueError, match="at least 3"):
            GraphGenerator(degrees=(2, 3))

    def test_degree_sequences(self):
        """Test valence multisets for two legs at one loop."""
        generator = GraphGenerator(degrees=(3, 4))
        assert generator.degree_sequences(2, 1) == [(4,), (3, 3)]

    def test_phi4_tadpole(self):
        """Test the single one-loop two-point graph with quartic vertices."""
        graphs = enumerate_graphs(2, 1, degrees=(4,))
        assert len(graphs) == 1
        graph, aut = graphs[0]
        assert graph.n_vertices == 1
        assert aut == 2

    def test_phi4_four_point_channels(self):
        """Test that labelled legs give the three bubble channels."""
        graphs = enumerate_graphs(4, 1, degrees=(4,))
        assert len(graphs) == 3
        assert all(aut == 2 for _, aut in graphs)

    def test_phi3_triangle(self):
        """Test the one-loop three-point graph with cubic vertices."""
        graphs = enumerate_graphs(3, 1, degrees=(3,))
        assert len(graphs) == 1
        graph, aut = graphs[0]
        assert spt(graph) == 3
        assert aut == 1

    def test_results_are_bridgeless_and_connected(self):
        """Test that every generated graph is a connected bridgeless graph."""
        for graph, _ in enumerate_graphs(2, 2, degrees=(3, 4)):
            assert graph.is_connected()
            assert graph.is_bridgeless()
            assert graph.n_legs == 2

    def test_threads_give_same_result(self):
        """Test that the thread pool does not change the output."""
        single = enumerate_graphs(2, 2, degrees=(3, 4), threads=1)
        pooled = enumerate_graphs(2, 2, degrees=(3, 4), threads=3)
        assert [g for g, _ in single] == [g for g, _ in pooled]


class TestLoopGrouping:
    """Test cases for grouping by loop order."""

    def test_phi4_two_point_two_loops(self):
        """Test the sunset and the tadpole on a bubble at two loops."""
        grouped = graphs_by_loop_order(2, 2, degrees=(4,))
        assert sorted(grouped) == [1, 2]
        assert sorted(aut for _, aut in grouped[2]) == [4, 6]
