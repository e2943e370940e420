"""Tests for pre-cut graphs and graph-forest pairs."""

from unittest.mock import patch

import pytest

from feyncut.core.cutgraph import (
    CORE,
    CUT,
    CUTKOSKY,
    PRE_CUTKOSKY,
    PRECUT,
    GraphForestPair,
    PreCutGraph,
    compatible_forests,
    cut_from_forest,
)
from feyncut.core.errors import (
    ForestNotInTreeError,
    GraphError,
    NoCompatibleForestError,
    NoSuchEdgeError,
    NonPartitionError,
)


class TestClassification:
    """Test cases for the pre-cut graph hierarchy."""

    def test_core(self, triangle):
        """Test that an unrefined graph is core."""
        assert PreCutGraph(triangle).classify() == CORE

    def test_cutkosky(self, triangle):
        """Test that isolating a vertex is a Cutkosky cut."""
        cut = PreCutGraph(triangle, ['e1', 'e2'])
        assert cut.classify() == CUTKOSKY
        assert cut.norm == 0
        assert cut.loops == 1
        assert cut.leg_partition() == (frozenset({1, 3}), frozenset({2}))

    def test_cut_not_cutkosky(self, triangle):
        """Test that a single cut edge of a cycle is only a cut."""
        cut = PreCutGraph(triangle, ['e1'])
        assert cut.classify() == CUT
        assert cut.norm == 0
        assert cut.compatible_forests() == []

    def test_pre_cutkosky(self, bubble):
        """Test that a vertex split without cut edges is pre-Cutkosky."""
        split = PreCutGraph(bubble, vertex_splits={0: [['l1', 'h1'], ['l2', 'h3']]})
        assert split.classify() == PRE_CUTKOSKY
        assert split.is_normal()

    def test_precut(self, triangle):
        """Test a cut edge left inside a component of a split graph."""
        graph = PreCutGraph(triangle, ['e1'], {2: [['l3'], ['h4', 'h5']]})
        assert graph.classify() == PRECUT

    def test_abnormal_split(self, bubble):
        """Test that a split keeping all internal half-edges together is not normal."""
        split = PreCutGraph(bubble, vertex_splits={0: [['l1', 'l2'], ['h1', 'h3']]})
        assert not split.is_normal()

    def test_trivial_split_dropped(self, bubble):
        """Test that a one-part split is ignored."""
        graph = PreCutGraph(bubble, vertex_splits={0: [['l1', 'l2', 'h1', 'h3']]})
        assert graph.is_core()

    def test_unknown_cut_edge(self, triangle):
        """Test that cutting a missing edge is rejected."""
        with pytest.raises(NoSuchEdgeError, match="not an internal edge"):
            PreCutGraph(triangle, ['e7'])

    def test_bad_split(self, bubble):
        """Test that split parts must partition the corolla."""
        with pytest.raises(NonPartitionError, match="do not partition"):
            PreCutGraph(bubble, vertex_splits={0: [['l1'], ['h1']]})


class TestForests:
    """Test cases for compatible forests."""

    def test_compatible_forest_of_vertex_cut(self, triangle):
        """Test the unique forest compatible with isolating vertex 1."""
        cut = PreCutGraph(triangle, ['e1', 'e2'])
        forests = cut.compatible_forests()
        assert [f.edges for f in forests] == [frozenset({'e3'})]
        assert cut.is_compatible(['e3'])

    def test_associated_data(self, triangle):
        """Test the on and off edge sets for a compatible forest."""
        data = PreCutGraph(triangle, ['e1', 'e2']).associated_data(['e3'])
        assert data.e_off == frozenset({'e3'})
        assert data.e_on == frozenset({'e1', 'e2'})
        assert data.h0 == 2

    def test_involution_pair(self, triangle):
        """Test the deleted and contracted graphs of a compatible forest."""
        deleted, contracted = PreCutGraph(triangle, ['e1', 'e2']).involution_pair(['e3'])
        assert (deleted.n_vertices, deleted.n_edges) == (3, 1)
        assert (contracted.n_vertices, contracted.n_edges) == (2, 2)

    def test_incompatible_forest(self, triangle):
        """Test that an incompatible forest is rejected."""
        with pytest.raises(NoCompatibleForestError, match="not compatible"):
            PreCutGraph(triangle, ['e1', 'e2']).associated_data(['e1'])

    def test_warning_without_forests(self, triangle):
        """Test that an empty forest list is logged."""
        with patch('feyncut.core.cutgraph.logger') as mock_logger:
            assert compatible_forests(PreCutGraph(triangle, ['e1'])) == []
            mock_logger.warning.assert_called_once()

    def test_dunce_forest_count(self, dunce):
        """Test that the cut separating vertex c has a single compatible forest."""
        cut = PreCutGraph(dunce, ['e1', 'e3', 'e4'])
        assert cut.classify() == CUTKOSKY
        assert len(cut.compatible_forests()) == 1
        assert cut.compatible_forests()[0].edges == frozenset({'e2'})


class TestKeysAndSerialization:
    """Test cases for canonical keys and descriptions."""

    def test_description_round_trip(self, triangle):
        """Test that cut edges and splits survive serialization."""
        graph = PreCutGraph(triangle, ['e1'], {2: [['l3'], ['h4', 'h5']]})
        assert PreCutGraph.from_description(graph.to_description()) == graph

    def test_labelled_and_free_keys(self, triangle):
        """Test that isolating different vertices differs only with labelled legs."""
        first = PreCutGraph(triangle, ['e1', 'e2'])
        second = PreCutGraph(triangle, ['e1', 'e3'])
        assert first.key() != second.key()
        assert first.key(labelled=False) == second.key(labelled=False)

    def test_cut_and_core_keys_differ(self, triangle):
        """Test that cutting changes the key."""
        assert PreCutGraph(triangle, ['e1', 'e2']).key() != PreCutGraph(triangle).key()


class TestGraphForestPair:
    """Test cases for graph-forest pairs."""

    def test_cut_of_forest(self, triangle):
        """Test that a forest cuts exactly its crossing edges."""
        pair = GraphForestPair(triangle, ['e1'])
        assert pair.cut == frozenset({'e2', 'e3'})
        assert cut_from_forest(pair).classify() == CUTKOSKY

    def test_cycle_rejected(self, triangle):
        """Test that a forest with a cycle is rejected."""
        with pytest.raises(GraphError, match="contain a cycle"):
            GraphForestPair(triangle, ['e1', 'e2', 'e3'])

    def test_forest_outside_tree(self, triangle):
        """Test that the forest must lie in the tree."""
        with pytest.raises(ForestNotInTreeError, match="not inside tree"):
            GraphForestPair(triangle, ['e3'], tree=['e1', 'e2'])

    def test_tree_must_span(self, triangle):
        """Test that the tree must be spanning."""
        with pytest.raises(ForestNotInTreeError, match="not a spanning tree"):
            GraphForestPair(triangle, ['e1'], tree=['e1'])

    def test_tree_changes_key(self, triangle):
        """Test that recording the tree changes the key."""
        plain = GraphForestPair(triangle, ['e1'])
        with_tree = GraphForestPair(triangle, ['e1'], tree=['e1', 'e2'])
        assert plain.key() != with_tree.key()
