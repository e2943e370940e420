"""Tests for DOT drawings."""

from feyncut.core.cutgraph import PreCutGraph
from feyncut.tests.conftest import make_triangle
from feyncut.utils.visualization import GraphDrawer


class TestGraphDrawer:
    """Test cases for GraphDrawer."""

    def test_plain_graph(self, triangle):
        """Test vertices, legs and the absence of cut styling."""
        source = GraphDrawer().to_dot(triangle)
        assert 'neato' in source
        assert 'leg1' in source
        assert 'dashed' not in source

    def test_cut_edges_dashed(self, triangle):
        """Test that every cut edge is dashed."""
        source = GraphDrawer().to_dot(PreCutGraph(triangle, ['e1', 'e2']))
        assert source.count('dashed') == 2

    def test_split_vertex_cluster(self, bubble):
        """Test that a split corolla becomes a cluster with one node per part."""
        split = PreCutGraph(bubble, vertex_splits={0: [['l1', 'h1'], ['l2', 'h3']]})
        dot = GraphDrawer().build(split)
        assert len(dot.get_subgraphs()) == 1
        source = dot.to_string()
        assert 'split0' in source
        assert 'v0_0' in source and 'v0_1' in source

    def test_mass_label(self):
        """Test that a massive edge shows its mass."""
        source = GraphDrawer().to_dot(make_triangle({0: 'm'}))
        assert 'e1:m' in source

    def test_save(self, triangle, tmp_path):
        """Test that the DOT source is written when a path is given."""
        path = tmp_path / "triangle.dot"
        source = GraphDrawer(name="triangle").to_dot(triangle, save_path=str(path))
        assert path.read_text() == source
        assert 'triangle' in source
