"""Tests for graph files and result export."""

import json
import os
import tempfile
from unittest.mock import patch

import pandas as pd
import pytest

from feyncut.core.canonical import canonical_key
from feyncut.core.coproducts import get_coproduct
from feyncut.core.cutgraph import PreCutGraph
from feyncut.core.graph import Graph
from feyncut.utils.file_utils import ResultsExporter, dump_graph, load_graph_file, save_graph_file


class TestGraphFiles:
    """Test cases for reading and writing graph files."""

    def test_load_graph(self, triangle, graph_file):
        """Test that a plain description loads as a Graph."""
        loaded = load_graph_file(graph_file(triangle))
        assert isinstance(loaded, Graph)
        assert canonical_key(loaded, labelled=True) == canonical_key(triangle, labelled=True)

    def test_load_cut_graph(self, triangle, graph_file):
        """Test that cut edges make the loader return a PreCutGraph."""
        loaded = load_graph_file(graph_file(PreCutGraph(triangle, ['e1', 'e2'])))
        assert isinstance(loaded, PreCutGraph)
        assert loaded.cut_edges == frozenset({'e1', 'e2'})

    def test_missing_file(self, tmp_path):
        """Test the error for a path that does not exist."""
        with pytest.raises(FileNotFoundError, match="Graph file not found"):
            load_graph_file(os.path.join(str(tmp_path), "missing.json"))

    def test_invalid_json(self, tmp_path):
        """Test that malformed JSON is reported by the decoder."""
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(json.JSONDecodeError):
            load_graph_file(str(path))

    def test_save_and_load(self, dunce, tmp_path):
        """Test that a saved graph loads back with the same canonical key."""
        path = save_graph_file(dunce, str(tmp_path / "dunce.json"))
        assert canonical_key(load_graph_file(path)) == canonical_key(dunce)

    def test_dump_cut_graph(self, triangle):
        """Test that a dumped cut graph keeps its cut edges."""
        description = dump_graph(PreCutGraph(triangle, ['e1', 'e2']))
        assert len(description['cut_edges']) == 2
        assert 'vertex_splits' not in description


class TestResultsExporter:
    """Test cases for ResultsExporter."""

    def test_creates_directory(self):
        """Test that the results directory is created."""
        with tempfile.TemporaryDirectory() as temp_dir:
            target = os.path.join(temp_dir, "nested", "results")
            ResultsExporter(target)
            assert os.path.isdir(target)

    def test_export_tensor(self, dunce, tmp_path):
        """Test one CSV row per coproduct term."""
        exporter = ResultsExporter(str(tmp_path))
        tensor = get_coproduct('core').reduced(dunce)
        with patch('feyncut.utils.file_utils.logger') as mock_logger:
            path = exporter.export_tensor_csv(tensor)
            assert "exported to" in mock_logger.info.call_args[0][0]
        frame = pd.read_csv(path)
        assert len(frame) == 2
        assert list(frame.columns) == ['left', 'right', 'coeff']

    def test_export_series(self, tmp_path):
        """Test that coupling dictionaries are stored as JSON strings."""
        exporter = ResultsExporter(str(tmp_path))
        path = exporter.export_series_csv([{'coupling': {'g4': 1}, 'weight': '1/2'}])
        frame = pd.read_csv(path)
        assert json.loads(frame['coupling'][0]) == {'g4': 1}

    def test_export_all(self, tmp_path):
        """Test that flat tables also go to CSV and metadata to its own file."""
        exporter = ResultsExporter(str(tmp_path))
        paths = exporter.export_all({
            'table': [{'a': 1, 'b': 'x'}],
            'nested': {'rows': [1, 2]},
            'metadata': {'command': 'spt'},
        })
        assert set(paths) == {'table_json', 'table_csv', 'nested_json', 'metadata_json'}
        with open(paths['metadata_json']) as f:
            assert json.load(f) == {'command': 'spt'}
        assert os.path.basename(paths['table_csv']) == 'table.csv'
