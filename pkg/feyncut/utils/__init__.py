"""Utility modules for feyncut."""

from .visualization import GraphDrawer
from .file_utils import ResultsExporter, dump_graph, load_graph_file, save_graph_file

__all__ = ['GraphDrawer', 'ResultsExporter', 'dump_graph', 'load_graph_file', 'save_graph_file']
