"""File handling utilities."""

import os
import json
import logging
from typing import Any, Dict, List, Union

import pandas as pd

from ..core.algebra import GraphSum, TensorSum
from ..core.cutgraph import PreCutGraph
from ..core.graph import Graph

logger = logging.getLogger(__name__)


def load_graph_file(path: str) -> Union[Graph, PreCutGraph]:
    """
    Read a graph in the JSON graph format.

    Args:
        path: Path to the JSON file

    Returns:
        A PreCutGraph when the file has cut_edges or vertex_splits, else a Graph

    Raises:
        FileNotFoundError: when the file does not exist
        json.JSONDecodeError: when the file is not valid JSON
        GraphError: when the description is not a valid graph
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"Graph file not found: {path}")
    with open(path, "r") as f:
        description = json.load(f)
    if description.get('cut_edges') or description.get('vertex_splits'):
        graph: Union[Graph, PreCutGraph] = PreCutGraph.from_description(description)
    else:
        graph = Graph.from_description(description)
    logger.debug(f"Loaded {graph!r} from {path}")
    return graph


def dump_graph(graph: Union[Graph, PreCutGraph]) -> Dict[str, Any]:
    return graph.to_description()


def save_graph_file(graph: Union[Graph, PreCutGraph], path: str) -> str:
    with open(path, "w") as f:
        json.dump(dump_graph(graph), f, indent=2)
    logger.info(f"Graph exported to {path}")
    return path


class ResultsExporter:
    """Handles exporting computation results to CSV and JSON."""

    def __init__(self, results_dir: str = "results"):
        """
        Initialize results exporter.

        Args:
            results_dir: Directory to save results
        """
        self.results_dir = results_dir
        os.makedirs(self.results_dir, exist_ok=True)

    def _path(self, name: str, suffix: str) -> str:
        return os.path.join(self.results_dir, f"{name}.{suffix}")

    def export_records_csv(self, records: List[Dict[str, Any]], name: str) -> str:
        """
        Export a list of flat records as a CSV table.

        Args:
            records: Rows as dictionaries with the same keys
            name: File stem

        Returns:
            Path to saved CSV file
        """
        csv_path = self._path(name, "csv")
        pd.DataFrame(records).to_csv(csv_path, index=False)
        logger.info(f"Table {name} exported to {csv_path}")
        return csv_path

    def export_tensor_csv(self, tensor: Union[TensorSum, GraphSum], name: str = "coproduct") -> str:
        """Export a tensor or graph sum, one row per term with its "p/q" coefficient."""
        csv_path = self._path(name, "csv")
        pd.DataFrame(tensor.to_records()).to_csv(csv_path, index=False)
        logger.info(f"Tensor exported to {csv_path}")
        return csv_path

    def export_series_csv(self, records: List[Dict[str, Any]], name: str = "series") -> str:
        csv_path = self._path(name, "csv")
        frame = pd.DataFrame(records)
        if 'coupling' in frame.columns:
            frame['coupling'] = frame['coupling'].map(
                lambda c: json.dumps(c, sort_keys=True) if isinstance(c, dict) else c
            )
        frame.to_csv(csv_path, index=False)
        logger.info(f"Series exported to {csv_path}")
        return csv_path

    def export_json(self, data: Any, name: str) -> str:
        """
        Export any JSON-serializable result.

        Args:
            data: Result payload
            name: File stem

        Returns:
            Path to saved JSON file
        """
        json_path = self._path(name, "json")
        with open(json_path, "w") as f:
            json.dump(data, f, indent=2, default=str)
        logger.info(f"Result {name} exported to {json_path}")
        return json_path

    def export_metadata_json(self, metadata: Dict[str, Any]) -> str:
        json_path = self._path("run_metadata", "json")
        with open(json_path, "w") as f:
            json.dump(metadata, f, indent=2, default=str)
        logger.info(f"Metadata exported to {json_path}")
        return json_path

    def export_all(self, results: Dict[str, Any]) -> Dict[str, str]:
        """
        Export all results of a run.

        Lists of flat records go to CSV as well as JSON; the 'metadata' entry
        goes to the metadata file.

        Args:
            results: Result name to payload

        Returns:
            Dictionary of export paths
        """
        export_paths = {}
        for name, payload in results.items():
            if name == 'metadata':
                export_paths['metadata_json'] = self.export_metadata_json(payload)
                continue
            export_paths[f"{name}_json"] = self.export_json(payload, name)
            if _is_flat_table(payload):
                export_paths[f"{name}_csv"] = self.export_records_csv(payload, name)
        return export_paths


def _is_flat_table(payload: Any) -> bool:
    return (
        isinstance(payload, list)
        and bool(payload)
        and all(isinstance(row, dict) for row in payload)
        and all(not isinstance(v, (dict, list)) for row in payload for v in row.values())
    )
