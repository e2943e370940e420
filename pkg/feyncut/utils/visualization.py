"""DOT drawings of graphs and pre-cut graphs."""

import logging
from typing import Optional, Union

import pydot

from ..core.cutgraph import PreCutGraph
from ..core.graph import Graph

logger = logging.getLogger(__name__)


class GraphDrawer:
    """Handles DOT rendering of (pre-)cut graphs."""

    def __init__(self, layout: str = "neato", name: str = "G"):
        """
        Initialize drawer.

        Args:
            layout: Graphviz layout engine written into the graph attributes
            name: Name of the DOT graph
        """
        self.layout = layout
        self.name = name

    def build(self, graph: Union[Graph, PreCutGraph]) -> pydot.Dot:
        """
        Build the pydot graph.

        Vertices are points; a split corolla becomes a cluster with one
        sub-node per part. Cut edges are dashed and legs end in small
        nodes labelled by their leg number.

        Args:
            graph: Graph or pre-cut graph to draw

        Returns:
            The pydot graph
        """
        cut = graph if isinstance(graph, PreCutGraph) else PreCutGraph(graph)
        base = cut.base
        dot = pydot.Dot(self.name, graph_type="graph", layout=self.layout)
        node_of = {}
        for v, corolla in enumerate(base.vertices):
            parts = cut.vertex_splits.get(v)
            if not parts:
                dot.add_node(pydot.Node(f"v{v}", shape="point", width="0.08"))
                node_of.update({h: f"v{v}" for h in corolla})
                continue
            cluster = pydot.Cluster(f"split{v}", style="dotted", label="")
            for i, part in enumerate(parts):
                cluster.add_node(pydot.Node(f"v{v}_{i}", shape="point", width="0.08"))
                node_of.update({h: f"v{v}_{i}" for h in part})
            dot.add_subgraph(cluster)

        for name, (a, b) in base.edges.items():
            attrs = {"label": name}
            if name in cut.cut_edges:
                attrs["style"] = "dashed"
            mass = base.masses.get(name)
            if mass:
                attrs["label"] = f"{name}:{mass}"
            dot.add_edge(pydot.Edge(node_of[a], node_of[b], **attrs))

        for h, label in base.leg_label.items():
            leg = f"leg{label}"
            dot.add_node(pydot.Node(leg, shape="plaintext", label=str(label), fontsize="8"))
            dot.add_edge(pydot.Edge(node_of[h], leg))
        return dot

    def to_dot(self, graph: Union[Graph, PreCutGraph], save_path: Optional[str] = None) -> str:
        """
        Render to DOT source.

        Args:
            graph: Graph or pre-cut graph to draw
            save_path: Optional path to write the DOT file to

        Returns:
            The DOT source
        """
        source = self.build(graph).to_string()
        if save_path:
            with open(save_path, "w") as f:
                f.write(source)
            logger.info(f"DOT drawing saved to {save_path}")
        return source
