"""Spanning trees and forests, fundamental cycles, cycles and tree counts."""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np
from scipy.special import factorial

from .errors import DisconnectedError, EdgeInTreeError, NoSuchEdgeError
from .graph import Graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ForestData:
    """A spanning forest of a graph, given by its edge set."""

    graph: Graph
    edges: FrozenSet[str]

    @cached_property
    def _forest(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.graph.n_vertices))
        for name in self.edges:
            u, v = self.graph.endpoints[name]
            g.add_edge(u, v, key=name)
        return g

    @cached_property
    def components(self) -> Tuple[FrozenSet[int], ...]:
        comps = [frozenset(c) for c in nx.connected_components(self._forest)]
        return tuple(sorted(comps, key=min))

    @cached_property
    def component_of(self) -> Dict[int, int]:
        return {v: i for i, comp in enumerate(self.components) for v in comp}

    @property
    def k(self) -> int:
        """Number of trees in the forest."""
        return len(self.components)

    @cached_property
    def crossing_edges(self) -> FrozenSet[str]:
        """Ĕ_F: edges whose endpoints lie in different trees of the forest."""
        comp = self.component_of
        return frozenset(
            name
            for name, (u, v) in self.graph.endpoints.items()
            if comp[u] != comp[v]
        )

    @property
    def non_forest_edges(self) -> FrozenSet[str]:
        return frozenset(self.graph.edges) - self.edges

    def is_acyclic(self) -> bool:
        return self._forest.number_of_edges() == self.graph.n_vertices - self.k

    def is_spanning_tree(self) -> bool:
        return self.is_acyclic() and self.k == self.graph.h0

    def leg_partition(self) -> Tuple[FrozenSet[int], ...]:
        """Partition of the leg labels by the trees they sit on."""
        parts: Dict[int, set] = {}
        for h, label in self.graph.leg_label.items():
            parts.setdefault(self.component_of[self.graph.vertex_of[h]], set()).add(label)
        return tuple(sorted((frozenset(p) for p in parts.values()), key=min))

    def tree_path(self, edge_name: str) -> Optional[FrozenSet[str]]:
        """
        Forest edges on the path between the endpoints of an edge.

        Args:
            edge_name: Any internal edge of the graph

        Returns:
            The path t_e, or None when the endpoints lie in different trees
        """
        if edge_name not in self.graph.edges:
            raise NoSuchEdgeError(f"No internal edge named {edge_name}")
        u, v = self.graph.endpoints[edge_name]
        if self.component_of[u] != self.component_of[v]:
            return None
        if u == v:
            return frozenset()
        nodes = nx.shortest_path(self._forest, u, v)
        path = set()
        for a, b in zip(nodes, nodes[1:]):
            path.add(next(iter(self._forest[a][b])))
        return frozenset(path)

    def fundamental_cycle(self, edge_name: str) -> FrozenSet[str]:
        """
        Edge set of the unique cycle l(T, e) in the forest plus e.

        Raises:
            EdgeInTreeError: if e belongs to the forest
        """
        if edge_name in self.edges:
            raise EdgeInTreeError(f"Edge {edge_name} belongs to the forest")
        path = self.tree_path(edge_name)
        if path is None:
            raise EdgeInTreeError(
                f"Edge {edge_name} joins two different trees and closes no cycle"
            )
        return path | {edge_name}

    def fundamental_cycle_graph(self, edge_name: str) -> Graph:
        """The fundamental cycle as a subgraph with full corollas."""
        return self.graph.subgraph(self.fundamental_cycle(edge_name))

    def intact_cycles(self, tree: 'ForestData') -> FrozenSet[str]:
        """Loop edges e of the tree whose tree path lies inside this forest."""
        intact = set()
        for name in tree.non_forest_edges:
            path = tree.tree_path(name)
            if path is not None and path <= self.edges:
                intact.add(name)
        return frozenset(intact)


def spanning_forests(graph: Graph, k: int) -> List[ForestData]:
    """
    All spanning k-forests: acyclic edge sets leaving exactly k trees.

    Args:
        graph: Any graph
        k: Number of trees, at least the component count of the graph

    Returns:
        Forests sorted by their sorted edge names
    """
    size = graph.n_vertices - k
    names = [n for n in graph.edges if not graph.is_self_loop(n)]
    if size < 0 or size > len(names):
        return []
    found: List[FrozenSet[str]] = []

    def grow(index: int, chosen: List[str], parent: Dict[int, int]) -> None:
        if len(chosen) == size:
            found.append(frozenset(chosen))
            return
        if len(names) - index < size - len(chosen):
            return
        name = names[index]
        u, v = graph.endpoints[name]
        ru, rv = _root(parent, u), _root(parent, v)
        if ru != rv:
            joined = dict(parent)
            joined[ru] = rv
            grow(index + 1, chosen + [name], joined)
        grow(index + 1, chosen, parent)

    grow(0, [], {v: v for v in range(graph.n_vertices)})
    return [ForestData(graph, f) for f in sorted(found, key=sorted)]


def _root(parent: Dict[int, int], x: int) -> int:
    while parent[x] != x:
        x = parent[x]
    return x


def spanning_trees(graph: Graph) -> List[ForestData]:
    """All spanning trees of a connected graph."""
    if not graph.is_connected():
        raise DisconnectedError(f"Graph has {graph.h0} components; trees need one")
    return spanning_forests(graph, max(graph.h0, 1))


@lru_cache(maxsize=4096)
def spt(graph: Graph) -> int:
    """Number of spanning trees."""
    return len(spanning_trees(graph))


def kirchhoff_spt(graph: Graph) -> int:
    """Spanning-tree count from the reduced Laplacian determinant (matrix-tree theorem)."""
    if not graph.is_connected():
        raise DisconnectedError(f"Graph has {graph.h0} components; trees need one")
    n = graph.n_vertices
    if n <= 1:
        return 1
    laplacian = np.zeros((n, n), dtype=float)
    for u, v in graph.endpoints.values():
        if u == v:
            continue
        laplacian[u, v] -= 1
        laplacian[v, u] -= 1
        laplacian[u, u] += 1
        laplacian[v, v] += 1
    return int(round(np.linalg.det(laplacian[1:, 1:])))


def spt_bold(graph: Graph) -> int:
    """spt(Γ) · |Γ|!"""
    return spt(graph) * int(factorial(graph.loops, exact=True))


def cycles(graph: Graph) -> List[FrozenSet[str]]:
    """
    All cycles of a graph as edge sets.

    Self-loops and pairs of parallel edges count as cycles. Found by scanning
    edge subsets for connected sets in which every touched vertex has degree 2.
    """
    result = []
    names = list(graph.edges)
    for size in range(1, len(names) + 1):
        for subset in combinations(names, size):
            degree: Dict[int, int] = {}
            for name in subset:
                for v in graph.endpoints[name]:
                    degree[v] = degree.get(v, 0) + 1
            if any(d != 2 for d in degree.values()):
                continue
            if graph.subgraph(subset).is_connected():
                result.append(frozenset(subset))
    return result


def is_forest(graph: Graph, edges: Iterable[str]) -> bool:
    return ForestData(graph, frozenset(edges)).is_acyclic()


@lru_cache(maxsize=1024)
def enumerate_subgraphs(graph: Graph) -> Tuple[FrozenSet[str], ...]:
    """
    All bridgeless subgraphs that are full at their vertices.

    A subgraph is given by its internal edges; it holds the full corollas it
    touches, so every component carries at least one edge. The whole graph is
    included when it is bridgeless.

    Args:
        graph: Graph to scan

    Returns:
        Edge sets ordered by size, then by sorted edge names
    """
    names = list(graph.edges)
    found = []
    for size in range(1, len(names) + 1):
        for subset in combinations(names, size):
            if graph.subgraph(subset).is_bridgeless():
                found.append(frozenset(subset))
    logger.debug(f"{len(found)} bridgeless subgraphs in {graph!r}")
    return tuple(sorted(found, key=lambda s: (len(s), sorted(s))))
