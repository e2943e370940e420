"""Enumeration of connected bridgeless graphs up to isomorphism."""

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Sequence, Tuple

from .canonical import canonical_graph, canonicalize
from .graph import Graph

logger = logging.getLogger(__name__)

# A generated graph in canonical form together with |Aut|.
GeneratedGraph = Tuple[Graph, int]


class GraphGenerator:
    """Generate Feynman graphs by pairing the free half-edges of corollas."""

    def __init__(self, degrees: Iterable[int] = (3, 4), threads: int = 1):
        """
        Initialize the generator.

        Args:
            degrees: Allowed vertex valences, each at least 3
            threads: Worker threads used across degree sequences
        """
        self.degrees = tuple(sorted(set(degrees)))
        if not self.degrees or min(self.degrees) < 3:
            raise ValueError(f"Valences must be at least 3, got {list(degrees)}")
        self.threads = max(1, threads)

    def degree_sequences(self, n_ext: int, loops: int) -> List[Tuple[int, ...]]:
        """Vertex valence multisets with Σ(d − 2) = 2ℓ − 2 + n."""
        target = 2 * loops - 2 + n_ext
        if target < 1:
            return []
        result = []
        for count in range(1, target + 1):
            for seq in combinations_with_replacement(self.degrees, count):
                if sum(d - 2 for d in seq) == target:
                    result.append(tuple(sorted(seq, reverse=True)))
        return result

    def generate(self, n_ext: int, max_loops: int) -> List[GeneratedGraph]:
        """
        Every connected bridgeless graph with n_ext labelled legs and 1..L loops.

        Args:
            n_ext: Number of external legs
            max_loops: Largest loop number L

        Returns:
            Canonical representatives with their automorphism counts, sorted
            by loop number, vertex count and canonical key
        """
        jobs = [
            (n_ext, loops, seq)
            for loops in range(1, max_loops + 1)
            for seq in self.degree_sequences(n_ext, loops)
        ]
        if self.threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                batches = list(pool.map(lambda job: self._graphs_for(*job), jobs))
        else:
            batches = [self._graphs_for(*job) for job in jobs]

        merged: Dict[str, GeneratedGraph] = {}
        for batch in batches:
            for key, item in batch.items():
                merged.setdefault(key, item)
        result = sorted(
            merged.items(),
            key=lambda kv: (kv[1][0].loops, kv[1][0].n_vertices, kv[0]),
        )
        logger.info(
            f"Generated {len(result)} graphs with {n_ext} legs, loops <= {max_loops}, "
            f"valences {list(self.degrees)}"
        )
        return [item for _, item in result]

    def _graphs_for(
        self, n_ext: int, loops: int, degrees: Sequence[int]
    ) -> Dict[str, GeneratedGraph]:
        found: Dict[str, GeneratedGraph] = {}
        for legs in self._leg_assignments(n_ext, degrees):
            residual = [d - legs.count(v) for v, d in enumerate(degrees)]
            if any(r < 0 for r in residual) or sum(residual) % 2:
                continue
            for edges in self._pairings(degrees, legs, residual):
                graph = Graph.from_edges(edges, legs, n_vertices=len(degrees))
                if graph.loops != loops or not graph.is_connected():
                    continue
                if not graph.is_bridgeless():
                    continue
                form = canonicalize(graph)
                if form.key not in found:
                    found[form.key] = (canonical_graph(graph), form.automorphisms)
        logger.debug(f"Degree sequence {list(degrees)}: {len(found)} classes")
        return found

    def _leg_assignments(self, n_ext: int, degrees: Sequence[int]) -> List[List[int]]:
        result: List[List[int]] = []

        def place(j: int, legs: List[int]) -> None:
            if j == n_ext:
                result.append(list(legs))
                return
            fresh_tried = set()
            for v, d in enumerate(degrees):
                if legs.count(v) >= d:
                    continue
                if v not in legs:
                    # untouched vertices of equal valence are interchangeable
                    if d in fresh_tried:
                        continue
                    fresh_tried.add(d)
                legs.append(v)
                place(j + 1, legs)
                legs.pop()

        place(0, [])
        return result

    def _pairings(
        self, degrees: Sequence[int], legs: Sequence[int], residual: List[int]
    ) -> List[List[Tuple[int, int]]]:
        result: List[List[Tuple[int, int]]] = []
        touched = [v in legs for v in range(len(degrees))]

        def pair(edges: List[Tuple[int, int]]) -> None:
            v = next((i for i, r in enumerate(residual) if r > 0), None)
            if v is None:
                result.append(list(edges))
                return
            untouched_tried = set()
            for w in range(v, len(degrees)):
                if w == v:
                    if residual[v] < 2:
                        continue
                elif residual[w] < 1:
                    continue
                elif not touched[w]:
                    if degrees[w] in untouched_tried:
                        continue
                    untouched_tried.add(degrees[w])
                was = touched[v], touched[w]
                residual[v] -= 1
                residual[w] -= 1
                touched[v] = touched[w] = True
                edges.append((v, w))
                pair(edges)
                edges.pop()
                residual[v] += 1
                residual[w] += 1
                touched[v], touched[w] = was

        pair([])
        return result


def enumerate_graphs(
    n_ext: int, max_loops: int, degrees: Iterable[int] = (3, 4), threads: int = 1
) -> List[GeneratedGraph]:
    """Connected bridgeless graphs with labelled legs, one per isomorphism class."""
    return GraphGenerator(degrees, threads).generate(n_ext, max_loops)


def graphs_by_loop_order(
    n_ext: int, max_loops: int, degrees: Iterable[int] = (3, 4), threads: int = 1
) -> Dict[int, List[GeneratedGraph]]:
    """The same graphs grouped by loop number."""
    grouped: Dict[int, List[GeneratedGraph]] = {}
    for graph, aut in enumerate_graphs(n_ext, max_loops, degrees, threads):
        grouped.setdefault(graph.loops, []).append((graph, aut))
    return grouped
