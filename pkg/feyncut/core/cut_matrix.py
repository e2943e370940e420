"""Matrices of pre-Cutkosky refinements between the contraction classes of a graph."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from .algebra import GraphSum, Monomial
from .canonical import canonical_key
from .cutgraph import PreCutGraph
from .forests import spanning_forests
from .generator import enumerate_graphs
from .graph import Graph

logger = logging.getLogger(__name__)


def contraction_classes(graph: Graph) -> List[Graph]:
    """
    The graphs Γ/F over all spanning forests F, one per labelled class.

    Args:
        graph: A connected graph with a leg at every vertex

    Returns:
        Representatives ordered by vertex count, then canonical key
    """
    found: Dict[str, Graph] = {}
    for k in range(graph.h0, graph.n_vertices + 1):
        for forest in spanning_forests(graph, k):
            contracted = graph.contract_raw(forest.edges)
            found.setdefault(canonical_key(contracted, labelled=True), contracted)
    return [
        g for _, g in sorted(found.items(), key=lambda kv: (kv[1].n_vertices, kv[0]))
    ]


def refinement(row: Graph, column: Graph) -> Optional[PreCutGraph]:
    """
    The cut structure on ``row`` whose contracted associated graph is ``column``.

    Vertices of ``row`` are grouped by the leg labels at the vertices of
    ``column``; each group must be connected, and contracting a spanning tree
    of every group must give the column's class. Edges between groups are cut.

    Returns:
        The pre-Cutkosky graph, or None when no such structure exists
    """
    if column.n_vertices > row.n_vertices:
        return None
    owner = {label: w for w in range(column.n_vertices) for label in column.legs_at(w)}
    groups: Dict[int, List[int]] = {}
    for v in range(row.n_vertices):
        targets = {owner.get(label) for label in row.legs_at(v)}
        if len(targets) != 1 or None in targets:
            return None
        groups.setdefault(targets.pop(), []).append(v)
    if len(groups) != column.n_vertices:
        return None

    view = row.to_networkx()
    tree_edges = []
    for members in groups.values():
        piece = view.subgraph(members)
        if not nx.is_connected(piece):
            return None
        tree_edges.extend(key for _, _, key in nx.minimum_spanning_edges(piece, keys=True, data=False))
    if canonical_key(row.contract_raw(tree_edges), labelled=True) != canonical_key(column, labelled=True):
        return None
    group_of = {v: w for w, members in groups.items() for v in members}
    cut = [n for n, (u, v) in row.endpoints.items() if group_of[u] != group_of[v]]
    return PreCutGraph(row, cut)


@dataclass
class CutMatrix:
    """A lower-triangular matrix of refinements indexed by contraction classes."""

    classes: List[Graph]
    entries: Dict[Tuple[int, int], GraphSum] = field(default_factory=dict)
    labels: List[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.classes)

    def mask(self) -> np.ndarray:
        """0/1 array marking the non-empty entries."""
        result = np.zeros((self.size, self.size), dtype=int)
        for (i, j), value in self.entries.items():
            if value:
                result[i, j] = 1
        return result

    def is_lower_triangular(self) -> bool:
        return not np.triu(self.mask(), k=1).any()

    def entry(self, i: int, j: int) -> GraphSum:
        return self.entries.get((i, j), GraphSum())

    def first_column_uncut(self) -> bool:
        """Column 0 holds every class uncut."""
        for i in range(self.size):
            value = self.entry(i, 0)
            if not value or any(
                isinstance(f, PreCutGraph) and not f.is_core() for m in value.terms for f in m.factors
            ):
                return False
        return True

    def diagonal_fully_cut(self) -> bool:
        """Every diagonal entry has all edges except self-loops cut."""
        for i in range(self.size):
            value = self.entry(i, i)
            if not value:
                return False
            for monomial in value.terms:
                for factor in monomial.factors:
                    graph = factor if isinstance(factor, PreCutGraph) else PreCutGraph(factor)
                    loose = {n for n in graph.base.edges if not graph.base.is_self_loop(n)}
                    if set(graph.cut_edges) != loose:
                        return False
        return True

    def to_records(self) -> List[Dict[str, Any]]:
        records = []
        for (i, j), value in sorted(self.entries.items()):
            for monomial, coeff in value.items():
                records.append({
                    'row': i,
                    'column': j,
                    'row_class': self.labels[i] if self.labels else '',
                    'entry': '*'.join(monomial.keys),
                    'coeff': str(coeff),
                })
        return records

    def to_frame(self) -> pd.DataFrame:
        """Square table of entries, keys joined by ' + ', empty where 0."""
        cells = [['' for _ in range(self.size)] for _ in range(self.size)]
        for (i, j), value in self.entries.items():
            cells[i][j] = ' + '.join(
                f"{c}*{'*'.join(m.keys)}" if c != 1 else '*'.join(m.keys) for m, c in value.items()
            )
        names = self.labels or [str(i) for i in range(self.size)]
        return pd.DataFrame(cells, index=names, columns=names)


def cut_matrix(graph: Graph) -> CutMatrix:
    """
    M_Γ after adding a zero-momentum leg at every legless vertex.

    Row i is the contraction class Γ/F_i; entry (i, j) is the refinement of
    class i that contracts to class j. Column 0 is the single-vertex class,
    so it holds the uncut graphs; the diagonal cuts every non-loop edge.

    Args:
        graph: A connected graph

    Returns:
        The matrix with entries keyed by labelled canonical keys
    """
    augmented = graph.add_zero_momentum_legs()
    classes = contraction_classes(augmented)
    labels = [canonical_key(g, labelled=True) for g in classes]
    entries: Dict[Tuple[int, int], GraphSum] = {}
    for i, row in enumerate(classes):
        for j, column in enumerate(classes[: i + 1]):
            cut = refinement(row, column)
            if cut is not None:
                entries[(i, j)] = GraphSum({Monomial.of(cut, labelled=True): 1})
    logger.info(f"Cut matrix with {len(classes)} contraction classes, {len(entries)} entries")
    return CutMatrix(classes, entries, labels)


def cut_matrix_green(n: int, loops: int, degrees: Iterable[int] = (3, 4), threads: int = 1) -> CutMatrix:
    """
    The matrix of a Green function: the M_Γ of its graphs summed with weights 1/|Aut|.

    Classes are merged by canonical form with unlabelled legs and ordered by
    vertex count, then loop number.
    """
    weights_by_class: Dict[str, Graph] = {}
    contributions: List[Tuple[Fraction, CutMatrix]] = []
    for graph, aut in enumerate_graphs(n, loops, degrees, threads):
        matrix = cut_matrix(graph)
        contributions.append((Fraction(1, aut), matrix))
        for cls in matrix.classes:
            weights_by_class.setdefault(canonical_key(cls, labelled=False), cls)
    order = sorted(
        weights_by_class, key=lambda k: (weights_by_class[k].n_vertices, weights_by_class[k].loops, k)
    )
    index = {k: i for i, k in enumerate(order)}
    entries: Dict[Tuple[int, int], GraphSum] = {}
    for weight, matrix in contributions:
        free = [index[canonical_key(c, labelled=False)] for c in matrix.classes]
        for (i, j), value in matrix.entries.items():
            cell = (free[i], free[j])
            for monomial in value.terms:
                merged = GraphSum({Monomial.of(*monomial.factors): weight})
                entries[cell] = entries.get(cell, GraphSum()) + merged
    logger.info(f"Green cut matrix for n={n}, L={loops}: {len(order)} classes")
    return CutMatrix([weights_by_class[k] for k in order], entries, order)
