"""Canonical forms and automorphism counts through nauty."""

import hashlib
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Any, Dict, List, Sequence, Set, Tuple

import pynauty

from .graph import Graph

logger = logging.getLogger(__name__)

SIBLING = ('#sib',)

# A link between two node positions with a decoration; u == v for self-loops.
Link = Tuple[int, int, Any]


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical code of a decorated multigraph together with its symmetry data."""

    key: str
    code: Tuple
    automorphisms: int
    order: Tuple[int, ...]


class ColoredMultigraph:
    """Nodes with labels and decorated links, the common input of canonicalization.

    Graphs, pre-cut graphs and graph-forest pairs are all encoded this way;
    the kind tag keeps their keys apart. Every link is subdivided into a node
    of its own, coloured by its decoration, so nauty sees a simple coloured
    graph and permutations of parallel links are automorphisms of it.
    """

    def __init__(self, kind: str, labels: Sequence[Any], links: Sequence[Link]):
        """
        Initialize the multigraph.

        Args:
            kind: Tag prefixed to the canonical key
            labels: One label per node
            links: (u, v, decoration) triples
        """
        self.kind = kind
        self.labels = [repr(label) for label in labels]
        self.links = [(u, v, repr(deco)) for u, v, deco in links]
        self.n = len(self.labels)

    def _colors(self) -> Tuple[List[str], List[Set[int]]]:
        node_labels = [repr(('node', label)) for label in self.labels]
        node_labels += [repr(('link', deco, u == v)) for u, v, deco in self.links]
        classes: Dict[str, Set[int]] = {}
        for i, label in enumerate(node_labels):
            classes.setdefault(label, set()).add(i)
        ordered = sorted(classes)
        return ordered, [classes[label] for label in ordered]

    def to_nauty(self) -> Tuple[pynauty.Graph, Tuple]:
        """
        Build the subdivided nauty graph.

        Returns:
            (pynauty graph, signature of its colour classes)
        """
        adjacency: Dict[int, List[int]] = {}
        for k, (u, v, _) in enumerate(self.links):
            adjacency[self.n + k] = [u] if u == v else [u, v]
        ordered, coloring = self._colors()
        graph = pynauty.Graph(
            number_of_vertices=self.n + len(self.links),
            directed=False,
            adjacency_dict=adjacency,
            vertex_coloring=coloring,
        )
        signature = tuple((label, len(cell)) for label, cell in zip(ordered, coloring))
        return graph, signature

    def canonical_form(self) -> CanonicalForm:
        """
        Compute the canonical code and the automorphism count.

        Returns:
            CanonicalForm whose automorphisms field counts node permutations
            together with permutations of parallel links
        """
        if self.n == 0 and not self.links:
            digest = hashlib.sha1(b'empty').hexdigest()[:16]
            return CanonicalForm(key=f"{self.kind}:{digest}", code=(), automorphisms=1, order=())
        graph, signature = self.to_nauty()
        certificate = pynauty.certificate(graph)
        _, size, exponent, _, _ = pynauty.autgrp(graph)
        count = int(round(size * 10 ** exponent))
        order = tuple(v for v in pynauty.canon_label(graph) if v < self.n)
        code = (signature, certificate)
        digest = hashlib.sha1(repr(code).encode('utf-8')).hexdigest()[:16]
        return CanonicalForm(key=f"{self.kind}:{digest}", code=code, automorphisms=count, order=order)


def _loop_flips(links: Sequence[Link]) -> int:
    """Reversing a self-loop is invisible to nauty; each one doubles the count."""
    return 2 ** sum(1 for u, v, deco in links if u == v and deco != SIBLING)


def encode_graph(graph: Graph, labelled: bool = True, kind: str = 'G') -> ColoredMultigraph:
    """
    Encode a graph for canonicalization.

    Args:
        graph: Graph to encode
        labelled: Keep leg labels (True) or only leg counts (False)
        kind: Key tag

    Returns:
        ColoredMultigraph with one node per vertex
    """
    labels = []
    for v in range(graph.n_vertices):
        legs = graph.legs_at(v)
        labels.append(('v', graph.valence(v), tuple(sorted(legs)) if labelled else len(legs)))
    links = [
        (u, v, ('e', graph.masses.get(name, '')))
        for name, (u, v) in graph.endpoints.items()
    ]
    return ColoredMultigraph(kind if labelled else kind.lower(), labels, links)


@lru_cache(maxsize=65536)
def canonicalize(graph: Graph, labelled: bool = True) -> CanonicalForm:
    """
    Canonical form of a graph with external legs fixed pointwise.

    Args:
        graph: Graph to canonicalize
        labelled: Fix leg labels; with False legs are interchangeable

    Returns:
        CanonicalForm whose automorphisms field is the half-edge count |Aut(Γ)|
    """
    encoded = encode_graph(graph, labelled)
    form = encoded.canonical_form()
    total = form.automorphisms * _loop_flips(encoded.links)
    if not labelled:
        for v in range(graph.n_vertices):
            total *= factorial(len(graph.legs_at(v)))
    return CanonicalForm(form.key, form.code, total, form.order)


def automorphism_count(graph: Graph, labelled: bool = True) -> int:
    return canonicalize(graph, labelled).automorphisms


def canonical_key(graph: Graph, labelled: bool = True) -> str:
    return canonicalize(graph, labelled).key


def canonical_form_of(encoded: ColoredMultigraph, links: Sequence[Link], leg_factor: int = 1) -> CanonicalForm:
    """Canonical form of an already encoded structure, with loop flips and leg permutations applied."""
    form = encoded.canonical_form()
    total = form.automorphisms * _loop_flips(links) * leg_factor
    return CanonicalForm(form.key, form.code, total, form.order)


def canonical_graph(graph: Graph) -> Graph:
    """
    Relabel a graph into its canonical representative.

    Half-edges become h1, h2, ... and edges e1, e2, ...; legs keep their labels.
    Applying it twice gives the same graph.
    """
    form = canonicalize(graph, labelled=True)
    position = {v: i for i, v in enumerate(form.order)}
    edge_order = sorted(
        graph.edges,
        key=lambda n: (
            min(position[x] for x in graph.endpoints[n]),
            max(position[x] for x in graph.endpoints[n]),
            graph.masses.get(n, ''),
        ),
    )
    new_edge = {name: f"e{i}" for i, name in enumerate(edge_order, start=1)}

    def half_key(h: str) -> Tuple:
        if h in graph.leg_label:
            return (0, graph.leg_label[h], 0)
        name = graph.edge_of[h]
        other = graph.partner[h]
        return (1, edge_order.index(name), 0 if graph.edges[name][0] == h else 1, position[graph.vertex_of[other]])

    corollas = []
    rename: Dict[str, str] = {}
    for v in form.order:
        corolla = sorted(graph.vertices[v], key=half_key)
        corollas.append(corolla)
    counter = 0
    for corolla in corollas:
        for h in corolla:
            counter += 1
            rename[h] = f"h{counter}"
    vertices = [[rename[h] for h in c] for c in corollas]
    edges = {}
    for name in edge_order:
        a, b = graph.edges[name]
        pair = sorted((rename[a], rename[b]), key=lambda s: int(s[1:]))
        edges[new_edge[name]] = (pair[0], pair[1])
    legs = [rename[h] for h in graph.legs]
    masses = {new_edge[n]: m for n, m in graph.masses.items()}
    return Graph(vertices, edges, legs, masses, strict=graph.strict)
