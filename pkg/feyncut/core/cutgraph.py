"""Pre-cut, cut, pre-Cutkosky and Cutkosky graphs and graph-forest pairs."""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import factorial
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .canonical import SIBLING, CanonicalForm, ColoredMultigraph, canonical_form_of, canonicalize
from .errors import (
    ForestNotInTreeError,
    GraphError,
    NoCompatibleForestError,
    NoSuchEdgeError,
    NonPartitionError,
)
from .forests import ForestData, spanning_trees
from .graph import Graph

logger = logging.getLogger(__name__)

CORE = 'core'
CUTKOSKY = 'Cutkosky'
PRE_CUTKOSKY = 'preCutkosky'
CUT = 'cut'
PRECUT = 'precut'

Splits = Dict[int, Tuple[FrozenSet[str], ...]]


class PreCutGraph:
    """A graph Γ̂ with a refinement marking cut edges and split corollas.

    The refinement is stored as the set of cut edges and, for every split
    vertex, the final partition of its corolla. The associated graph Γ̃ has
    one vertex per part; the halves of cut edges become its extra legs.
    """

    def __init__(
        self,
        base: Graph,
        cut_edges: Iterable[str] = (),
        vertex_splits: Optional[Mapping[int, Sequence[Iterable[str]]]] = None,
    ):
        """
        Initialize a pre-cut graph.

        Args:
            base: Underlying uncut graph
            cut_edges: Names of the internal edges that are cut
            vertex_splits: Vertex index to the parts of its corolla
        """
        self.base = base
        self.cut_edges: FrozenSet[str] = frozenset(cut_edges)
        for name in self.cut_edges:
            if name not in base.edges:
                raise NoSuchEdgeError(f"Cut edge {name} is not an internal edge")
        self.vertex_splits: Splits = {}
        for v, parts in sorted((vertex_splits or {}).items()):
            normalized = _normalize_parts(base, v, parts)
            if len(normalized) > 1:
                self.vertex_splits[v] = normalized

    # ------------------------------------------------------------------
    # construction and serialization

    @classmethod
    def from_description(cls, description: Mapping[str, Any]) -> 'PreCutGraph':
        """Build from the JSON graph format with cut_edges and vertex_splits keys."""
        base = Graph.from_description(description)
        by_pair = {frozenset(p): name for name, p in base.edges.items()}
        cuts = []
        for pair in description.get('cut_edges', []):
            key = frozenset(str(h) for h in pair)
            if key not in by_pair:
                raise NoSuchEdgeError(f"Cut edge {list(pair)} is not an internal edge")
            cuts.append(by_pair[key])
        splits: Dict[int, List[List[str]]] = {}
        for parts in description.get('vertex_splits', []):
            parts = [[str(h) for h in part] for part in parts]
            first = next((h for part in parts for h in part), None)
            if first is None or first not in base.vertex_of:
                raise NonPartitionError(f"Vertex split {parts} names unknown half-edges")
            splits[base.vertex_of[first]] = parts
        return cls(base, cuts, splits)

    def to_description(self) -> Dict[str, Any]:
        description = self.base.to_description()
        if self.cut_edges:
            description['cut_edges'] = [
                list(self.base.edges[n]) for n in self.base.edges if n in self.cut_edges
            ]
        if self.vertex_splits:
            description['vertex_splits'] = [
                [sorted(part, key=self.base.halfedges.index) for part in parts]
                for parts in self.vertex_splits.values()
            ]
        return description

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PreCutGraph):
            return NotImplemented
        return self._identity == other._identity

    def __hash__(self) -> int:
        return hash(self._identity)

    def __repr__(self) -> str:
        return (
            f"PreCutGraph({self.base!r}, cut={sorted(self.cut_edges)}, "
            f"splits={sorted(self.vertex_splits)})"
        )

    @cached_property
    def _identity(self) -> Tuple:
        return (self.base, tuple(sorted(self.cut_edges)), tuple(self.vertex_splits.items()))

    # ------------------------------------------------------------------
    # associated graph

    @cached_property
    def _parts(self) -> List[Tuple[int, Tuple[str, ...]]]:
        parts = []
        for v, corolla in enumerate(self.base.vertices):
            if v in self.vertex_splits:
                for part in self.vertex_splits[v]:
                    parts.append((v, tuple(h for h in corolla if h in part)))
            else:
                parts.append((v, corolla))
        return parts

    @cached_property
    def associated(self) -> Graph:
        """Γ̃: the graph after cutting edges and splitting corollas."""
        edges = {n: p for n, p in self.base.edges.items() if n not in self.cut_edges}
        legs = list(self.base.legs)
        for name in self.base.edges:
            if name in self.cut_edges:
                legs.extend(self.base.edges[name])
        return Graph(
            [corolla for _, corolla in self._parts],
            edges,
            legs,
            self.base.masses,
            strict=False,
        )

    @property
    def part_vertex(self) -> List[int]:
        """Base vertex of each vertex of the associated graph."""
        return [v for v, _ in self._parts]

    @property
    def loops(self) -> int:
        """|Γ|, the loop number of the uncut graph."""
        return self.base.loops

    @property
    def norm(self) -> int:
        """‖Γ‖, the loop number of the associated graph."""
        return self.associated.loops

    @property
    def h0(self) -> int:
        return self.associated.h0

    def is_core(self) -> bool:
        return not self.cut_edges and not self.vertex_splits

    def is_cut(self) -> bool:
        return not self.vertex_splits

    def is_pre_cutkosky(self) -> bool:
        """Every cut edge joins two different components of Γ̃."""
        assoc = self.associated
        component = {v: i for i, comp in enumerate(assoc.components) for v in comp}
        for name in self.cut_edges:
            a, b = self.base.edges[name]
            if component[assoc.vertex_of[a]] == component[assoc.vertex_of[b]]:
                return False
        return True

    def is_cutkosky(self) -> bool:
        return self.is_cut() and self.is_pre_cutkosky()

    def classify(self) -> str:
        """The tightest of core, Cutkosky, preCutkosky, cut and precut."""
        if self.is_core():
            return CORE
        if self.is_pre_cutkosky():
            return CUTKOSKY if self.is_cut() else PRE_CUTKOSKY
        return CUT if self.is_cut() else PRECUT

    def is_normal(self) -> bool:
        """Every split corolla keeps internal half-edges in at least two parts."""
        for v, parts in self.vertex_splits.items():
            internal = [
                part for part in parts if any(h in self.base.edge_of for h in part)
            ]
            if len(internal) < 2:
                return False
        return True

    @cached_property
    def _component_legs(self) -> List[FrozenSet[int]]:
        assoc = self.associated
        result = []
        for comp in assoc.components:
            labels = {
                self.base.leg_label[h]
                for v in comp
                for h in assoc.vertices[v]
                if h in self.base.leg_label
            }
            result.append(frozenset(labels))
        return result

    def leg_partition(self) -> Tuple[FrozenSet[int], ...]:
        """Partition of the external leg labels by components of Γ̃."""
        return tuple(sorted((p for p in self._component_legs if p), key=min))

    def legless_components(self) -> int:
        return sum(1 for p in self._component_legs if not p)

    def component_leg_counts(self) -> Tuple[int, ...]:
        """Sorted numbers of external legs on the components of Γ̃."""
        return tuple(sorted(len(p) for p in self._component_legs))

    # ------------------------------------------------------------------
    # forests

    def compatible_forests(self) -> List[ForestData]:
        """
        All spanning forests whose crossing edges are exactly the cut edges.

        Built as products of spanning trees of the components of Γ̃; empty when
        the graph is not pre-Cutkosky.

        Returns:
            Forests over the base graph for cut graphs, over Γ̃ otherwise
        """
        if not self.is_pre_cutkosky():
            return []
        assoc = self.associated
        per_component = []
        for comp in assoc.components:
            piece = assoc.induced(comp)
            per_component.append([t.edges for t in spanning_trees(piece)])
        host = self.base if self.is_cut() else assoc
        forests = [ForestData(host, frozenset().union(*choice)) for choice in product(*per_component)]
        return sorted(forests, key=lambda f: sorted(f.edges))

    def is_compatible(self, forest: Union[ForestData, Iterable[str]]) -> bool:
        edges = forest.edges if isinstance(forest, ForestData) else frozenset(forest)
        return any(f.edges == edges for f in self.compatible_forests())

    def associated_data(self, forest: Optional[Union[ForestData, Iterable[str]]] = None) -> 'AssociatedData':
        """
        Γ̃ with its component count, leg partition and the on/off edge sets.

        Args:
            forest: A compatible spanning forest; without it the on/off sets are None

        Returns:
            AssociatedData for this pre-cut graph

        Raises:
            NoCompatibleForestError: if the forest given is not compatible
        """
        e_on = e_off = None
        if forest is not None:
            edges = forest.edges if isinstance(forest, ForestData) else frozenset(forest)
            if not self.is_compatible(edges):
                raise NoCompatibleForestError(
                    f"Forest {sorted(edges)} is not compatible with cut {sorted(self.cut_edges)}"
                )
            e_off = edges
            e_on = frozenset(self.base.edges) - edges
        return AssociatedData(
            associated=self.associated,
            h0=self.h0,
            leg_partition=self.leg_partition(),
            e_on=e_on,
            e_off=e_off,
        )

    def involution_pair(self, forest: Union[ForestData, Iterable[str]]) -> Tuple[Graph, Graph]:
        """The reflection pair (Γ∖E_on, Γ/E_off) for a compatible forest."""
        data = self.associated_data(forest)
        assert data.e_on is not None and data.e_off is not None
        return self.base.delete_edges(data.e_on), self.base.contract_raw(data.e_off)

    # ------------------------------------------------------------------
    # components and canonical form

    def components(self) -> List['PreCutGraph']:
        """Restrictions to the connected components of the base graph."""
        result = []
        for comp in self.base.components:
            keep = sorted(comp)
            index = {v: i for i, v in enumerate(keep)}
            piece = self.base.induced(keep)
            result.append(
                PreCutGraph(
                    piece,
                    [n for n in self.cut_edges if n in piece.edges],
                    {index[v]: parts for v, parts in self.vertex_splits.items() if v in index},
                )
            )
        return result

    def encode(self, labelled: bool = True) -> Tuple[ColoredMultigraph, List[Tuple[int, int, Any]], int]:
        """Colored multigraph of the refinement: vertex nodes, part nodes and decorated edges."""
        base = self.base
        labels: List[Any] = []
        node_of_half: Dict[str, int] = {}
        sibling_links = []
        leg_factor = 1
        for v, corolla in enumerate(base.vertices):
            legs = base.legs_at(v)
            vertex_node = len(labels)
            labels.append(('v', len(corolla), tuple(sorted(legs)) if labelled else len(legs)))
            if v not in self.vertex_splits:
                for h in corolla:
                    node_of_half[h] = vertex_node
                leg_factor *= factorial(len(legs))
                continue
            for part in self.vertex_splits[v]:
                part_legs = sorted(base.leg_label[h] for h in part if h in base.leg_label)
                part_node = len(labels)
                labels.append(('p', len(part), tuple(part_legs) if labelled else len(part_legs)))
                sibling_links.append((vertex_node, part_node, SIBLING))
                for h in part:
                    node_of_half[h] = part_node
                leg_factor *= factorial(len(part_legs))
        links = [
            (
                node_of_half[a],
                node_of_half[b],
                ('e', base.masses.get(name, ''), name in self.cut_edges),
            )
            for name, (a, b) in base.edges.items()
        ]
        kind = 'P' if labelled else 'p'
        return ColoredMultigraph(kind, labels, links + sibling_links), links, leg_factor

    def canonical_form(self, labelled: bool = True) -> CanonicalForm:
        if self.is_core():
            return canonicalize(self.base, labelled)
        if labelled not in self._forms:
            encoded, links, leg_factor = self.encode(labelled)
            self._forms[labelled] = canonical_form_of(
                encoded, links, leg_factor if not labelled else 1
            )
        return self._forms[labelled]

    @cached_property
    def _forms(self) -> Dict[bool, CanonicalForm]:
        return {}

    def key(self, labelled: bool = True) -> str:
        return self.canonical_form(labelled).key

    def automorphisms(self, labelled: bool = True) -> int:
        return self.canonical_form(labelled).automorphisms


@dataclass(frozen=True)
class AssociatedData:
    """Derived data of a pre-cut graph; e_on and e_off need a chosen forest."""

    associated: Graph
    h0: int
    leg_partition: Tuple[FrozenSet[int], ...]
    e_on: Optional[FrozenSet[str]] = None
    e_off: Optional[FrozenSet[str]] = None


class GraphForestPair:
    """A graph with a spanning forest F, optionally inside a spanning tree T."""

    def __init__(self, graph: Graph, forest: Iterable[str], tree: Optional[Iterable[str]] = None):
        """
        Initialize the pair.

        Args:
            graph: The graph
            forest: Edge names of an acyclic edge set
            tree: Edge names of a spanning tree containing the forest
        """
        self.graph = graph
        self.forest: FrozenSet[str] = frozenset(forest)
        self.tree: Optional[FrozenSet[str]] = frozenset(tree) if tree is not None else None
        for name in self.forest | (self.tree or frozenset()):
            if name not in graph.edges:
                raise NoSuchEdgeError(f"No internal edge named {name}")
        if not self.forest_data.is_acyclic():
            raise GraphError(f"Edges {sorted(self.forest)} contain a cycle")
        if self.tree is not None:
            if not self.forest <= self.tree:
                raise ForestNotInTreeError(
                    f"Forest {sorted(self.forest)} is not inside tree {sorted(self.tree)}"
                )
            if not self.tree_data.is_spanning_tree():
                raise ForestNotInTreeError(f"Edges {sorted(self.tree)} are not a spanning tree")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphForestPair):
            return NotImplemented
        return (self.graph, self.forest, self.tree) == (other.graph, other.forest, other.tree)

    def __hash__(self) -> int:
        return hash((self.graph, self.forest, self.tree))

    def __repr__(self) -> str:
        tree = sorted(self.tree) if self.tree is not None else None
        return f"GraphForestPair({self.graph!r}, F={sorted(self.forest)}, T={tree})"

    @cached_property
    def forest_data(self) -> ForestData:
        return ForestData(self.graph, self.forest)

    @cached_property
    def tree_data(self) -> ForestData:
        if self.tree is None:
            raise ForestNotInTreeError("The pair carries no spanning tree")
        return ForestData(self.graph, self.tree)

    @property
    def cut(self) -> FrozenSet[str]:
        """Ĕ_F, the edges the forest cuts."""
        return self.forest_data.crossing_edges

    def cut_graph(self) -> PreCutGraph:
        return PreCutGraph(self.graph, self.cut)

    def components(self) -> List['GraphForestPair']:
        result = []
        for comp in self.graph.components:
            piece = self.graph.induced(comp)
            names = set(piece.edges)
            tree = None if self.tree is None else self.tree & names
            result.append(GraphForestPair(piece, self.forest & names, tree))
        return result

    def canonical_form(self, labelled: bool = True) -> CanonicalForm:
        labels = []
        leg_factor = 1
        for v in range(self.graph.n_vertices):
            legs = self.graph.legs_at(v)
            labels.append(('v', self.graph.valence(v), tuple(sorted(legs)) if labelled else len(legs)))
            leg_factor *= factorial(len(legs))
        links = [
            (
                u,
                v,
                (
                    'e',
                    self.graph.masses.get(name, ''),
                    name in self.forest,
                    self.tree is not None and name in self.tree,
                ),
            )
            for name, (u, v) in self.graph.endpoints.items()
        ]
        kind = ('T' if self.tree is not None else 'F')
        encoded = ColoredMultigraph(kind if labelled else kind.lower(), labels, links)
        return canonical_form_of(encoded, links, 1 if labelled else leg_factor)

    def key(self, labelled: bool = True) -> str:
        return self.canonical_form(labelled).key


def _normalize_parts(base: Graph, v: int, parts: Sequence[Iterable[str]]) -> Tuple[FrozenSet[str], ...]:
    if not 0 <= v < base.n_vertices:
        raise NonPartitionError(f"Vertex {v} does not exist")
    corolla = base.vertices[v]
    sets = [frozenset(p) for p in parts if p]
    covered: List[str] = [h for p in sets for h in p]
    if len(covered) != len(set(covered)) or set(covered) != set(corolla):
        raise NonPartitionError(
            f"Split parts {[sorted(p) for p in sets]} do not partition corolla {list(corolla)}"
        )
    return tuple(sorted(sets, key=lambda p: min(corolla.index(h) for h in p)))


def cut_from_forest(pair: Union[GraphForestPair, ForestData]) -> PreCutGraph:
    """The Cutkosky graph whose cut edges are the crossing edges Ĕ_F."""
    if isinstance(pair, GraphForestPair):
        return pair.cut_graph()
    return PreCutGraph(pair.graph, pair.crossing_edges)


def classify(graph: PreCutGraph) -> str:
    return graph.classify()


def compatible_forests(graph: PreCutGraph) -> List[ForestData]:
    forests = graph.compatible_forests()
    if not forests:
        logger.warning(f"No compatible spanning forest for {graph!r}")
    return forests
