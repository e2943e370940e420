"""Half-edge graphs: representation, validation, contraction and deletion."""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from .errors import (
    BadEdgePartError,
    BridgedSubgraphError,
    NoSuchEdgeError,
    NonPartitionError,
    NotFullAtVerticesError,
    SmallCorollaError,
)

logger = logging.getLogger(__name__)

# An elided corolla: the original vertices merged into it and its two half-edges.
ElidedCorolla = Tuple[FrozenSet[int], Tuple[str, str]]


class Graph:
    """A Feynman graph given by a vertex and an edge partition of its half-edges.

    Vertices are corollas (tuples of half-edge ids). Internal edges are named
    pairs of half-edges; the remaining half-edges are external legs whose
    labels 1..n follow the order of ``legs``.
    """

    def __init__(
        self,
        vertices: Sequence[Sequence[str]],
        edges: Mapping[str, Tuple[str, str]],
        legs: Sequence[str],
        masses: Optional[Mapping[str, str]] = None,
        strict: bool = True,
    ):
        """
        Initialize a graph.

        Args:
            vertices: Corollas, each an ordered sequence of half-edge ids
            edges: Edge name to its two half-edges, in edge order
            legs: External half-edges, in leg-label order
            masses: Optional edge name to mass symbol
            strict: Require every corolla to have at least three half-edges
        """
        self.vertices: Tuple[Tuple[str, ...], ...] = tuple(tuple(c) for c in vertices)
        self.edges: Dict[str, Tuple[str, str]] = {
            name: (pair[0], pair[1]) for name, pair in edges.items()
        }
        self.legs: Tuple[str, ...] = tuple(legs)
        self.masses: Dict[str, str] = {
            name: m for name, m in (masses or {}).items() if name in self.edges
        }
        self.strict = strict
        self._validate()

    def _validate(self) -> None:
        seen = set()
        for corolla in self.vertices:
            if self.strict and len(corolla) < 3:
                raise SmallCorollaError(
                    f"Corolla {list(corolla)} has {len(corolla)} half-edges, need at least 3"
                )
            for h in corolla:
                if h in seen:
                    raise NonPartitionError(f"Half-edge {h} appears in two corollas")
                seen.add(h)

        covered = set()
        for name, (a, b) in self.edges.items():
            if a == b:
                raise BadEdgePartError(f"Edge {name} repeats half-edge {a}")
            for h in (a, b):
                if h in covered:
                    raise NonPartitionError(f"Half-edge {h} appears in two edge parts")
                covered.add(h)
        for h in self.legs:
            if h in covered:
                raise NonPartitionError(f"Half-edge {h} appears in two edge parts")
            covered.add(h)

        if covered != seen:
            missing = sorted(seen ^ covered)
            raise NonPartitionError(
                f"Vertex and edge partitions disagree on half-edges {missing}"
            )

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def empty(cls) -> 'Graph':
        """The empty graph, unit of the algebra."""
        return cls([], {}, [])

    @classmethod
    def from_edges(
        cls,
        edge_list: Sequence[Tuple[int, int]],
        legs: Sequence[int] = (),
        masses: Optional[Mapping[int, str]] = None,
        n_vertices: Optional[int] = None,
        strict: bool = True,
    ) -> 'Graph':
        """
        Build a graph from vertex pairs.

        Args:
            edge_list: Pairs of vertex indices, one per internal edge (named e1, e2, ...)
            legs: Vertex index of each external leg, in label order
            masses: Optional 0-based edge position to mass symbol
            n_vertices: Vertex count (defaults to the largest index used plus one)
            strict: Forwarded to the constructor

        Returns:
            The graph with generated half-edge ids
        """
        used = [v for pair in edge_list for v in pair] + list(legs)
        nv = n_vertices if n_vertices is not None else (max(used) + 1 if used else 0)
        corollas: List[List[str]] = [[] for _ in range(nv)]
        leg_halves = []
        for j, v in enumerate(legs, start=1):
            h = f"l{j}"
            corollas[v].append(h)
            leg_halves.append(h)
        edges = {}
        for i, (u, v) in enumerate(edge_list, start=1):
            a, b = f"h{2 * i - 1}", f"h{2 * i}"
            corollas[u].append(a)
            corollas[v].append(b)
            edges[f"e{i}"] = (a, b)
        named_masses = {f"e{i + 1}": m for i, m in (masses or {}).items()}
        return cls(corollas, edges, leg_halves, named_masses, strict=strict)

    @classmethod
    def from_description(cls, description: Mapping[str, Any]) -> 'Graph':
        """
        Validate a raw JSON-style description.

        Args:
            description: Dictionary with halfedges, vertices, edges and externals

        Returns:
            The validated graph
        """
        vertices = [list(map(str, c)) for c in description.get('vertices', [])]
        externals = [str(h) for h in description.get('externals', [])]
        edges = {}
        singles = []
        for part in description.get('edges', []):
            part = [str(h) for h in part]
            if len(part) > 2:
                raise BadEdgePartError(f"Edge part {part} has more than two half-edges")
            if len(part) == 2:
                edges[f"e{len(edges) + 1}"] = (part[0], part[1])
            elif len(part) == 1:
                singles.append(part[0])
        legs = list(externals)
        for h in singles:
            if h not in legs:
                legs.append(h)

        listed = description.get('halfedges')
        if listed is not None:
            in_vertices = {h for c in vertices for h in c}
            listed = [str(h) for h in listed]
            if len(set(listed)) != len(listed) or set(listed) != in_vertices:
                raise NonPartitionError(
                    "The halfedges list does not match the half-edges of the corollas"
                )

        by_pair = {frozenset(p): name for name, p in edges.items()}
        masses = {}
        for key, symbol in description.get('edge_masses', {}).items():
            pair = frozenset(s.strip() for s in str(key).split(','))
            if pair not in by_pair:
                raise NoSuchEdgeError(f"Mass given for unknown edge {key}")
            masses[by_pair[pair]] = str(symbol)
        return cls(vertices, edges, legs, masses)

    def to_description(self) -> Dict[str, Any]:
        """Serialize to the JSON graph format."""
        description: Dict[str, Any] = {
            'halfedges': list(self.halfedges),
            'vertices': [list(c) for c in self.vertices],
            'edges': [list(p) for p in self.edges.values()],
            'externals': list(self.legs),
        }
        if self.masses:
            description['edge_masses'] = {
                ','.join(self.edges[name]): m for name, m in self.masses.items()
            }
        return description

    # ------------------------------------------------------------------
    # structure

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._identity == other._identity

    def __hash__(self) -> int:
        return hash(self._identity)

    def __repr__(self) -> str:
        return (
            f"Graph(v={self.n_vertices}, e={self.n_edges}, l={self.n_legs}, "
            f"loops={self.loops})"
        )

    @cached_property
    def _identity(self) -> Tuple:
        return (
            self.vertices,
            tuple(self.edges.items()),
            self.legs,
            tuple(sorted(self.masses.items())),
        )

    @cached_property
    def halfedges(self) -> Tuple[str, ...]:
        return tuple(h for c in self.vertices for h in c)

    @cached_property
    def vertex_of(self) -> Dict[str, int]:
        return {h: i for i, c in enumerate(self.vertices) for h in c}

    @cached_property
    def edge_of(self) -> Dict[str, str]:
        return {h: name for name, pair in self.edges.items() for h in pair}

    @cached_property
    def partner(self) -> Dict[str, str]:
        result = {}
        for a, b in self.edges.values():
            result[a] = b
            result[b] = a
        return result

    @cached_property
    def endpoints(self) -> Dict[str, Tuple[int, int]]:
        return {
            name: (self.vertex_of[a], self.vertex_of[b])
            for name, (a, b) in self.edges.items()
        }

    @cached_property
    def leg_label(self) -> Dict[str, int]:
        return {h: i for i, h in enumerate(self.legs, start=1)}

    @property
    def edge_names(self) -> Tuple[str, ...]:
        return tuple(self.edges)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_legs(self) -> int:
        return len(self.legs)

    def valence(self, v: int) -> int:
        return len(self.vertices[v])

    def legs_at(self, v: int) -> List[int]:
        """Leg labels sitting at vertex v."""
        return [self.leg_label[h] for h in self.vertices[v] if h in self.leg_label]

    def is_self_loop(self, name: str) -> bool:
        u, v = self.endpoints[name]
        return u == v

    def to_networkx(self) -> nx.MultiGraph:
        """Vertex-level multigraph view with edge keys equal to edge names."""
        return self._nx.copy()

    @cached_property
    def _nx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.n_vertices))
        for name, (u, v) in self.endpoints.items():
            g.add_edge(u, v, key=name)
        return g

    @cached_property
    def components(self) -> Tuple[FrozenSet[int], ...]:
        comps = [frozenset(c) for c in nx.connected_components(self._nx)]
        return tuple(sorted(comps, key=min))

    @property
    def h0(self) -> int:
        return len(self.components)

    @property
    def loops(self) -> int:
        """Loop number |Γ| = e − v + h0."""
        return self.n_edges - self.n_vertices + self.h0

    def is_connected(self) -> bool:
        return self.h0 <= 1

    @cached_property
    def bridges(self) -> FrozenSet[str]:
        simple = nx.Graph()
        simple.add_nodes_from(range(self.n_vertices))
        multiplicity: Dict[FrozenSet[int], List[str]] = {}
        for name, (u, v) in self.endpoints.items():
            if u == v:
                continue
            simple.add_edge(u, v)
            multiplicity.setdefault(frozenset((u, v)), []).append(name)
        result = set()
        for u, v in nx.bridges(simple):
            names = multiplicity[frozenset((u, v))]
            if len(names) == 1:
                result.add(names[0])
        return frozenset(result)

    def is_bridgeless(self) -> bool:
        return not self.bridges

    # ------------------------------------------------------------------
    # subgraphs and deletion

    def subgraph(self, edge_names: Iterable[str]) -> 'Graph':
        """
        Subgraph generated by internal edges, with full corollas.

        Args:
            edge_names: Internal edges of the subgraph

        Returns:
            Graph on the touched corollas; all other half-edges of those
            corollas become its legs, in the parent's half-edge order
        """
        names = self._check_edges(edge_names)
        touched = sorted({v for name in names for v in self.endpoints[name]})
        edges = {name: self.edges[name] for name in self.edges if name in names}
        inner = {h for pair in edges.values() for h in pair}
        legs = [h for v in touched for h in self.vertices[v] if h not in inner]
        return Graph(
            [self.vertices[v] for v in touched], edges, legs, self.masses, strict=False
        )

    def induced(self, vertex_set: Iterable[int]) -> 'Graph':
        """Graph on a union of connected components (edges and legs included)."""
        keep = sorted(set(vertex_set))
        inside = {h for v in keep for h in self.vertices[v]}
        edges = {
            name: pair for name, pair in self.edges.items() if pair[0] in inside
        }
        legs = [h for h in self.legs if h in inside]
        return Graph(
            [self.vertices[v] for v in keep], edges, legs, self.masses, strict=self.strict
        )

    def component_graphs(self) -> List['Graph']:
        return [self.induced(c) for c in self.components]

    def delete_edges(self, edge_names: Iterable[str]) -> 'Graph':
        """Split each named edge into two external legs, appended in edge order."""
        names = self._check_edges(edge_names)
        edges = {n: p for n, p in self.edges.items() if n not in names}
        legs = list(self.legs)
        for name in self.edges:
            if name in names:
                legs.extend(self.edges[name])
        return Graph(self.vertices, edges, legs, self.masses, strict=self.strict)

    def cut(self, edge_name: str) -> 'Graph':
        """Cut a single edge: its part splits into two singleton legs."""
        return self.delete_edges([edge_name])

    def add_zero_momentum_legs(self) -> 'Graph':
        """Add one external leg at every vertex that carries none."""
        vertices = [list(c) for c in self.vertices]
        legs = list(self.legs)
        for v, corolla in enumerate(self.vertices):
            if not any(h in self.leg_label for h in corolla):
                h = f"z{v + 1}"
                vertices[v].append(h)
                legs.append(h)
        return Graph(vertices, self.edges, legs, self.masses, strict=self.strict)

    def _check_edges(self, edge_names: Iterable[str]) -> FrozenSet[str]:
        names = frozenset(edge_names)
        for name in names:
            if name not in self.edges:
                raise NoSuchEdgeError(f"No internal edge named {name}")
        return names

    # ------------------------------------------------------------------
    # contraction

    def contract(self, edge_name: str) -> 'Graph':
        """Contract one internal edge, eliding any resulting 2-valent vertex."""
        return self.contract_with_origins([edge_name]).graph

    def contract_raw(self, edge_names: Iterable[str]) -> 'Graph':
        """Multigraph contraction without elision; edge names are preserved."""
        return self.contract_with_origins(edge_names, elide=False).graph

    def contract_subgraph(self, gamma: Union['Graph', Iterable[str]]) -> 'Graph':
        """
        Co-graph Γ/γ of a bridgeless subgraph that is full at its vertices.

        Args:
            gamma: Subgraph given as a Graph built from this graph's half-edges,
                or as a collection of internal edge names

        Returns:
            The contracted and elided graph
        """
        return self.contract_with_origins(self._subgraph_edges(gamma)).graph

    def _subgraph_edges(self, gamma: Union['Graph', Iterable[str]]) -> FrozenSet[str]:
        if isinstance(gamma, Graph):
            corollas = set(self.vertices)
            for corolla in gamma.vertices:
                if corolla not in corollas:
                    raise NotFullAtVerticesError(
                        f"Corolla {list(corolla)} is not a full corolla of the graph"
                    )
            names = self._check_edges(gamma.edges)
        else:
            names = self._check_edges(gamma)
        if names and not self.subgraph(names).is_bridgeless():
            raise BridgedSubgraphError(
                f"Subgraph {sorted(names)} has bridges {sorted(self.subgraph(names).bridges)}"
            )
        return names

    def contract_with_origins(
        self, edge_names: Iterable[str], elide: bool = True
    ) -> 'ContractionResult':
        """
        Contract a set of internal edges and record where everything came from.

        Args:
            edge_names: Edges to contract
            elide: Replace 2-valent vertices with two edge halves by one edge

        Returns:
            ContractionResult with the new graph and its provenance maps
        """
        names = self._check_edges(edge_names)
        parent = list(range(self.n_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for name in names:
            u, v = self.endpoints[name]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)

        removed = {h for name in names for h in self.edges[name]}
        groups: Dict[int, List[int]] = {}
        for v in range(self.n_vertices):
            groups.setdefault(find(v), []).append(v)
        order = sorted(groups, key=lambda r: groups[r][0])
        corollas = [
            [h for v in groups[r] for h in self.vertices[v] if h not in removed]
            for r in order
        ]
        sources = [frozenset(groups[r]) for r in order]

        edges = {n: p for n, p in self.edges.items() if n not in names}
        origins = {n: frozenset([n]) for n in edges}
        elided: Dict[str, List[ElidedCorolla]] = {n: [] for n in edges}
        masses = {n: m for n, m in self.masses.items() if n in edges}
        legs = list(self.legs)
        absorbed: Dict[str, FrozenSet[str]] = {}

        changed = elide
        while changed:
            changed = False
            edge_of = {h: n for n, pair in edges.items() for h in pair}
            for i, corolla in enumerate(corollas):
                if len(corolla) != 2:
                    continue
                a, b = corolla
                ea, eb = edge_of.get(a), edge_of.get(b)
                if ea is not None and eb is not None and ea != eb:
                    first, second = (ea, eb) if _before(edges, ea, eb) else (eb, ea)
                    h_first = a if first == ea else b
                    h_second = b if first == ea else a
                    p = _other(edges[first], h_first)
                    q = _other(edges[second], h_second)
                    chain = (
                        elided[first]
                        + [(sources[i], (h_first, h_second))]
                        + elided[second]
                    )
                    merged = origins[first] | origins[second]
                    edges = _replace_edge(edges, first, second, (p, q))
                    origins[first] = merged
                    elided[first] = chain
                    del origins[second], elided[second]
                    masses.pop(second, None)
                elif (ea is None) != (eb is None):
                    leg, half = (a, b) if ea is None else (b, a)
                    name = edge_of[half]
                    p = _other(edges[name], half)
                    legs[legs.index(leg)] = p
                    absorbed[p] = origins[name]
                    edges = {n: pr for n, pr in edges.items() if n != name}
                    del origins[name], elided[name]
                    masses.pop(name, None)
                else:
                    continue
                del corollas[i]
                del sources[i]
                changed = True
                break

        graph = Graph(corollas, edges, legs, masses, strict=False)
        return ContractionResult(
            graph=graph,
            origins=origins,
            vertex_sources=tuple(sources),
            elided=elided,
            absorbed=absorbed,
        )


@dataclass
class ContractionResult:
    """A contracted graph with maps back to the graph it came from."""

    graph: Graph
    # new edge name -> original edges fused into it
    origins: Dict[str, FrozenSet[str]]
    # new vertex index -> original vertex indices merged into it
    vertex_sources: Tuple[FrozenSet[int], ...]
    # new edge name -> elided corollas along it, in order
    elided: Dict[str, List[ElidedCorolla]] = field(default_factory=dict)
    # leg half-edge -> original edges that collapsed into that leg
    absorbed: Dict[str, FrozenSet[str]] = field(default_factory=dict)


def _before(edges: Mapping[str, Tuple[str, str]], a: str, b: str) -> bool:
    order = list(edges)
    return order.index(a) < order.index(b)


def _other(pair: Tuple[str, str], half: str) -> str:
    return pair[1] if pair[0] == half else pair[0]


def _replace_edge(
    edges: Mapping[str, Tuple[str, str]],
    keep: str,
    drop: str,
    halves: Tuple[str, str],
) -> Dict[str, Tuple[str, str]]:
    result = {}
    for name, pair in edges.items():
        if name == keep:
            result[name] = halves
        elif name != drop:
            result[name] = pair
    return result
