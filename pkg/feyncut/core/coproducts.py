"""Coproducts and coactions on graphs, pre-cut graphs and graph-forest pairs."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from .algebra import (
    Generator,
    GraphSum,
    Monomial,
    TensorSum,
    _underlying,
    generator_key,
    one_leg,
)
from .cutgraph import GraphForestPair, PreCutGraph
from .errors import ForestNotInTreeError, NotBridgelessError, NotProperlyCutError
from .forests import ForestData, enumerate_subgraphs
from .graph import Graph

logger = logging.getLogger(__name__)

Input = Union[GraphSum, Monomial, Generator]


def _as_precut(generator: Generator) -> PreCutGraph:
    if isinstance(generator, PreCutGraph):
        return generator
    return PreCutGraph(_underlying(generator))


def _require_bridgeless(graph: Graph) -> None:
    if not graph.is_bridgeless():
        raise NotBridgelessError(
            f"Coproduct generator has bridges {sorted(graph.bridges)}"
        )


def sub_precut(graph: PreCutGraph, names: Iterable[str]) -> PreCutGraph:
    """The pre-cut subgraph on the given edges; it inherits cuts and splits."""
    names = frozenset(names)
    base = graph.base
    touched = sorted({v for n in names for v in base.endpoints[n]})
    index = {v: i for i, v in enumerate(touched)}
    return PreCutGraph(
        base.subgraph(names),
        names & graph.cut_edges,
        {index[v]: parts for v, parts in graph.vertex_splits.items() if v in index},
    )


def co_precut(graph: PreCutGraph, names: Iterable[str], sub: Optional[PreCutGraph] = None) -> PreCutGraph:
    """
    The co-graph Γ/γ with its induced cut corollas.

    An edge of the co-graph is cut when one of the edges fused into it was
    cut, or when an elided corolla joins two different components of γ̃.
    A vertex formed by contracting γ is split by the components of γ̃.

    Args:
        graph: The pre-cut graph Γ
        names: Edges of the subgraph γ
        sub: The subgraph, when already built

    Returns:
        The pre-cut co-graph
    """
    names = frozenset(names)
    sub = sub if sub is not None else sub_precut(graph, names)
    result = graph.base.contract_with_origins(names)
    co = result.graph
    assoc = sub.associated
    node_component = {v: i for i, comp in enumerate(assoc.components) for v in comp}
    component_of = {h: node_component[assoc.vertex_of[h]] for h in assoc.halfedges}

    cut = set()
    for name in co.edges:
        if result.origins[name] & graph.cut_edges:
            cut.add(name)
        elif any(component_of[a] != component_of[b] for _, (a, b) in result.elided[name]):
            cut.add(name)

    touched = {v for n in names for v in graph.base.endpoints[n]}
    splits: Dict[int, List[FrozenSet[str]]] = {}
    for i, sources in enumerate(result.vertex_sources):
        corolla = co.vertices[i]
        if not sources & touched:
            (v,) = tuple(sources)
            if v in graph.vertex_splits:
                present = set(corolla)
                splits[i] = [part & present for part in graph.vertex_splits[v]]
            continue
        groups: Dict[int, List[str]] = {}
        for h in corolla:
            groups.setdefault(component_of[h], []).append(h)
        if len(groups) > 1:
            splits[i] = [frozenset(g) for g in groups.values()]
    return PreCutGraph(co, cut, splits)


class Coproduct:
    """A coproduct given on connected generators and extended multiplicatively."""

    name = 'abstract'

    def __init__(self) -> None:
        self._cache: Dict[str, TensorSum] = {}

    def generator_terms(self, generator: Generator) -> TensorSum:
        raise NotImplementedError

    def on_generator(self, generator: Generator) -> TensorSum:
        key = generator_key(generator)
        if key not in self._cache:
            self._cache[key] = self.generator_terms(generator)
            logger.debug(f"{self.name}: {len(self._cache[key])} terms for {key}")
        return self._cache[key]

    def on_monomial(self, monomial: Monomial) -> TensorSum:
        result = TensorSum({(Monomial.unit(), Monomial.unit()): 1})
        for factor in monomial.factors:
            result = result * self.on_generator(factor)
        return result

    def __call__(self, x: Input) -> TensorSum:
        result = TensorSum()
        for monomial, coeff in one_leg(x).items():
            result = result + self.on_monomial(monomial).scale(coeff)
        return result

    def reduced(self, x: Input) -> TensorSum:
        """Δ̃(x) = Δ(x) − x⊗𝕀 − 𝕀⊗x, taken monomial by monomial."""
        result = TensorSum()
        unit = Monomial.unit()
        for monomial, coeff in one_leg(x).items():
            if monomial.is_unit():
                continue
            full = self.on_monomial(monomial)
            # projections may already have removed the primitive part
            for word in ((monomial, unit), (unit, monomial)):
                if word in full:
                    full.add(word, -1)
            result = result + full.scale(coeff)
        return result

    @staticmethod
    def counit(monomial: Monomial) -> Fraction:
        return Fraction(1 if monomial.is_unit() else 0)


class CoreCoproduct(Coproduct):
    """Δ_core(Γ) = Σ γ ⊗ Γ/γ over bridgeless subgraphs full at their vertices."""

    name = 'core'

    def __init__(self, elide: bool = True):
        """
        Initialize Δ_core.

        Args:
            elide: Merge the two edges at a 2-valent vertex of a co-graph;
                with False co-graphs keep every vertex of the contraction
        """
        super().__init__()
        self.elide = elide
        if not elide:
            self.name = 'core-raw'

    def generator_terms(self, generator: Generator) -> TensorSum:
        graph = _underlying(generator)
        _require_bridgeless(graph)
        terms = TensorSum()
        terms.add((Monomial.unit(), Monomial.of(graph)), 1)
        for names in enumerate_subgraphs(graph):
            left = Monomial.of(graph.subgraph(names))
            right = Monomial.of(graph.contract_with_origins(names, elide=self.elide).graph)
            terms.add((left, right), 1)
        return terms


def in_h_n(monomial: Monomial, allowed: FrozenSet[int]) -> bool:
    """Every unsplit vertex of every factor has valence − 2 in the allowed set."""
    for factor in monomial.factors:
        graph = _underlying(factor)
        split = factor.vertex_splits if isinstance(factor, PreCutGraph) else {}
        if any(
            graph.valence(v) - 2 not in allowed
            for v in range(graph.n_vertices) if v not in split
        ):
            return False
    return True


def project_n(x: Input, allowed: Iterable[int]) -> GraphSum:
    """P_N: keep the monomials all of whose vertices have valence − 2 in N."""
    allowed = frozenset(allowed)
    return GraphSum({m: c for m, c in one_leg(x).terms.items() if in_h_n(m, allowed)})


class ProjectedCoproduct(Coproduct):
    """Δ_N = (P_N ⊗ P_N) ∘ Δ_core ∘ P_N."""

    name = 'N'

    def __init__(self, allowed: Iterable[int]):
        """
        Initialize the projected coproduct.

        Args:
            allowed: The set N of admissible valences minus two
        """
        super().__init__()
        self.allowed = frozenset(allowed)
        self.core = CoreCoproduct()

    def generator_terms(self, generator: Generator) -> TensorSum:
        if not in_h_n(Monomial.of(generator), self.allowed):
            return TensorSum()
        terms = TensorSum()
        for (left, right), coeff in self.core.on_generator(generator).terms.items():
            if in_h_n(left, self.allowed) and in_h_n(right, self.allowed):
                terms.add((left, right), coeff)
        return terms


class PreCutkoskyCoproduct(Coproduct):
    """Δ_pC: the core skeleton of Γ̂ lifted to pre-cut sub- and co-graphs."""

    name = 'pC'

    def __init__(self, normal_vertex_cuts: bool = False, allowed: Optional[Iterable[int]] = None):
        """
        Initialize Δ_pC.

        Args:
            normal_vertex_cuts: Drop terms with a non-normal split corolla
            allowed: If given, keep only terms whose unsplit vertices have
                valence − 2 in this set, as P_N does for Δ_N
        """
        super().__init__()
        self.normal_vertex_cuts = normal_vertex_cuts
        self.allowed = None if allowed is None else frozenset(allowed)

    def _normal(self, monomial: Monomial) -> bool:
        return all(
            not isinstance(f, PreCutGraph) or f.is_normal() for f in monomial.factors
        )

    def generator_terms(self, generator: Generator) -> TensorSum:
        graph = _as_precut(generator)
        _require_bridgeless(graph.base)
        if self.allowed is not None and not in_h_n(Monomial.of(graph), self.allowed):
            return TensorSum()
        terms = TensorSum()
        terms.add((Monomial.unit(), Monomial.of(graph)), 1)
        everything = frozenset(graph.base.edges)
        for names in enumerate_subgraphs(graph.base):
            if names == everything:
                terms.add((Monomial.of(graph), Monomial.unit()), 1)
                continue
            sub = sub_precut(graph, names)
            left = Monomial.of(sub)
            right = Monomial.of(co_precut(graph, names, sub))
            if self.normal_vertex_cuts and not (self._normal(left) and self._normal(right)):
                continue
            if self.allowed is not None and not (in_h_n(left, self.allowed) and in_h_n(right, self.allowed)):
                continue
            terms.add((left, right), 1)
        return terms


class GraphForestCoproduct(Coproduct):
    """Δ_GF on pairs (Γ, F): subgraph terms that keep F a forest with the same leg partition."""

    name = 'GF'

    def generator_terms(self, generator: Generator) -> TensorSum:
        if not isinstance(generator, GraphForestPair):
            generator = GraphForestPair(_underlying(generator), ())
        graph, forest = generator.graph, generator.forest
        _require_bridgeless(graph)
        pair = GraphForestPair(graph, forest)
        partition = ForestData(graph, forest).leg_partition()
        terms = TensorSum()
        terms.add((Monomial.unit(), Monomial.of(pair)), 1)
        everything = frozenset(graph.edges)
        for names in enumerate_subgraphs(graph):
            if names == everything:
                terms.add((Monomial.of(pair), Monomial.unit()), 1)
                continue
            result = graph.contract_with_origins(names)
            co = result.graph
            kept = frozenset(n for n in co.edges if result.origins[n] <= forest)
            co_forest = ForestData(co, kept)
            if not co_forest.is_acyclic() or co_forest.leg_partition() != partition:
                continue
            left = GraphForestPair(graph.subgraph(names), forest & names)
            terms.add((Monomial.of(left), Monomial.of(GraphForestPair(co, kept))), 1)
        return terms


@dataclass(frozen=True)
class GTTerm:
    """One term of Δ_GT with the set P of intact fundamental cycles it contracts."""

    cycles: FrozenSet[str]
    contracted: FrozenSet[str]
    left: Optional[GraphForestPair]
    right: Optional[GraphForestPair]


def intact_loop_edges(pair: GraphForestPair) -> List[str]:
    """𝖫_F: loop edges e of the tree whose tree path t_e lies in F."""
    tree = pair.tree_data
    return sorted(
        e for e in tree.non_forest_edges if (tree.tree_path(e) or frozenset()) <= pair.forest
    )


def gt_terms(pair: GraphForestPair) -> List[GTTerm]:
    """
    Terms of the coaction Δ_GT with their provenance.

    Args:
        pair: A pair (Γ, F) carrying a spanning tree T ⊇ F

    Returns:
        The 𝕀⊗(Γ,F) term followed by one term per nonempty P ⊆ 𝖫_F
    """
    if pair.tree is None:
        raise ForestNotInTreeError("Δ_GT needs the spanning tree containing the forest")
    tree = pair.tree_data
    graph = pair.graph
    terms = [GTTerm(frozenset(), frozenset(), None, pair)]
    intact = intact_loop_edges(pair)
    for size in range(1, len(intact) + 1):
        for chosen in combinations(intact, size):
            paths: FrozenSet[str] = frozenset().union(*(tree.tree_path(e) for e in chosen))
            contracted = paths | frozenset(chosen)
            left = GraphForestPair(graph.subgraph(contracted), paths, paths)
            right = GraphForestPair(
                graph.contract_raw(contracted), pair.forest - paths, pair.tree - paths
            )
            terms.append(GTTerm(frozenset(chosen), contracted, left, right))
    return terms


class GraphTreeCoaction(Coproduct):
    """Δ_GT(Γ,F) = Σ_{P ⊆ 𝖫_F} (p, t_p) ⊗ (Γ/p, F∖t_p)."""

    name = 'GT'

    def generator_terms(self, generator: Generator) -> TensorSum:
        if not isinstance(generator, GraphForestPair):
            raise ForestNotInTreeError("Δ_GT acts on graph-forest pairs")
        terms = TensorSum()
        for term in gt_terms(generator):
            left = Monomial.of(term.left) if term.left is not None else Monomial.unit()
            terms.add((left, Monomial.of(term.right)), 1)
        return terms


def delta_core(x: Input) -> TensorSum:
    return CoreCoproduct()(x)


def delta_core_reduced(x: Input) -> TensorSum:
    return CoreCoproduct().reduced(x)


def delta_n(x: Input, allowed: Iterable[int]) -> TensorSum:
    return ProjectedCoproduct(allowed)(x)


def delta_pc(x: Input, normal_vertex_cuts: bool = False) -> TensorSum:
    return PreCutkoskyCoproduct(normal_vertex_cuts)(x)


def delta_gf(x: Input) -> TensorSum:
    return GraphForestCoproduct()(x)


def delta_gt(pair: GraphForestPair) -> TensorSum:
    return GraphTreeCoaction()(pair)


def reduced_iterate(x: Input, legs: int, coproduct: Optional[Coproduct] = None) -> TensorSum:
    """
    Iterated reduced coproduct Δ̃^{legs−1}, applied to the last leg each time.

    Args:
        x: Input element
        legs: Number of tensor legs wanted, at least 1
        coproduct: Coproduct to iterate, Δ_core by default

    Returns:
        A tensor with the requested number of legs
    """
    coproduct = coproduct or CoreCoproduct()
    result = TensorSum({(m,): c for m, c in one_leg(x).terms.items()})
    for _ in range(legs - 1):
        result = result.apply_leg(result.arity - 1, coproduct.reduced)
    return result


def coact_bar_core(graph: Union[PreCutGraph, Graph], coproduct: Optional[CoreCoproduct] = None) -> TensorSum:
    """
    ∆̄_core(Γ) = 𝕀⊗Γ + Σ γ ⊗ Γ/γ over uncut core subgraphs γ.

    A core input is read through the embedding of H_core and gives Δ_core.

    Raises:
        NotProperlyCutError: for a non-core graph whose cuts break no loop
    """
    graph = _as_precut(graph)
    if graph.is_core():
        return (coproduct or CoreCoproduct())(graph.base)
    if graph.loops == graph.norm:
        raise NotProperlyCutError(
            f"|Γ| = ‖Γ‖ = {graph.loops}: no cut breaks a loop"
        )
    _require_bridgeless(graph.base)
    split = set(graph.vertex_splits)
    terms = TensorSum()
    terms.add((Monomial.unit(), Monomial.of(graph)), 1)
    for names in enumerate_subgraphs(graph.base):
        if names & graph.cut_edges:
            continue
        if any(v in split for n in names for v in graph.base.endpoints[n]):
            continue
        sub = sub_precut(graph, names)
        terms.add((Monomial.of(sub.base), Monomial.of(co_precut(graph, names, sub))), 1)
    return terms


def coact_bar_core_on(x: Input) -> TensorSum:
    """∆̄_core extended multiplicatively to monomials and linearly to sums."""
    result = TensorSum()
    for monomial, coeff in one_leg(x).items():
        image = TensorSum({(Monomial.unit(), Monomial.unit()): 1})
        for factor in monomial.factors:
            image = image * coact_bar_core(factor if isinstance(factor, PreCutGraph) else PreCutGraph(factor))
        result = result + image.scale(coeff)
    return result


def _properly_cut(sub: PreCutGraph) -> bool:
    pieces = [p for p in sub.components() if p.base.n_edges]
    return bool(pieces) and all(p.is_pre_cutkosky() and p.loops > p.norm for p in pieces)


def coact_bar_pc(graph: Union[PreCutGraph, Graph]) -> TensorSum:
    """∆̄_pC(Γ) = 𝕀⊗Γ + Σ γ ⊗ Γ/γ over proper pre-Cutkosky subgraphs with every component properly cut."""
    graph = _as_precut(graph)
    terms = TensorSum()
    terms.add((Monomial.unit(), Monomial.of(graph)), 1)
    everything = frozenset(graph.base.edges)
    for names in enumerate_subgraphs(graph.base):
        if names == everything:
            continue
        sub = sub_precut(graph, names)
        if not _properly_cut(sub):
            continue
        terms.add((Monomial.of(sub), Monomial.of(co_precut(graph, names, sub))), 1)
    return terms


def number_of_separations(graph: Union[PreCutGraph, Graph]) -> int:
    """Number of terms of ∆̄_pC(Γ); it is 1 exactly when ∆̄_pC(Γ) = 𝕀⊗Γ."""
    return len(coact_bar_pc(graph))


class Antipode:
    """Recursive antipode S(Γ) = −Γ − Σ S(γ)·Γ/γ for a connected graded coproduct."""

    def __init__(self, coproduct: Coproduct):
        """
        Initialize the antipode.

        Args:
            coproduct: The coproduct whose antipode is computed
        """
        self.coproduct = coproduct
        self._cache: Dict[str, GraphSum] = {}

    def on_generator(self, generator: Generator) -> GraphSum:
        key = generator_key(generator)
        if key not in self._cache:
            result = -GraphSum.of(generator)
            for (left, right), coeff in self.coproduct.reduced(Monomial.of(generator)).items():
                result = result - (self.on_monomial(left) * GraphSum({right: 1})).scale(coeff)
            self._cache[key] = result
        return self._cache[key]

    def on_monomial(self, monomial: Monomial) -> GraphSum:
        result = GraphSum.unit()
        for factor in monomial.factors:
            result = result * self.on_generator(factor)
        return result

    def __call__(self, x: Input) -> GraphSum:
        x = one_leg(x)
        if isinstance(self.coproduct, ProjectedCoproduct):
            x = project_n(x, self.coproduct.allowed)
        result = GraphSum()
        for monomial, coeff in x.items():
            result = result + self.on_monomial(monomial).scale(coeff)
        return result


def antipode(x: Input, coproduct: Optional[Coproduct] = None) -> GraphSum:
    return Antipode(coproduct or CoreCoproduct())(x)


COPRODUCTS: Dict[str, Callable[..., Coproduct]] = {
    'core': lambda **_: CoreCoproduct(),
    'N': lambda allowed=(1,), **_: ProjectedCoproduct(allowed),
    'pC': lambda normal_vertex_cuts=False, **_: PreCutkoskyCoproduct(normal_vertex_cuts),
    'GF': lambda **_: GraphForestCoproduct(),
    'GT': lambda **_: GraphTreeCoaction(),
}


def get_coproduct(name: str, **options) -> Coproduct:
    """Coproduct selector used by the command line and the antipode."""
    if name not in COPRODUCTS:
        raise ValueError(f"Unknown coproduct '{name}'; choose from {sorted(COPRODUCTS)}")
    return COPRODUCTS[name](**options)
