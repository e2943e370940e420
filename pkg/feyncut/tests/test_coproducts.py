"""Tests for coproducts, coactions and the antipode."""

import pytest

from feyncut.core.algebra import GraphSum, Monomial, TensorSum
from feyncut.core.cutgraph import PRE_CUTKOSKY, GraphForestPair, PreCutGraph
from feyncut.core.coproducts import (
    CoreCoproduct,
    GraphForestCoproduct,
    ProjectedCoproduct,
    PreCutkoskyCoproduct,
    antipode,
    co_precut,
    coact_bar_pc,
    delta_core,
    delta_core_reduced,
    delta_gt,
    delta_pc,
    get_coproduct,
    gt_terms,
    in_h_n,
    number_of_separations,
    reduced_iterate,
    sub_precut,
)
from feyncut.core.errors import ForestNotInTreeError, NotBridgelessError
from feyncut.core.graph import Graph

TRIANGLE_EDGES = ['e1', 'e2', 'e3']


class TestCoreCoproduct:
    """Test cases for the core coproduct."""

    def test_primitive_triangle(self, triangle):
        """Test that the one-loop triangle is primitive."""
        assert delta_core_reduced(triangle) == 0
        full = delta_core(triangle)
        assert len(full) == 2

    def test_dunce_reduced(self, dunce, bubble):
        """Test the reduced coproduct of the Dunce's cap."""
        reduced = delta_core_reduced(dunce)
        assert len(reduced) == 2
        assert reduced.coefficient((Monomial.of(bubble), Monomial.of(bubble))) == 1
        triangle_sub = Monomial.of(dunce.subgraph(TRIANGLE_EDGES))
        tadpole = Monomial.of(dunce.contract_subgraph(TRIANGLE_EDGES))
        assert reduced.coefficient((triangle_sub, tadpole)) == 2

    def test_bridged_generator(self):
        """Test that a graph with a bridge is rejected."""
        dumbbell = Graph.from_edges([(0, 0), (0, 1), (1, 1)], legs=[0, 1])
        with pytest.raises(NotBridgelessError, match="has bridges"):
            CoreCoproduct()(dumbbell)

    def test_multiplicative(self, triangle, bubble):
        """Test that the coproduct of a product is the product of coproducts."""
        product = GraphSum.of(triangle) * GraphSum.of(bubble)
        assert delta_core(product) == delta_core(triangle) * delta_core(bubble)

    def test_iterated_reduced(self, dunce):
        """Test that both legs of the Dunce's cap terms are primitive."""
        assert reduced_iterate(dunce, 3) == 0
        assert reduced_iterate(dunce, 2) == delta_core_reduced(dunce)

    def test_raw_cograph_keeps_two_valent_vertex(self):
        """Test that without elision a contracted self-energy leaves a two-valent vertex."""
        dressed = Graph.from_edges([(0, 1), (0, 2), (2, 3), (2, 3), (3, 1)], legs=[0, 0, 1, 1])
        names = ['e3', 'e4']
        left = Monomial.of(dressed.subgraph(names))
        raw = CoreCoproduct(elide=False)
        raw_co = Monomial.of(dressed.contract_raw(names))
        elided_co = Monomial.of(dressed.contract_subgraph(names))
        assert raw.name == 'core-raw'
        assert raw_co.factors[0].n_edges == 3
        assert elided_co.factors[0].n_edges == 2
        assert raw.reduced(dressed).coefficient((left, raw_co)) == 1
        assert CoreCoproduct().reduced(dressed).coefficient((left, elided_co)) == 1


class TestProjectedCoproduct:
    """Test cases for the valence-projected coproduct."""

    def test_quartic_projection(self, dunce, bubble):
        """Test that the six-valent tadpole term drops out for quartic vertices."""
        reduced = ProjectedCoproduct((2,)).reduced(dunce)
        assert len(reduced) == 1
        assert reduced.coefficient((Monomial.of(bubble), Monomial.of(bubble))) == 1

    def test_outside_projection(self, triangle):
        """Test that a generator outside the projection maps to zero."""
        assert ProjectedCoproduct((2,))(triangle) == 0


class TestPreCutkoskyCoproduct:
    """Test cases for the pre-Cutkosky coproduct."""

    def test_agrees_with_core_on_uncut(self, dunce):
        """Test that uncut graphs see the core coproduct."""
        assert delta_pc(PreCutGraph(dunce)) == delta_core(dunce)

    def test_subgraph_inherits_cut(self, dunce):
        """Test that a subgraph keeps the cut edges it contains."""
        graph = PreCutGraph(dunce, ['e3'])
        assert sub_precut(graph, ['e3', 'e4']).cut_edges == frozenset({'e3'})

    def test_cograph_splits_vertex(self, dunce):
        """Test that contracting a fully cut bubble splits the new vertex."""
        graph = PreCutGraph(dunce, ['e1', 'e3', 'e4'])
        co = co_precut(graph, ['e3', 'e4'])
        assert co.cut_edges == frozenset({'e1'})
        assert len(co.vertex_splits) == 1
        assert co.classify() == PRE_CUTKOSKY

    def test_separations(self, dunce):
        """Test that only a properly cut subgraph adds a separation."""
        assert number_of_separations(dunce) == 1
        assert number_of_separations(PreCutGraph(dunce, ['e3', 'e4'])) == 2


    def test_coaction_on_cut_bubble(self, dunce):
        """Test ∆̄_pC when the bubble of the Dunce.s cap is fully cut."""
        graph = PreCutGraph(dunce, ['e3', 'e4'])
        terms = coact_bar_pc(graph)
        sub = sub_precut(graph, ['e3', 'e4'])
        co = co_precut(graph, ['e3', 'e4'], sub)
        assert len(terms) == 2
        assert terms.coefficient((Monomial.unit(), Monomial.of(graph))) == 1
        assert terms.coefficient((Monomial.of(sub), Monomial.of(co))) == 1
        assert len(co.vertex_splits) == 1

    def test_coaction_on_uncut(self, dunce):
        """Test that an uncut graph has no properly cut subgraph."""
        assert coact_bar_pc(dunce) == TensorSum({(Monomial.unit(), Monomial.of(dunce)): 1})

    def test_split_corollas_skip_projection(self, sunset):
        """Test that a split vertex is exempt from the valence projection."""
        graph = PreCutGraph(sunset, ['e1', 'e2', 'e3'])
        co = co_precut(graph, ['e1', 'e2'])
        assert co.base.n_vertices == 1
        assert in_h_n(Monomial.of(co), frozenset({7}))
        assert not in_h_n(Monomial.of(sunset), frozenset({7}))

    def test_projection_drops_off_theory_cographs(self, sunset):
        """Test that Δ_pC restricted to valence 4 keeps only the split co-graphs of the cut sunset."""
        graph = PreCutGraph(sunset, ['e1', 'e2', 'e3'])
        full = PreCutkoskyCoproduct()(graph)
        projected = PreCutkoskyCoproduct(allowed=(2,))(graph)
        assert len(projected) == len(full)
        assert not PreCutkoskyCoproduct(allowed=(1,))(graph)

class TestForestCoproducts:
    """Test cases for graph-forest coproducts."""

    def test_gf_keeps_leg_partition(self, dunce):
        """Test that only the bubble subgraph preserves the forest's leg partition."""
        pair = GraphForestPair(dunce, ['e3'])
        assert len(GraphForestCoproduct().reduced(pair)) == 1

    def test_gf_empty_forest(self, dunce):
        """Test that the empty forest gives a primitive element."""
        pair = GraphForestPair(dunce, [])
        assert GraphForestCoproduct().reduced(pair) == 0

    def test_gt_without_intact_cycles(self, triangle):
        """Test that a broken fundamental cycle leaves only the unit term."""
        pair = GraphForestPair(triangle, ['e1'], tree=['e1', 'e2'])
        assert len(gt_terms(pair)) == 1

    def test_gt_with_intact_cycle(self, triangle):
        """Test the term contracting the intact cycle."""
        pair = GraphForestPair(triangle, ['e1', 'e2'], tree=['e1', 'e2'])
        terms = gt_terms(pair)
        assert len(terms) == 2
        assert terms[1].cycles == frozenset({'e3'})
        assert terms[1].contracted == frozenset(TRIANGLE_EDGES)
        assert terms[1].right.graph.n_vertices == 1
        assert len(delta_gt(pair)) == 2

    def test_gt_needs_tree(self, triangle):
        """Test that the coaction requires a spanning tree."""
        with pytest.raises(ForestNotInTreeError, match="spanning tree"):
            gt_terms(GraphForestPair(triangle, ['e1']))


class TestAntipode:
    """Test cases for the antipode."""

    def test_primitive(self, triangle):
        """Test S(t) = -t for a primitive graph."""
        assert antipode(triangle) == GraphSum.of(triangle).scale(-1)

    def test_dunce(self, dunce, bubble):
        """Test the antipode of the Dunce's cap."""
        result = antipode(dunce)
        assert result.coefficient(Monomial.of(dunce)) == -1
        assert result.coefficient(Monomial.of(bubble, bubble)) == 1
        assert len(result) == 3

    def test_unknown_coproduct(self):
        """Test that unknown coproduct names are rejected."""
        with pytest.raises(ValueError, match="Unknown coproduct"):
            get_coproduct('bogus')

    def test_selector(self):
        """Test that the selector forwards options."""
        projected = get_coproduct('N', allowed=(2,))
        assert projected.allowed == frozenset({2})
