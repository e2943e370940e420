"""Tests for cut matrices."""

from fractions import Fraction

from feyncut.core.cut_matrix import (
    contraction_classes,
    cut_matrix,
    cut_matrix_green,
    refinement,
)
from feyncut.core.cutgraph import CUTKOSKY
from feyncut.core.graph import Graph


class TestContractionClasses:
    """Test cases for contraction classes."""

    def test_triangle_classes(self, triangle):
        """Test the single-vertex class, three bubbles and the triangle itself."""
        classes = contraction_classes(triangle)
        assert [g.n_vertices for g in classes] == [1, 2, 2, 2, 3]
        assert classes[-1].n_edges == 3


class TestRefinement:
    """Test cases for refinements between classes."""

    def test_refinement_to_self_cuts_everything(self, triangle):
        """Test that refining a graph to itself cuts every edge."""
        cut = refinement(triangle, triangle)
        assert cut.cut_edges == frozenset(triangle.edges)
        assert cut.classify() == CUTKOSKY

    def test_refinement_to_a_bubble(self, triangle):
        """Test the refinement towards a contraction by one edge."""
        column = triangle.contract_raw(['e1'])
        cut = refinement(triangle, column)
        assert cut.cut_edges == frozenset({'e2', 'e3'})

    def test_mismatched_legs(self, triangle):
        """Test that groups must respect the leg labels."""
        row = triangle.contract_raw(['e1'])
        column = triangle.contract_raw(['e2'])
        assert refinement(row, column) is None

    def test_column_larger_than_row(self, triangle):
        """Test that a row cannot refine a graph with more vertices."""
        assert refinement(triangle.contract_raw(['e1']), triangle) is None


class TestCutMatrix:
    """Test cases for the matrix of a single graph."""

    def test_triangle_matrix(self, triangle):
        """Test shape, triangularity and the uncut and fully cut borders."""
        matrix = cut_matrix(triangle)
        assert matrix.size == 5
        assert matrix.mask().sum() == 12
        assert matrix.is_lower_triangular()
        assert matrix.first_column_uncut()
        assert matrix.diagonal_fully_cut()

    def test_records_and_frame(self, triangle):
        """Test the tabular outputs."""
        matrix = cut_matrix(triangle)
        records = matrix.to_records()
        assert len(records) == 12
        assert {'row', 'column', 'row_class', 'entry', 'coeff'} <= set(records[0])
        frame = matrix.to_frame()
        assert frame.shape == (5, 5)
        assert frame.iloc[0, 1] == ''

    def test_zero_momentum_legs(self):
        """Test that a legless vertex gets a leg before classes are formed."""
        graph = Graph.from_edges([(0, 1), (0, 1), (0, 1)], legs=[0])
        matrix = cut_matrix(graph)
        assert all(c.n_legs == 2 for c in matrix.classes)
        assert matrix.is_lower_triangular()


class TestGreenCutMatrix:
    """Test cases for matrices of Green functions."""

    def test_quartic_tadpole(self):
        """Test the one-class matrix of the quartic one-loop propagator."""
        matrix = cut_matrix_green(2, 1, degrees=(4,))
        assert matrix.size == 1
        entry = matrix.entry(0, 0)
        assert len(entry) == 1
        assert list(entry.terms.values()) == [Fraction(1, 2)]
