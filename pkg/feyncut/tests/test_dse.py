"""Tests for Green functions, insertion and the Dyson-Schwinger identities."""

from fractions import Fraction

import pytest

from feyncut.core.algebra import GraphSum, Monomial
from feyncut.core.couplings import Coupling
from feyncut.core.cutgraph import PreCutGraph
from feyncut.core.dse import (
    PROPAGATOR,
    b_plus,
    check_coprod_green,
    check_graphins,
    check_primitive_decomposition,
    cut_images,
    cutkosky_structures,
    green_series,
    green_symbol,
    invariant_charge,
    precut_green_series,
    precutkosky_structures,
    primitive_decomposition,
    set_partition_count,
    skeleton_exponents,
)
from feyncut.core.errors import StructureMismatchError
from feyncut.core.graph import Graph


class TestGreenSymbols:
    """Test cases for target normalization."""

    def test_core_and_cut(self):
        """Test integer and partition targets."""
        assert green_symbol(4) == ('core', (4,))
        assert green_symbol([2, 1]) == ('pC', (1, 2))

    @pytest.mark.parametrize("target, message", [
        (1, "at least 2 legs"),
        ([0, 2], "Invalid Green function target"),
    ])
    def test_invalid(self, target, message):
        """Test rejected targets."""
        with pytest.raises(ValueError, match=message):
            green_symbol(target)


class TestGreenSeries:
    """Test cases for enumerated Green functions."""

    def test_quartic_propagator(self):
        """Test the two-point function with quartic vertices to two loops."""
        series = green_series(2, 2, degrees=(4,))
        assert series.constant == 1
        assert series.sign == -1
        assert sorted(t.weight for t in series.terms) == [
            Fraction(1, 6), Fraction(1, 4), Fraction(1, 2)
        ]
        records = series.to_records()
        assert records[0]['weight'] == '-1/2'
        assert records[0]['g_order'] == 2

    def test_channels_merge(self):
        """Test that the three bubble channels form one unlabelled term."""
        series = green_series(4, 1, degrees=(4,))
        assert series.constant == 1
        assert len(series.terms) == 1
        assert series.terms[0].weight == Fraction(3, 2)

    def test_extract(self):
        """Test coefficient extraction by coupling."""
        series = green_series(2, 2, degrees=(4,))
        one_loop = series.extract(Coupling.g(4))
        assert len(one_loop) == 1
        assert series.extract(Coupling.one()) == GraphSum.unit()

    def test_cut_structures(self, triangle):
        """Test the vertex cuts of the triangle."""
        assert len(cutkosky_structures(triangle, (1, 2))) == 3
        assert len(cutkosky_structures(triangle, (1, 2), intact=0)) == 3
        assert len(cutkosky_structures(triangle, (1, 1, 1))) == 1

    @pytest.mark.parametrize("shape, expected", [
        ((3,), 1),
        ((1, 2), 3),
        ((2, 2), 3),
        ((1, 1, 2), 6),
        ((1, 1, 1), 1),
    ])
    def test_set_partition_count(self, shape, expected):
        """Test the number of set partitions of a given block shape."""
        assert set_partition_count(shape) == expected

    def test_split_tadpole(self, self_loop):
        """Test the one-loop pre-Cutkosky tadpole split into two halves."""
        structures = precutkosky_structures(self_loop, (1, 1))
        cut = [(g, n) for g, n in structures if g.cut_edges]
        assert len(cut) == 2
        assert all(n == 3 for _, n in cut)
        assert all(g.component_leg_counts() == (1, 1) for g, _ in structures)

    def test_split_tadpole_weight(self):
        """Test that the split tadpole with a cut loop weighs 2/(2·3)."""
        series = precut_green_series((1, 1), 1, degrees=(3, 4))
        tadpoles = [
            t for t in series.terms
            if t.generator.base.n_vertices == 1 and t.generator.cut_edges
        ]
        assert len(tadpoles) == 1
        assert tadpoles[0].weight == Fraction(1, 3)
        assert series.constant == 0

    def test_split_series_needs_cut_type(self):
        """Test that a core target has no split vertices."""
        with pytest.raises(ValueError, match="need a cut type"):
            precut_green_series(2, 1)


class TestInsertion:
    """Test cases for skeleton insertion."""

    def test_b_plus_of_unit(self, triangle):
        """Test that inserting the unit returns the skeleton."""
        assert b_plus(triangle, GraphSum.unit()) == GraphSum.of(triangle)

    def test_one_leg_factor_rejected(self, triangle):
        """Test that a one-leg graph cannot be inserted."""
        tadpole = Graph.from_edges([(0, 0)], legs=[0])
        with pytest.raises(StructureMismatchError, match="vertex and propagator"):
            b_plus(triangle, GraphSum.of(tadpole))

    def test_skeleton_exponents(self, triangle):
        """Test the dressing of the uncut and the cut triangle."""
        assert skeleton_exponents(PreCutGraph(triangle)) == {PROPAGATOR: -3, ('core', (3,)): 3}
        cut = PreCutGraph(triangle, ['e1', 'e2'])
        assert skeleton_exponents(cut) == {PROPAGATOR: -5, ('core', (3,)): 3}

    def test_invariant_charge(self):
        """Test the charges of a core and the cut propagator type."""
        assert invariant_charge((4,)) == {('core', (4,)): 1, PROPAGATOR: -2}
        assert invariant_charge((1, 1)) == {('pC', (1, 1)): 1, PROPAGATOR: -1}
        assert invariant_charge((1, 2)) == {('pC', (1, 2)): 1, PROPAGATOR: Fraction(-3, 2)}

    def test_cut_propagator_skeleton(self):
        """Test that the fully cut cubic bubble is the only one-loop skeleton of type (1, 1)."""
        skeletons = primitive_decomposition([1, 1], 1, degrees=(3,))
        assert len(skeletons) == 1
        assert skeletons[0].coefficient == Fraction(1, 2)
        assert skeletons[0].graph.classify() == 'Cutkosky'

    def test_decomposition_needs_two_parts(self):
        """Test that a single part is not a cut type."""
        with pytest.raises(ValueError, match="at least two parts"):
            primitive_decomposition([2], 1)


class TestIdentities:
    """Test cases for the Dyson-Schwinger identities."""

    def test_graph_insertion_quartic_propagator(self):
        """Test skeleton insertion against enumeration for two-point quartic graphs."""
        report = check_graphins(2, 2, degrees=(4,))
        assert report.passed, report.to_dict()

    def test_graph_insertion_quartic_vertex(self):
        """Test the four-point function at one loop."""
        assert check_graphins(4, 1, degrees=(4,)).passed

    def test_coproduct_of_green_function(self):
        """Test the coproduct identity for the quartic vertex at one loop."""
        report = check_coprod_green(4, 1, degrees=(4,))
        assert report.passed
        assert report.details['couplings'] == ['g4']

    def test_coproduct_propagator(self):
        """Test the coproduct identity for the quartic propagator at one loop."""
        assert check_coprod_green(2, 1, degrees=(4,)).passed

    def test_target_outside_theory(self):
        """Test that a valence the theory lacks is rejected."""
        with pytest.raises(ValueError, match="not a Green function"):
            check_coprod_green(5, 1, degrees=(4,))

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_graph_insertion_mixed_degrees(self, n):
        """Test skeleton insertion for cubic and quartic vertices together at two loops."""
        report = check_graphins(n, 2, degrees=(3, 4))
        assert report.passed, report.to_dict()

    @pytest.mark.parametrize("loops", [1, 2])
    @pytest.mark.parametrize("partition", [(1, 1), (1, 2), (2, 2)])
    def test_graph_insertion_cut(self, partition, loops):
        """Test that cutting the inserted core graphs gives the cut Green function."""
        report = check_graphins(partition, loops, degrees=(3, 4))
        assert report.passed, report.to_dict()
        assert report.details['skeletons'] > 0

    def test_cut_images_need_connected_graphs(self, triangle, bubble):
        """Test that products are not cut."""
        with pytest.raises(StructureMismatchError, match="connected graphs"):
            cut_images(GraphSum({Monomial.of(triangle, bubble): 1}), (1, 2))

    def test_cut_images_of_triangle(self, triangle):
        """Test the three vertex cuts of the triangle as one unlabelled class."""
        images = cut_images(GraphSum.of(triangle), (1, 2))
        assert len(images) == 1
        assert sum(images.terms.values()) == 3

    @pytest.mark.parametrize("n, loops", [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2)])
    def test_coproduct_mixed_degrees(self, n, loops):
        """Test the coproduct identity in the theory with cubic and quartic vertices."""
        report = check_coprod_green(n, loops, degrees=(3, 4))
        assert report.passed, report.to_dict()

    @pytest.mark.parametrize("loops", [1, 2])
    @pytest.mark.parametrize("partition", [(1, 1), (1, 2)])
    def test_coproduct_cut(self, partition, loops):
        """Test the coproduct identity for cut types, split co-graphs included."""
        report = check_coprod_green(partition, loops, degrees=(3, 4))
        assert report.passed, report.to_dict()
        assert ('split_rights' in report.details) == (loops == 2)

    @pytest.mark.parametrize("partition", [(1, 1), (1, 2), (2, 2)])
    def test_primitive_decomposition(self, partition):
        """Test the cut Green function against its skeletons with no intact loop."""
        report = check_primitive_decomposition(partition, 2, degrees=(3, 4))
        assert report.passed, report.to_dict()
        assert report.details['lhs_terms'] == report.details['rhs_terms'] > 0
