"""Tests for necklaces of one-loop graphs."""

from feyncut.core.canonical import canonical_key
from feyncut.core.cutgraph import CORE
from feyncut.core.necklace import (
    CUT,
    UNCUT,
    Necklace,
    format_pi_omega,
    necklaces,
    necklaces_cut,
    vertex_letters,
)


class TestCoreNecklaces:
    """Test cases for uncut necklaces."""

    def test_counts(self):
        """Test the cyclic compositions of three and four legs."""
        assert len(necklaces(3)) == 3
        assert len(necklaces(4)) == 5

    def test_rotation_invariant(self):
        """Test that rotated words give the same necklace."""
        first = Necklace.of([(('U', 1), UNCUT), (('U', 2), UNCUT)])
        second = Necklace.of([(('U', 2), UNCUT), (('U', 1), UNCUT)])
        assert first == second
        assert first.word() == '1u2u'

    def test_realize_triangle(self, triangle):
        """Test that three one-leg vertices realize the triangle."""
        necklace = Necklace.of([(('U', 1), UNCUT)] * 3)
        graph = necklace.realize()
        assert graph.classify() == CORE
        assert graph.loops == 1
        assert canonical_key(graph.base, labelled=False) == canonical_key(triangle, labelled=False)

    def test_pi_omega_triangle(self):
        """Test the Green-function monomial of the triangle."""
        necklace = Necklace.of([(('U', 1), UNCUT)] * 3)
        exponents = necklace.pi_omega()
        assert exponents == {('core', (2,)): -3, ('core', (3,)): 3}
        assert format_pi_omega(exponents) == '(G^3)^3 / (G^2)^3'


class TestCutNecklaces:
    """Test cases for pre-Cutkosky necklaces."""

    def test_vertex_letters(self):
        """Test the letters of a one-leg vertex with at most two parts."""
        letters = vertex_letters(1)
        assert letters[0] == ('U', 1)
        assert len(letters) == 4

    def test_cut_self_loop_pi_omega(self):
        """Test that a cut edge contributes the cut propagator."""
        necklace = Necklace.of([(('U', 1), CUT)])
        assert necklace.pi_omega() == {('core', (3,)): 1, ('pC', (1, 1)): 1}
        assert not necklace.is_core()

    def test_two_leg_partition(self):
        """Test the cut necklaces with one leg on each side."""
        found = necklaces_cut((1, 1))
        assert len(found) == 8
        for necklace in found:
            graph = necklace.realize()
            assert graph.is_pre_cutkosky()
            assert graph.norm == 0
            assert graph.component_leg_counts() == (1, 1)
