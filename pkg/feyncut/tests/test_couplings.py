"""Tests for coupling monomials."""

import pytest

from feyncut.core.algebra import Monomial
from feyncut.core.couplings import Coupling, coupling, monomial_coupling, vcd
from feyncut.core.cutgraph import PreCutGraph
from feyncut.core.graph import Graph


def figure_eight() -> Graph:
    """Two triangles sharing a quartic vertex, one leg on each other vertex."""
    return Graph.from_edges(
        [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)], legs=[1, 2, 3, 4]
    )


class TestCouplingAlgebra:
    """Test cases for coupling arithmetic."""

    def test_propagator_coupling_is_one(self):
        """Test that g_2 is identified with 1."""
        assert Coupling.g(2).is_one()

    def test_inverse(self):
        """Test that a coupling times its inverse is one."""
        g3 = Coupling.g(3)
        assert (g3 * g3.inverse()).is_one()
        assert (g3 ** 2) / g3 == g3

    def test_str(self):
        """Test the readable form."""
        assert str(Coupling.g(3, power=2) * Coupling.g(1, 1)) == 'g{1,1} g3^2'
        assert str(Coupling.one()) == '1'


class TestGraphCouplings:
    """Test cases for couplings of graphs."""

    @pytest.mark.parametrize("name, expected, order", [
        ('triangle', Coupling.g(3, power=2), 2),
        ('bubble', Coupling.g(4), 2),
        ('dunce', Coupling.g(4, power=2), 4),
        ('sunset', Coupling.g(4, power=2), 4),
    ])
    def test_core_couplings(self, request, name, expected, order):
        """Test g_Γ and its single-coupling order 2|Γ|."""
        graph = request.getfixturevalue(name)
        assert coupling(graph) == expected
        assert coupling(graph).substitute_single() == order

    def test_mixed_vertices(self):
        """Test that the quartic vertex cancels against the outer four-point coupling."""
        assert coupling(figure_eight()) == Coupling.g(3, power=4)

    def test_cut_triangle(self, triangle):
        """Test the coupling of a vertex cut."""
        cut = PreCutGraph(triangle, ['e1', 'e2'])
        expected = Coupling.of({(3,): 3, (1, 1): 2, (1, 2): -1})
        assert coupling(cut) == expected
        with pytest.raises(ValueError, match="no single-coupling substitution"):
            coupling(cut).substitute_single()

    def test_markers(self, triangle):
        """Test one mass marker per cut edge."""
        cut = PreCutGraph(triangle, ['e1', 'e2'])
        assert coupling(cut, markers=True).markers == (('m', 2),)
        assert coupling(cut, markers=True).without_markers() == coupling(cut)
        assert coupling(cut, markers=True).coefficient_in_markers({'m': 2})
        assert not coupling(cut).coefficient_in_markers({'m': 2})

    def test_multiplicative(self, triangle, bubble):
        """Test that couplings multiply over monomial factors."""
        monomial = Monomial.of(triangle, bubble)
        assert monomial_coupling(monomial) == coupling(triangle) * coupling(bubble)
        assert monomial_coupling(Monomial.unit()).is_one()

    def test_vcd(self, triangle, dunce):
        """Test the virtual cohomological dimension."""
        assert vcd(triangle) == 2
        assert vcd(dunce) == 5
