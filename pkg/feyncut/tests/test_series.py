"""Tests for truncated graph series."""

from fractions import Fraction

import pytest

from feyncut.core.algebra import GraphSum, Monomial
from feyncut.core.series import SeriesRing, binomial, merge_exponents


@pytest.fixture
def one_plus_t(triangle):
    return GraphSum.unit() + GraphSum.of(triangle)


class TestBinomial:
    """Test cases for generalized binomial coefficients."""

    def test_values(self):
        """Test integral and rational upper arguments."""
        assert binomial(4, 2) == 6
        assert binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
        assert binomial(-1, 3) == -1


class TestSeriesRing:
    """Test cases for truncated series arithmetic."""

    def test_negative_order(self):
        """Test that the truncation order must be non-negative."""
        with pytest.raises(ValueError, match="non-negative"):
            SeriesRing(-1)

    def test_truncated_product(self, triangle, one_plus_t):
        """Test that products drop terms above the order."""
        ring = SeriesRing(1)
        square = ring.multiply(one_plus_t, one_plus_t)
        assert square.coefficient(Monomial.of(triangle)) == 2
        assert square.coefficient(Monomial.of(triangle, triangle)) == 0

    def test_inverse(self, triangle, one_plus_t):
        """Test (1 + t)^-1 = 1 - t + t^2 at two loops."""
        ring = SeriesRing(2)
        inverse = ring.inverse(one_plus_t)
        assert inverse.coefficient(Monomial.of(triangle)) == -1
        assert inverse.coefficient(Monomial.of(triangle, triangle)) == 1
        assert ring.multiply(one_plus_t, inverse) == GraphSum.unit()

    def test_square_root(self, one_plus_t):
        """Test that the square of the square root gives the series back."""
        ring = SeriesRing(2)
        root = ring.power(one_plus_t, Fraction(1, 2))
        assert ring.multiply(root, root) == one_plus_t

    def test_negative_constant(self, triangle):
        """Test integral powers of a series with constant -1."""
        ring = SeriesRing(2)
        x = GraphSum.of(triangle) - GraphSum.unit()
        assert ring.multiply(x, ring.inverse(x)) == GraphSum.unit()

    def test_no_constant_term(self, triangle):
        """Test that a series without constant term has no inverse."""
        with pytest.raises(ValueError, match="without constant term"):
            SeriesRing(2).inverse(GraphSum.of(triangle))

    def test_bad_constant(self, triangle):
        """Test that a constant other than 1 has no rational power."""
        x = GraphSum.unit().scale(2) + GraphSum.of(triangle)
        with pytest.raises(ValueError, match="no rational power"):
            SeriesRing(2).power(x, Fraction(1, 2))

    def test_product_of_powers(self, triangle, one_plus_t):
        """Test a product over an exponent map."""
        ring = SeriesRing(1)
        result = ring.product({'a': 2, 'b': 0}, lambda symbol: one_plus_t)
        assert result.coefficient(Monomial.of(triangle)) == 2


class TestExponentMaps:
    """Test cases for exponent map helpers."""

    def test_merge_drops_zeros(self):
        """Test that cancelling exponents disappear."""
        assert merge_exponents({'a': 1}, {'a': -1, 'b': 2}) == {'b': 2}
