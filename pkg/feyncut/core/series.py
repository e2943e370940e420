"""Graph series truncated in the loop number."""

import logging
from fractions import Fraction
from typing import Callable, Dict, Hashable, Mapping, Union

from .algebra import GraphSum

logger = logging.getLogger(__name__)

Exponent = Union[int, Fraction]


def binomial(alpha: Exponent, k: int) -> Fraction:
    """Generalized binomial coefficient C(α, k) for rational α."""
    result = Fraction(1)
    for i in range(k):
        result = result * (Fraction(alpha) - i) / (i + 1)
    return result


class SeriesRing:
    """Arithmetic on GraphSums modulo graphs with more than ``loops`` loops."""

    def __init__(self, loops: int):
        if loops < 0:
            raise ValueError(f"Truncation order must be non-negative, got {loops}")
        self.loops = loops

    def truncate(self, x: GraphSum) -> GraphSum:
        return GraphSum({m: c for m, c in x.terms.items() if m.loops <= self.loops})

    def multiply(self, a: GraphSum, b: GraphSum) -> GraphSum:
        result = GraphSum()
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                if ma.loops + mb.loops <= self.loops:
                    result.add(ma * mb, ca * cb)
        return result

    def power(self, x: GraphSum, exponent: Exponent) -> GraphSum:
        """
        x^α for rational α.

        Non-negative integer powers are plain products. Otherwise x must be
        c·𝕀 + y with y free of the unit and c = 1, or c = −1 with integral α;
        then x^α = c^α Σ_k C(α, k) (y/c)^k.

        Raises:
            ValueError: when the constant term does not allow the power
        """
        exponent = Fraction(exponent)
        x = self.truncate(x)
        if exponent.denominator == 1 and exponent >= 0:
            result = GraphSum.unit()
            for _ in range(int(exponent)):
                result = self.multiply(result, x)
            return result
        constant = x.counit()
        if constant == 0:
            raise ValueError(
                f"Series without constant term cannot be raised to the power {exponent}"
            )
        if constant not in (1, -1) or (constant == -1 and exponent.denominator != 1):
            raise ValueError(f"Constant term {constant} has no rational power {exponent}")
        rest = (x - GraphSum.unit().scale(constant)).scale(Fraction(1) / constant)
        result = GraphSum.unit()
        step = GraphSum.unit()
        # rest has no unit term, so its k-th power has at least k loops
        for k in range(1, self.loops + 1):
            step = self.multiply(step, rest)
            if not step:
                break
            result = result + step.scale(binomial(exponent, k))
        scale = constant ** int(exponent) if constant == -1 else 1
        return result.scale(scale)

    def inverse(self, x: GraphSum) -> GraphSum:
        return self.power(x, -1)

    def product(self, factors: Mapping[Hashable, Exponent],
                series_of: Callable[[Hashable], GraphSum]) -> GraphSum:
        """
        Π_s series_of(s)^{e_s} for an exponent map over symbols.

        Args:
            factors: Symbol to rational exponent; zero exponents are skipped
            series_of: The series of each symbol

        Returns:
            The truncated product
        """
        result = GraphSum.unit()
        for symbol, exponent in sorted(factors.items(), key=lambda kv: repr(kv[0])):
            if exponent:
                result = self.multiply(result, self.power(series_of(symbol), exponent))
        return result


def merge_exponents(*maps: Mapping[Hashable, Exponent]) -> Dict[Hashable, Fraction]:
    """Sum exponent maps, dropping the zeros."""
    merged: Dict[Hashable, Fraction] = {}
    for exponents in maps:
        for symbol, e in exponents.items():
            merged[symbol] = merged.get(symbol, Fraction(0)) + Fraction(e)
    return {s: e for s, e in merged.items() if e}


def scale_exponents(exponents: Mapping[Hashable, Exponent], factor: Exponent) -> Dict[Hashable, Fraction]:
    return {s: Fraction(e) * Fraction(factor) for s, e in exponents.items() if e}

