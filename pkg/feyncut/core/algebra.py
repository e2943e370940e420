"""Exact rational linear combinations of graph monomials and their tensors."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .canonical import canonical_key
from .cutgraph import GraphForestPair, PreCutGraph
from .graph import Graph

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]
Generator = Union[Graph, PreCutGraph, GraphForestPair]


def _underlying(generator: Generator) -> Graph:
    if isinstance(generator, PreCutGraph):
        return generator.base
    if isinstance(generator, GraphForestPair):
        return generator.graph
    return generator


def generator_key(generator: Generator, labelled: bool = False) -> str:
    """Canonical key of a connected generator; uncut pre-cut graphs share the graph key."""
    if isinstance(generator, Graph):
        return canonical_key(generator, labelled)
    return generator.key(labelled)


def generator_loops(generator: Generator) -> int:
    return _underlying(generator).loops


def generator_norm(generator: Generator) -> int:
    """‖·‖ of a generator; equal to the loop number for uncut ones."""
    if isinstance(generator, PreCutGraph):
        return generator.norm
    return generator_loops(generator)


def _is_trivial(generator: Generator) -> bool:
    graph = _underlying(generator)
    return graph.n_edges == 0 and graph.n_vertices <= 1


@dataclass(frozen=True)
class Monomial:
    """A product of connected generators, identified by sorted canonical keys.

    Single-vertex components without edges are the unit and never stored.
    The factors are representatives kept alongside the keys; they do not
    take part in equality.
    """

    keys: Tuple[str, ...] = ()
    factors: Tuple[Any, ...] = field(default=(), compare=False, hash=False, repr=False)

    @classmethod
    def of(cls, *generators: Generator, labelled: bool = False) -> 'Monomial':
        """Split generators into connected components and drop trivial ones."""
        pairs = []
        for generator in generators:
            if isinstance(generator, Graph):
                components = generator.component_graphs()
            else:
                components = generator.components()
            for component in components:
                if _is_trivial(component):
                    continue
                pairs.append((generator_key(component, labelled), component))
        pairs.sort(key=lambda kv: kv[0])
        return cls(tuple(k for k, _ in pairs), tuple(g for _, g in pairs))

    @classmethod
    def unit(cls) -> 'Monomial':
        return cls()

    def is_unit(self) -> bool:
        return not self.keys

    def __mul__(self, other: 'Monomial') -> 'Monomial':
        pairs = sorted(zip(self.keys + other.keys, self.factors + other.factors), key=lambda kv: kv[0])
        return Monomial(tuple(k for k, _ in pairs), tuple(g for _, g in pairs))

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def loops(self) -> int:
        return sum(generator_loops(g) for g in self.factors)

    @property
    def norm(self) -> int:
        return sum(generator_norm(g) for g in self.factors)

    def __str__(self) -> str:
        return '*'.join(self.keys) if self.keys else 'I'


K = Hashable


class LinearCombination:
    """Finite formal sum of hashable keys with exact rational coefficients."""

    def __init__(self, terms: Optional[Mapping[K, Number]] = None):
        """
        Initialize the combination.

        Args:
            terms: Key to coefficient; zero coefficients are dropped
        """
        self.terms: Dict[K, Fraction] = {}
        for key, coeff in (terms or {}).items():
            self.add(key, coeff)

    @classmethod
    def from_key(cls, key: K, coeff: Number = 1) -> 'LinearCombination':
        result = cls()
        result.add(key, coeff)
        return result

    def add(self, key: K, coeff: Number) -> None:
        value = self.terms.get(key, Fraction(0)) + Fraction(coeff)
        if value:
            self.terms[key] = value
        else:
            self.terms.pop(key, None)

    def copy(self) -> 'LinearCombination':
        result = self.__class__()
        result.terms = dict(self.terms)
        return result

    def coefficient(self, key: K) -> Fraction:
        return self.terms.get(key, Fraction(0))

    @staticmethod
    def _sort_key(key: K) -> Any:
        return repr(key)

    def items(self) -> List[Tuple[K, Fraction]]:
        """Terms in deterministic order."""
        return sorted(self.terms.items(), key=lambda kv: self._sort_key(kv[0]))

    def __iter__(self) -> Iterator[K]:
        return iter(k for k, _ in self.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __contains__(self, key: object) -> bool:
        return key in self.terms

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LinearCombination):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __add__(self, other: 'LinearCombination') -> 'LinearCombination':
        result = self.copy()
        for key, coeff in other.terms.items():
            result.add(key, coeff)
        return result

    def __neg__(self) -> 'LinearCombination':
        return self.scale(-1)

    def __sub__(self, other: 'LinearCombination') -> 'LinearCombination':
        return self + (-other)

    def scale(self, factor: Number) -> 'LinearCombination':
        result = self.__class__()
        for key, coeff in self.terms.items():
            result.add(key, coeff * Fraction(factor))
        return result

    def _mul_keys(self, a: K, b: K) -> Optional[K]:
        raise NotImplementedError

    def __mul__(self, other: Union['LinearCombination', Number]) -> 'LinearCombination':
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        result = self.__class__()
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                key = self._mul_keys(a, b)
                if key is not None:
                    result.add(key, ca * cb)
        return result

    __rmul__ = scale

    def apply(self, fn: Callable[[K], 'LinearCombination']) -> 'LinearCombination':
        """Extend a map on keys linearly."""
        result: Optional[LinearCombination] = None
        for key, coeff in self.items():
            image = fn(key).scale(coeff)
            result = image if result is None else result + image
        return result if result is not None else self.__class__()

    def __repr__(self) -> str:
        body = ' + '.join(f"{c}*{k}" for k, c in self.items()[:6])
        more = ' + ...' if len(self) > 6 else ''
        return f"{self.__class__.__name__}({body or 0}{more})"


class GraphSum(LinearCombination):
    """Linear combination of graph monomials."""

    @staticmethod
    def _sort_key(key: Monomial) -> Any:
        return (key.loops, len(key.keys), key.keys)

    def _mul_keys(self, a: Monomial, b: Monomial) -> Monomial:
        return a * b

    @classmethod
    def unit(cls) -> 'GraphSum':
        return cls({Monomial.unit(): 1})

    @classmethod
    def of(cls, *generators: Generator, coeff: Number = 1) -> 'GraphSum':
        return cls({Monomial.of(*generators): coeff})

    def counit(self) -> Fraction:
        """ε: the coefficient of the unit."""
        return self.coefficient(Monomial.unit())

    def graded_part(self, loops: int) -> 'GraphSum':
        return GraphSum({m: c for m, c in self.terms.items() if m.loops == loops})

    def to_records(self) -> List[Dict[str, Any]]:
        return [{'monomial': list(m.keys), 'coeff': str(c)} for m, c in self.items()]


class TensorSum(LinearCombination):
    """Linear combination of tensor words of monomials (or other legs)."""

    @staticmethod
    def _leg_sort_key(leg: Any) -> Any:
        if isinstance(leg, Monomial):
            return (leg.loops, len(leg.keys), leg.keys)
        return repr(leg)

    @classmethod
    def _sort_key(cls, key: Tuple) -> Any:
        return tuple(cls._leg_sort_key(leg) for leg in key)

    @staticmethod
    def _mul_leg(a: Any, b: Any) -> Optional[Any]:
        return a * b

    @staticmethod
    def _unit_leg() -> Any:
        return Monomial.unit()

    def _mul_keys(self, a: Tuple, b: Tuple) -> Optional[Tuple]:
        legs = []
        for x, y in zip(a, b):
            z = self._mul_leg(x, y)
            if z is None:
                return None
            legs.append(z)
        return tuple(legs)

    @classmethod
    def tensor(cls, *factors: LinearCombination) -> 'TensorSum':
        """Tensor product of one-leg sums (or tensor sums, concatenating legs)."""
        result = cls({(): 1})
        for factor in factors:
            step = cls()
            for word, cw in result.terms.items():
                for key, ck in factor.terms.items():
                    legs = key if isinstance(factor, TensorSum) else (key,)
                    step.add(word + legs, cw * ck)
            result = step
        return result

    @property
    def arity(self) -> int:
        return len(next(iter(self.terms))) if self.terms else 0

    def apply_leg(self, index: int, fn: Callable[[Any], LinearCombination]) -> 'TensorSum':
        """
        Apply a linear map to one leg; tensor-valued images are flattened in place.

        Args:
            index: Leg position
            fn: Map from a leg to a GraphSum, TensorSum or other combination

        Returns:
            The resulting tensor
        """
        result = self.__class__()
        images: Dict[Any, LinearCombination] = {}
        for word, coeff in self.terms.items():
            leg = word[index]
            if leg not in images:
                images[leg] = fn(leg)
            image = images[leg]
            for key, ck in image.terms.items():
                legs = key if isinstance(image, TensorSum) else (key,)
                result.add(word[:index] + tuple(legs) + word[index + 1:], coeff * ck)
        return result

    def apply_counit(self, index: int, counit: Optional[Callable[[Any], Fraction]] = None) -> 'TensorSum':
        """Remove a leg, weighting each word by the counit of that leg."""
        unit = self._unit_leg()
        result = self.__class__()
        for word, coeff in self.terms.items():
            weight = counit(word[index]) if counit else Fraction(1 if word[index] == unit else 0)
            if weight:
                result.add(word[:index] + word[index + 1:], coeff * weight)
        return result

    def multiply_out(self, groups: Sequence[Sequence[int]]) -> 'TensorSum':
        """
        Multiply legs together, e.g. m_{1,3,24} is groups ((0,), (2,), (1, 3)).

        Args:
            groups: For each output leg, the input legs multiplied into it

        Returns:
            The tensor with len(groups) legs
        """
        result = self.__class__()
        for word, coeff in self.terms.items():
            legs = []
            for group in groups:
                leg = self._unit_leg()
                for i in group:
                    leg = self._mul_leg(leg, word[i])
                    if leg is None:
                        break
                if leg is None:
                    break
                legs.append(leg)
            else:
                result.add(tuple(legs), coeff)
        return result

    def contract_legs(self, weight: Callable[[Any], Fraction]) -> Fraction:
        """Σ coeff · Π weight(leg) over all words."""
        total = Fraction(0)
        for word, coeff in self.terms.items():
            value = coeff
            for leg in word:
                value *= weight(leg)
            total += value
        return total

    def to_records(self) -> List[Dict[str, Any]]:
        """JSON-ready rows: legs as key lists and the coefficient as "p/q"."""
        names = ('left', 'right') if self.arity == 2 else tuple(f"leg{i + 1}" for i in range(self.arity))
        rows = []
        for word, coeff in self.items():
            row: Dict[str, Any] = {}
            for name, leg in zip(names, word):
                row[name] = list(leg.keys) if isinstance(leg, Monomial) else str(leg)
            row['coeff'] = str(coeff)
            rows.append(row)
        return rows


def one_leg(x: Union[GraphSum, Monomial, Generator]) -> GraphSum:
    """Coerce a generator, monomial or sum into a GraphSum."""
    if isinstance(x, GraphSum):
        return x
    if isinstance(x, Monomial):
        return GraphSum({x: 1})
    return GraphSum.of(x)


def sum_of(items: Iterable[LinearCombination], empty: LinearCombination) -> LinearCombination:
    result = empty
    for item in items:
        result = result + item
    return result
