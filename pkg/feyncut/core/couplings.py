"""Coupling monomials g_Γ and the virtual cohomological dimension."""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from .algebra import Monomial
from .cutgraph import PreCutGraph
from .graph import Graph

logger = logging.getLogger(__name__)

Partition = Tuple[int, ...]
CUT_COUPLING: Partition = (1, 1)


def _clean(exponents: Mapping) -> Tuple:
    return tuple(sorted((k, v) for k, v in exponents.items() if v))


@dataclass(frozen=True)
class Coupling:
    """A Laurent monomial in couplings g_p indexed by partitions, with mass markers t_m.

    g_2 is identified with 1 and never stored.
    """

    exponents: Tuple[Tuple[Partition, int], ...] = ()
    markers: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def of(cls, exponents: Optional[Mapping[Partition, int]] = None,
           markers: Optional[Mapping[str, int]] = None) -> 'Coupling':
        clean = {tuple(sorted(p)): e for p, e in (exponents or {}).items() if tuple(p) != (2,)}
        return cls(_clean(clean), _clean(markers or {}))

    @classmethod
    def one(cls) -> 'Coupling':
        return cls()

    @classmethod
    def g(cls, *partition: int, power: int = 1) -> 'Coupling':
        return cls.of({tuple(partition): power})

    def as_dict(self) -> Dict[Partition, int]:
        return dict(self.exponents)

    def __mul__(self, other: 'Coupling') -> 'Coupling':
        exps = self.as_dict()
        for p, e in other.exponents:
            exps[p] = exps.get(p, 0) + e
        marks = dict(self.markers)
        for m, e in other.markers:
            marks[m] = marks.get(m, 0) + e
        return Coupling(_clean(exps), _clean(marks))

    def __pow__(self, power: int) -> 'Coupling':
        return Coupling(
            _clean({p: e * power for p, e in self.exponents}),
            _clean({m: e * power for m, e in self.markers}),
        )

    def inverse(self) -> 'Coupling':
        return self ** -1

    def __truediv__(self, other: 'Coupling') -> 'Coupling':
        return self * other.inverse()

    def without_markers(self) -> 'Coupling':
        return Coupling(self.exponents)

    def is_one(self) -> bool:
        return not self.exponents and not self.markers

    def substitute_single(self) -> int:
        """Exponent of g after g_n = g^{n−2}; only defined on single-part couplings."""
        total = 0
        for p, e in self.exponents:
            if len(p) != 1:
                raise ValueError(f"g_{p} has no single-coupling substitution")
            total += (p[0] - 2) * e
        return total

    def coefficient_in_markers(self, markers: Mapping[str, int]) -> bool:
        """True when the marker powers are exactly the given ones."""
        return dict(self.markers) == {m: e for m, e in markers.items() if e}

    def to_dict(self) -> Dict[str, int]:
        result = {str(p): e for p, e in self.exponents}
        result.update({f"t_{m}": e for m, e in self.markers})
        return result

    def __str__(self) -> str:
        if self.is_one():
            return '1'
        parts = []
        for p, e in self.exponents:
            name = f"g{p[0]}" if len(p) == 1 else f"g{{{','.join(map(str, p))}}}"
            parts.append(name if e == 1 else f"{name}^{e}")
        for m, e in self.markers:
            parts.append(f"t_{m}" if e == 1 else f"t_{m}^{e}")
        return ' '.join(parts)


def _vertex_partitions(graph: PreCutGraph) -> Iterable[Partition]:
    base = graph.base
    for v, corolla in enumerate(base.vertices):
        if v in graph.vertex_splits:
            yield tuple(sorted(len(part) for part in graph.vertex_splits[v]))
        else:
            yield (len(corolla),)


def coupling(graph: Union[Graph, PreCutGraph], markers: bool = False) -> Coupling:
    """
    g_Γ = Π_v g_{p(v)} · g_{1,1}^{#cut} / g_{p(Γ)}.

    Args:
        graph: A core graph or a pre-cut graph
        markers: Add one t_m per cut edge, m its mass symbol (or 'm')

    Returns:
        The coupling monomial
    """
    if isinstance(graph, Graph):
        graph = PreCutGraph(graph)
    exps: Dict[Partition, int] = {}
    for p in _vertex_partitions(graph):
        exps[p] = exps.get(p, 0) + 1
    if graph.cut_edges:
        exps[CUT_COUPLING] = exps.get(CUT_COUPLING, 0) + len(graph.cut_edges)
    if graph.is_core():
        outer: Partition = (graph.base.n_legs,)
    else:
        outer = graph.component_leg_counts()
    exps[outer] = exps.get(outer, 0) - 1
    marks: Dict[str, int] = {}
    if markers:
        for name in graph.cut_edges:
            symbol = graph.base.masses.get(name) or 'm'
            marks[symbol] = marks.get(symbol, 0) + 1
    return Coupling.of(exps, marks)


def monomial_coupling(monomial: Monomial) -> Coupling:
    """Product of the couplings of the factors; the unit has coupling 1."""
    result = Coupling.one()
    for factor in monomial.factors:
        result = result * coupling(factor)
    return result


def vcd(graph: Union[Graph, PreCutGraph]) -> int:
    """2|Γ| + l_Γ − 3."""
    base = graph.base if isinstance(graph, PreCutGraph) else graph
    return 2 * base.loops + base.n_legs - 3
