"""Necklaces: cyclic words encoding one-loop primitive graphs, cut or uncut."""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cutgraph import PreCutGraph
from .graph import Graph

logger = logging.getLogger(__name__)

UNCUT = 'u'
CUT = 'c'

# ('U', n) unsplit vertex with n legs; ('S', a, b, mids) in-part with a legs,
# out-part with b legs and leg-only parts; ('J', x, mids) in and out halves
# together with x legs, plus leg-only parts.
VertexLetter = Tuple
Unit = Tuple[VertexLetter, str]
GreenSymbol = Tuple[str, Tuple[int, ...]]


def _letter_key(letter: VertexLetter) -> Tuple:
    kind = letter[0]
    if kind == 'U':
        return (0, letter[1])
    if kind == 'S':
        return (1, letter[1], letter[2], tuple(letter[3]))
    return (2, letter[1], tuple(letter[2]))


def _unit_key(unit: Unit) -> Tuple:
    return (_letter_key(unit[0]), 0 if unit[1] == UNCUT else 1)


def letter_legs(letter: VertexLetter) -> int:
    if letter[0] == 'U':
        return letter[1]
    if letter[0] == 'S':
        return letter[1] + letter[2] + sum(letter[3])
    return letter[1] + sum(letter[2])


def format_letter(letter: VertexLetter) -> str:
    if letter[0] == 'U':
        return str(letter[1])
    if letter[0] == 'S':
        return f"S({','.join(map(str, (letter[1], letter[2]) + tuple(letter[3])))})"
    return f"J({','.join(map(str, (letter[1],) + tuple(letter[2])))})"


@dataclass(frozen=True)
class Necklace:
    """A cyclic word of (vertex letter, edge letter) units, stored in canonical rotation."""

    units: Tuple[Unit, ...]

    @classmethod
    def of(cls, units: Sequence[Unit]) -> 'Necklace':
        units = tuple((tuple(v), e) for v, e in units)
        rotations = [units[i:] + units[:i] for i in range(len(units))]
        best = min(rotations, key=lambda word: [_unit_key(u) for u in word])
        return cls(best)

    @property
    def length(self) -> int:
        return len(self.units)

    @property
    def n_legs(self) -> int:
        return sum(letter_legs(v) for v, _ in self.units)

    def is_core(self) -> bool:
        return all(v[0] == 'U' and e == UNCUT for v, e in self.units)

    def word(self) -> str:
        return ''.join(format_letter(v) + e for v, e in self.units)

    def __str__(self) -> str:
        return self.word()

    def realize(self) -> PreCutGraph:
        """
        The one-loop pre-cut graph of the necklace.

        Vertex i carries halves i{i} and o{i}; edge e{i+1} joins o{i} to the
        in-half of the next vertex, a self-loop for a single vertex. Legs are
        numbered around the necklace.

        Returns:
            PreCutGraph with |Γ| = 1
        """
        k = self.length
        corollas: List[List[str]] = []
        leg_halves: List[str] = []
        splits: Dict[int, List[List[str]]] = {}

        def legs(count: int) -> List[str]:
            halves = [f"x{len(leg_halves) + j + 1}" for j in range(count)]
            leg_halves.extend(halves)
            return halves

        for i, (letter, _) in enumerate(self.units):
            h_in, h_out = f"i{i}", f"o{i}"
            if letter[0] == 'U':
                corollas.append([h_in, h_out] + legs(letter[1]))
                continue
            if letter[0] == 'S':
                in_part = [h_in] + legs(letter[1])
                mids = [legs(m) for m in letter[3]]
                out_part = [h_out] + legs(letter[2])
                parts = [in_part] + mids + [out_part]
            else:
                joint = [h_in, h_out] + legs(letter[1])
                parts = [joint] + [legs(m) for m in letter[2]]
            corollas.append([h for part in parts for h in part])
            splits[i] = parts

        edges = {}
        cut = []
        for i, (_, edge_letter) in enumerate(self.units):
            name = f"e{i + 1}"
            edges[name] = (f"o{i}", f"i{(i + 1) % k}")
            if edge_letter == CUT:
                cut.append(name)
        base = Graph(corollas, edges, leg_halves)
        return PreCutGraph(base, cut, splits)

    def pi_omega(self) -> Dict[GreenSymbol, int]:
        """
        Π_ω as exponents of Green-function symbols.

        Unsplit vertices give G^{val}_core, split vertices G^{p}_pC with p the
        sorted part sizes, uncut edges divide by G²_core and cut edges
        multiply by G^{1,1}_pC.
        """
        exponents: Dict[GreenSymbol, int] = {}

        def bump(symbol: GreenSymbol, by: int) -> None:
            exponents[symbol] = exponents.get(symbol, 0) + by
            if not exponents[symbol]:
                del exponents[symbol]

        graph = self.realize()
        for i, (letter, edge_letter) in enumerate(self.units):
            if letter[0] == 'U':
                bump(('core', (letter[1] + 2,)), 1)
            else:
                sizes = tuple(sorted(len(part) for part in graph.vertex_splits[i]))
                bump(('pC', sizes), 1)
            if edge_letter == UNCUT:
                bump(('core', (2,)), -1)
            else:
                bump(('pC', (1, 1)), 1)
        return dict(sorted(exponents.items()))


def format_pi_omega(exponents: Dict[GreenSymbol, int]) -> str:
    """Readable form such as G^3 (G^{1,2})^2 / (G^2)^3."""
    numerator, denominator = [], []
    for (kind, p), power in exponents.items():
        label = f"G^{p[0]}" if kind == 'core' else f"G^{{{','.join(map(str, p))}}}"
        text = label if abs(power) == 1 else f"({label})^{abs(power)}"
        (numerator if power > 0 else denominator).append(text)
    top = ' '.join(numerator) or '1'
    return f"{top} / {' '.join(denominator)}" if denominator else top


def necklace_classes(alphabet: Sequence, length: int) -> List[Tuple]:
    """Words of the given length up to rotation, as their minimal rotations."""
    classes = set()
    for word in product(alphabet, repeat=length):
        rotations = [word[i:] + word[:i] for i in range(length)]
        classes.add(min(rotations))
    return sorted(classes)


def _compositions(total: int, parts: int) -> List[Tuple[int, ...]]:
    if parts == 1:
        return [(total,)] if total >= 1 else []
    result = []
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            result.append((first,) + rest)
    return result


def necklaces(n: int) -> List[Necklace]:
    """Core necklaces: cyclic compositions of n legs over one-loop vertices."""
    found = set()
    for k in range(1, n + 1):
        for composition in _compositions(n, k):
            found.add(Necklace.of([(('U', c), UNCUT) for c in composition]))
    return sorted(found, key=lambda w: (w.length, [_unit_key(u) for u in w.units]))


def vertex_letters(legs: int, max_parts: Optional[int] = 2) -> List[VertexLetter]:
    """All vertex letters carrying the given number of legs."""
    limit = legs + 2 if max_parts is None else max_parts
    letters: List[VertexLetter] = [('U', legs)] if legs >= 1 else []
    for mid_count in range(0, limit):
        for mids_total in range(mid_count, legs + 1):
            if mid_count == 0:
                mid_options = [()] if mids_total == 0 else []
            else:
                mid_options = _compositions(mids_total, mid_count)
            rest = legs - mids_total
            for mids in mid_options:
                if mid_count + 2 <= limit:
                    for a in range(rest + 1):
                        b = rest - a
                        if a + b >= 1:
                            letters.append(('S', a, b, tuple(mids)))
                if mid_count >= 1 and mid_count + 1 <= limit:
                    letters.append(('J', rest, tuple(mids)))
    return sorted(set(letters), key=_letter_key)


def _valid_cut(graph: PreCutGraph, partition: Tuple[int, ...]) -> bool:
    if graph.is_core() or not graph.is_pre_cutkosky():
        return False
    if graph.norm != 0 or graph.legless_components():
        return False
    return graph.component_leg_counts() == partition


def necklaces_cut(partition: Iterable[int], max_parts: Optional[int] = 2) -> List[Necklace]:
    """
    Pre-Cutkosky necklaces whose components carry the legs of the partition.

    Args:
        partition: Leg counts of the components of Γ̃
        max_parts: Most parts a split corolla may have; None for no limit

    Returns:
        Necklaces with no loop left intact, sorted
    """
    partition = tuple(sorted(partition))
    total = sum(partition)
    letters_by_legs = {t: vertex_letters(t, max_parts) for t in range(1, total + 1)}
    found = set()
    for k in range(1, total + 1):
        for composition in _compositions(total, k):
            choices = [letters_by_legs[t] for t in composition]
            for letters in product(*choices):
                for edge_letters in product((UNCUT, CUT), repeat=k):
                    candidate = Necklace.of(list(zip(letters, edge_letters)))
                    if candidate in found:
                        continue
                    if _valid_cut(candidate.realize(), partition):
                        found.add(candidate)
    result = sorted(found, key=lambda w: (w.length, [_unit_key(u) for u in w.units]))
    logger.info(f"{len(result)} cut necklaces for partition {list(partition)}")
    return result
