"""Green functions as graph series, skeleton insertion B₊ and the Dyson–Schwinger identities."""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations, product
from math import factorial
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from sympy.utilities.iterables import multiset_partitions

from .algebra import GraphSum, Monomial, TensorSum, _underlying, generator_key, one_leg
from .checks import CheckReport
from .coproducts import Coproduct, PreCutkoskyCoproduct, ProjectedCoproduct
from .couplings import CUT_COUPLING, Coupling, coupling, monomial_coupling
from .cutgraph import PreCutGraph
from .errors import StructureMismatchError
from .forests import enumerate_subgraphs, spanning_forests
from .generator import enumerate_graphs
from .graph import Graph
from .necklace import GreenSymbol, format_pi_omega, necklaces_cut
from .series import SeriesRing, merge_exponents, scale_exponents

logger = logging.getLogger(__name__)

Target = Union[int, Sequence[int]]
PROPAGATOR: GreenSymbol = ('core', (2,))


def green_symbol(target: Target) -> GreenSymbol:
    """
    Normalize a target: an int n is the core n-point function, a partition
    with two or more parts the pre-Cutkosky function of that cut type.

    Raises:
        ValueError: for empty partitions, zero parts or fewer than 2 core legs
    """
    parts = (target,) if isinstance(target, int) else tuple(sorted(int(p) for p in target))
    if not parts or min(parts) < 1:
        raise ValueError(f"Invalid Green function target {target}")
    if len(parts) == 1:
        if parts[0] < 2:
            raise ValueError(f"Core Green functions need at least 2 legs, got {parts[0]}")
        return ('core', parts)
    return ('pC', parts)


# ----------------------------------------------------------------------
# series enumeration


@dataclass(frozen=True)
class GreenTerm:
    """One isomorphism class (external legs unlabelled) of a Green function."""

    key: str
    generator: Union[Graph, PreCutGraph]
    weight: Fraction
    coupling: Coupling

    @property
    def monomial(self) -> Monomial:
        return Monomial.of(self.generator)

    @property
    def loops(self) -> int:
        return _underlying(self.generator).loops


@dataclass
class GreenSeries:
    """
    G = constant·𝕀 + sign·Σ weight·Γ, truncated at ``loops``.

    Weights are Σ 1/|Aut| over the leg-labelled classes of each graph.
    """

    symbol: GreenSymbol
    loops: int
    degrees: Tuple[int, ...]
    terms: List[GreenTerm]
    constant: Fraction = Fraction(0)
    sign: int = 1

    def body(self) -> GraphSum:
        """Σ weight·Γ without the constant and the sign."""
        result = GraphSum()
        for term in self.terms:
            result.add(term.monomial, term.weight)
        return result

    def to_graph_sum(self) -> GraphSum:
        result = self.body().scale(self.sign)
        if self.constant:
            result.add(Monomial.unit(), self.constant)
        return result

    def couplings(self) -> List[Coupling]:
        return sorted({t.coupling for t in self.terms}, key=str)

    def extract(self, power: Coupling) -> GraphSum:
        """[g^k]G, the constant included when k is trivial."""
        result = GraphSum()
        for term in self.terms:
            if term.coupling == power:
                result.add(term.monomial, self.sign * term.weight)
        if power.is_one() and self.constant:
            result.add(Monomial.unit(), self.constant)
        return result

    def to_records(self) -> List[Dict[str, Any]]:
        records = []
        for term in self.terms:
            record = {
                'loops': term.loops,
                'key': term.key,
                'weight': str(self.sign * term.weight),
                'coupling': str(term.coupling),
            }
            if self.symbol[0] == 'core':
                record['g_order'] = term.coupling.substitute_single()
            records.append(record)
        return records


def cutkosky_structures(graph: Graph, partition: Sequence[int],
                        intact: Optional[int] = None) -> List[PreCutGraph]:
    """
    The distinct Cutkosky cuts of a graph whose Γ̃ components carry the given leg counts.

    Every cut set is the crossing set of a spanning forest with one tree per
    part, so forests are enumerated and their crossing sets deduplicated.

    Args:
        graph: An uncut graph
        partition: Sorted leg counts per component
        intact: If given, the required ‖·‖ of the cut graph

    Returns:
        Cut graphs, one per cut set
    """
    partition = tuple(sorted(partition))
    seen = set()
    found = []
    for forest in spanning_forests(graph, len(partition)):
        cut = forest.crossing_edges
        if cut in seen:
            continue
        seen.add(cut)
        candidate = PreCutGraph(graph, cut)
        if candidate.legless_components() or candidate.component_leg_counts() != partition:
            continue
        if not candidate.is_cutkosky():
            continue
        if intact is not None and candidate.norm != intact:
            continue
        found.append(candidate)
    return found


def _collect(classes: Iterable[Tuple[Union[Graph, PreCutGraph], int]], markers: bool) -> List[GreenTerm]:
    weights: Dict[str, Fraction] = {}
    representatives: Dict[str, Union[Graph, PreCutGraph]] = {}
    for generator, aut in classes:
        key = generator_key(generator)
        weights[key] = weights.get(key, Fraction(0)) + Fraction(1, aut)
        representatives.setdefault(key, generator)
    terms = [
        GreenTerm(key, representatives[key], weights[key], coupling(representatives[key], markers))
        for key in weights
    ]
    return sorted(terms, key=lambda t: (t.loops, t.key))


@lru_cache(maxsize=None)
def _green_terms(symbol: GreenSymbol, loops: int, degrees: Tuple[int, ...],
                 markers: bool, threads: int) -> Tuple[GreenTerm, ...]:
    kind, parts = symbol
    graphs = enumerate_graphs(sum(parts), loops, degrees, threads) if loops >= 1 else []
    if kind == 'core':
        classes = ((graph, aut) for graph, aut in graphs)
    else:
        classes = (
            (cut, aut) for graph, aut in graphs for cut in cutkosky_structures(graph, parts)
        )
    return tuple(_collect(classes, markers))


def set_partition_count(shape: Sequence[int]) -> int:
    """Number of set partitions of a |q|-set into blocks of the sizes q."""
    count = factorial(sum(shape))
    for size in shape:
        count //= factorial(size)
    for multiplicity in Counter(shape).values():
        count //= factorial(multiplicity)
    return count


def _split_options(graph: Graph, v: int, degrees: Tuple[int, ...]) -> List[Optional[List[FrozenSet[str]]]]:
    corolla = list(graph.vertices[v])
    options: List[Optional[List[FrozenSet[str]]]] = [None] if len(corolla) in degrees else []
    if len(corolla) >= 3:
        for m in range(2, len(corolla) + 1):
            options.extend(
                [frozenset(block) for block in blocks]
                for blocks in multiset_partitions(corolla, m)
            )
    return options


def precutkosky_structures(graph: Graph, partition: Sequence[int],
                           degrees: Iterable[int] = (3, 4)) -> List[Tuple[PreCutGraph, int]]:
    """
    The pre-Cutkosky graphs on a graph with at least one split vertex.

    Unsplit vertices keep a valence of the theory; split vertices may have
    any valence of at least three, since a split two-valent vertex is a cut
    edge. Every cut set is tried.

    Args:
        graph: An uncut graph
        partition: Sorted leg counts per component of Γ̃
        degrees: Vertex valences of the theory

    Returns:
        (pre-cut graph, Π_v N_{q_v}) pairs, N_q counting the set partitions
        of the split corolla's shape
    """
    partition = tuple(sorted(partition))
    degrees = tuple(degrees)
    choices = [_split_options(graph, v, degrees) for v in range(graph.n_vertices)]
    names = list(graph.edges)
    found = []
    for choice in product(*choices):
        splits = {v: parts for v, parts in enumerate(choice) if parts is not None}
        if not splits:
            continue
        shapes = 1
        for parts in splits.values():
            shapes *= set_partition_count([len(p) for p in parts])
        for size in range(len(names) + 1):
            for cut in combinations(names, size):
                candidate = PreCutGraph(graph, cut, splits)
                if not candidate.is_pre_cutkosky() or candidate.legless_components():
                    continue
                if candidate.component_leg_counts() != partition:
                    continue
                found.append((candidate, shapes))
    return found


@lru_cache(maxsize=None)
def _precut_terms(parts: Tuple[int, ...], loops: int, degrees: Tuple[int, ...],
                  threads: int) -> Tuple[GreenTerm, ...]:
    n = sum(parts)
    graphs = enumerate_graphs(n, loops, range(3, n + 2 * loops + 1), threads) if loops >= 1 else []
    classes = (
        (cut, aut * shapes) for graph, aut in graphs
        for cut, shapes in precutkosky_structures(graph, parts, degrees)
    )
    return tuple(_collect(classes, markers=False))


def precut_green_series(partition: Sequence[int], loops: int, degrees: Iterable[int] = (3, 4),
                        threads: int = 1) -> GreenSeries:
    """
    The pre-Cutkosky graphs of a cut type with split vertices, up to ``loops`` loops.

    They are the co-graphs Δ_pC produces besides the Cutkosky graphs of G^p.
    A class weighs Σ 1/(|Aut|·Π_v N_{q_v}) over its leg-labelled underlying
    graphs, so each shape of split corolla counts once.
    """
    symbol = green_symbol(partition)
    if symbol[0] != 'pC':
        raise ValueError(f"Split vertices need a cut type, got {partition}")
    degrees = tuple(sorted(set(degrees)))
    terms = list(_precut_terms(symbol[1], loops, degrees, threads))
    logger.debug(f"Pre-Cutkosky graphs {list(symbol[1])} to {loops} loops: {len(terms)} classes")
    return GreenSeries(symbol, loops, degrees, terms)


def green_series(target: Target, loops: int, degrees: Iterable[int] = (3, 4),
                 markers: bool = False, threads: int = 1) -> GreenSeries:
    """
    Green function of a core or cut type, up to ``loops`` loops.

    G² = 𝕀 − Σ, G^n = 𝕀 + Σ for n among the degrees and Σ alone otherwise.
    G^{1,1} = ≁ + Σ with the bare cut propagator ≁ read as 𝕀; other cut types
    have no constant term.

    Args:
        target: n or a partition of the legs
        loops: Truncation order
        degrees: Allowed vertex valences
        markers: Track t_m mass markers for cut edges in the couplings
        threads: Worker threads for the enumeration

    Returns:
        The truncated series
    """
    symbol = green_symbol(target)
    degrees = tuple(sorted(set(degrees)))
    terms = list(_green_terms(symbol, loops, degrees, markers, threads))
    kind, parts = symbol
    sign = 1
    if kind == 'core':
        if parts == (2,):
            constant, sign = Fraction(1), -1
        else:
            constant = Fraction(1 if parts[0] in degrees else 0)
    else:
        constant = Fraction(1 if parts == CUT_COUPLING else 0)
    logger.debug(f"Green function {symbol} to {loops} loops: {len(terms)} classes")
    return GreenSeries(symbol, loops, degrees, terms, constant, sign)


class GreenFunctions:
    """Green series of one theory at a fixed order, with products of their powers."""

    def __init__(self, loops: int, degrees: Iterable[int] = (3, 4), threads: int = 1):
        self.loops = loops
        self.degrees = tuple(sorted(set(degrees)))
        self.threads = threads
        self._series: Dict[GreenSymbol, GraphSum] = {}

    def green(self, target: Union[Target, GreenSymbol]) -> GreenSeries:
        if isinstance(target, tuple) and target and isinstance(target[0], str):
            kind, parts = target
            target = parts[0] if kind == 'core' else parts
        return green_series(target, self.loops, self.degrees, threads=self.threads)

    def series(self, symbol: GreenSymbol) -> GraphSum:
        if symbol not in self._series:
            self._series[symbol] = self.green(symbol).to_graph_sum()
        return self._series[symbol]

    def product(self, exponents: Dict[GreenSymbol, Any], loops: Optional[int] = None) -> GraphSum:
        """Π G^{e} truncated at ``loops`` (the full order by default)."""
        ring = SeriesRing(self.loops if loops is None else loops)
        return ring.product(exponents, self.series)


# ----------------------------------------------------------------------
# insertion


@dataclass(frozen=True)
class Placement:
    """Where the factors of a monomial go in a skeleton."""

    # (skeleton vertex, factor index)
    blobs: Tuple[Tuple[int, int], ...]
    # (skeleton edge, factor indices along it, cut segment or -1)
    chains: Tuple[Tuple[str, Tuple[int, ...], int], ...]


def _arrangements(keys: Tuple[str, ...], slots: int) -> List[Tuple[Tuple[str, ...], ...]]:
    """Distinct ways to lay a multiset of keys out as ordered sequences in the slots."""
    if slots == 0:
        return [()] if not keys else []
    n = len(keys)
    found = set()
    for order in set(permutations(keys)):
        for bounds in combinations_with_replacement(range(n + 1), slots - 1):
            cuts = (0,) + bounds + (n,)
            found.add(tuple(order[cuts[s]:cuts[s + 1]] for s in range(slots)))
    return sorted(found)


def placements(skeleton: PreCutGraph, factors: Sequence[Graph]) -> List[Placement]:
    """
    Every distinct placement of the factors into the skeleton.

    Factors with three or more legs replace an unsplit vertex of the same
    valence, at most one per vertex. Two-leg factors form ordered chains on
    the edges; on a cut edge exactly one segment of the chain stays cut.

    Raises:
        StructureMismatchError: for factors with fewer than two legs
    """
    base = skeleton.base
    keys = [generator_key(f) for f in factors]
    if any(f.n_legs < 2 for f in factors):
        raise StructureMismatchError("Only vertex and propagator insertions are possible")
    blob_ix = sorted((i for i, f in enumerate(factors) if f.n_legs >= 3), key=lambda i: keys[i])
    chain_ix = [i for i, f in enumerate(factors) if f.n_legs == 2]
    free = [v for v in range(base.n_vertices) if v not in skeleton.vertex_splits]

    blob_sets = set()

    def assign(remaining: List[int], used: frozenset, chosen: Tuple) -> None:
        if not remaining:
            blob_sets.add(tuple(sorted(chosen)))
            return
        i = remaining[0]
        for v in free:
            if v not in used and base.valence(v) == factors[i].n_legs:
                assign(remaining[1:], used | {v}, chosen + ((v, keys[i]),))

    assign(blob_ix, frozenset(), ())

    def indices_for(key_lists: Iterable[str], pool: Sequence[int]) -> List[int]:
        available: Dict[str, List[int]] = {}
        for i in pool:
            available.setdefault(keys[i], []).append(i)
        return [available[k].pop() for k in key_lists]

    edge_names = list(base.edges)
    chain_keys = tuple(sorted(keys[i] for i in chain_ix))
    result = []
    for blob_set in sorted(blob_sets):
        blob_indices = indices_for([k for _, k in blob_set], blob_ix)
        blobs = tuple((v, i) for (v, _), i in zip(blob_set, blob_indices))
        for arrangement in _arrangements(chain_keys, len(edge_names)):
            flat = indices_for([k for seq in arrangement for k in seq], chain_ix)
            sequences, start = [], 0
            for seq in arrangement:
                sequences.append(tuple(flat[start:start + len(seq)]))
                start += len(seq)
            cut_ranges = [
                range(len(seq) + 1) if name in skeleton.cut_edges else (-1,)
                for name, seq in zip(edge_names, sequences)
            ]
            for positions in product(*cut_ranges):
                chains = tuple(
                    (name, seq, pos)
                    for name, seq, pos in zip(edge_names, sequences, positions)
                    if seq
                )
                result.append(Placement(blobs, chains))
    return result


def glue(skeleton: PreCutGraph, factors: Sequence[Graph], placement: Placement,
         injections: Sequence[Tuple[int, ...]], orientations: Sequence[bool]) -> PreCutGraph:
    """
    Insert the factors at their places.

    A blob at vertex v takes over its corolla: the internal half-edges of v
    are attached to the blob legs chosen by the injection and the external
    legs of v, in label order, to the remaining blob legs in order. A chain
    subdivides its edge; each self-energy is flipped when its orientation is
    True.

    Args:
        skeleton: The primitive graph
        factors: The insertions
        placement: Where each factor goes
        injections: Per blob, the blob legs taken by the internal halves
        orientations: One flag per chain member, along the edges in order

    Returns:
        The glued pre-cut graph
    """
    base = skeleton.base
    blob_at = {v: (factors[i], inj) for (v, i), inj in zip(placement.blobs, injections)}
    kept = [v for v in range(base.n_vertices) if v not in blob_at]
    vertices: List[List[str]] = [list(base.vertices[v]) for v in kept]
    edges: Dict[str, Tuple[str, str]] = {}
    masses: Dict[str, str] = {}
    sub: Dict[str, str] = {}

    def graft(graph: Graph, tag: str) -> List[str]:
        vertices.extend([[f"{tag}:{h}" for h in c] for c in graph.vertices])
        for name, (a, b) in graph.edges.items():
            edges[f"{tag}:{name}"] = (f"{tag}:{a}", f"{tag}:{b}")
        masses.update({f"{tag}:{name}": m for name, m in graph.masses.items()})
        return [f"{tag}:{h}" for h in graph.legs]

    for v, (blob, injection) in sorted(blob_at.items()):
        corolla = base.vertices[v]
        internal = [h for h in corolla if h in base.edge_of]
        external = sorted((h for h in corolla if h not in base.edge_of), key=base.leg_label.get)
        legs = graft(blob, f"v{v}")
        sub.update(zip(internal, (legs[j] for j in injection)))
        sub.update(zip(external, (h for j, h in enumerate(legs) if j not in injection)))

    chains = {name: (seq, pos) for name, seq, pos in placement.chains}
    flips = iter(orientations)
    cut = set(skeleton.cut_edges)
    for name, (a, b) in base.edges.items():
        seq, pos = chains.get(name, ((), -1))
        segments = []
        current = a
        for j, i in enumerate(seq):
            ends = graft(factors[i], f"{name}:{j}")
            if next(flips):
                ends = ends[::-1]
            segments.append((current, ends[0]))
            current = ends[1]
        segments.append((current, b))
        for j, pair in enumerate(segments):
            segment = name if j == 0 else f"{name}.{j}"
            edges[segment] = pair
            if name in base.masses:
                masses[segment] = base.masses[name]
        if name in cut and pos > 0:
            cut.discard(name)
            cut.add(f"{name}.{pos}")

    edges = {n: (sub.get(a, a), sub.get(b, b)) for n, (a, b) in edges.items()}
    legs = [sub.get(h, h) for h in base.legs]
    index = {v: i for i, v in enumerate(kept)}
    splits = {index[v]: parts for v, parts in skeleton.vertex_splits.items()}
    return PreCutGraph(Graph(vertices, edges, legs, masses, strict=False), cut, splits)


def _monomial(graph: PreCutGraph) -> Monomial:
    return Monomial.of(graph.base) if graph.is_core() else Monomial.of(graph)


def _insertion_factor(factor: Any) -> Graph:
    if isinstance(factor, PreCutGraph) and not factor.is_core():
        raise StructureMismatchError("Only uncut graphs can be inserted")
    return _underlying(factor)


def _insert(skeleton: PreCutGraph, monomial: Monomial) -> GraphSum:
    factors = [_insertion_factor(f) for f in monomial.factors]
    options = placements(skeleton, factors)
    if not options:
        raise StructureMismatchError(f"No place in the skeleton for {monomial}")
    base = skeleton.base
    share = Fraction(1, len(options))
    result = GraphSum()
    for placement in options:
        choices: List[List[Any]] = []
        for v, i in placement.blobs:
            r = sum(1 for h in base.vertices[v] if h in base.edge_of)
            choices.append(list(permutations(range(factors[i].n_legs), r)))
        members = sum(len(seq) for _, seq, _ in placement.chains)
        choices.append(list(product((False, True), repeat=members)))
        combos = list(product(*choices))
        weight = share / len(combos)
        for combo in combos:
            glued = glue(skeleton, factors, placement, combo[:-1], combo[-1])
            result.add(_monomial(glued), weight)
    return result


def decomposition_count(graph: PreCutGraph, skeleton_norm: int) -> int:
    """
    Number of uncut bridgeless subgraphs H (∅ included) with ‖Γ/H‖ equal to the skeleton's.

    One-loop core skeletons have norm 1, skeletons with no loop left intact
    norm 0; for the latter H is unique.
    """
    base = graph.base
    count = int(graph.norm == skeleton_norm)
    for names in enumerate_subgraphs(base):
        if names & graph.cut_edges:
            continue
        if graph.norm - base.subgraph(names).loops == skeleton_norm:
            count += 1
    return count


def b_plus(skeleton: Union[Graph, PreCutGraph], x: Any) -> GraphSum:
    """
    B₊^γ(X): insert every monomial of X into γ in all possible ways.

    Each monomial is averaged over its placements and attachments, and each
    resulting graph Γ is divided by its number of decompositions over γ's
    skeleton family. B₊^γ(𝕀) = γ.

    Args:
        skeleton: A one-loop core graph or a cut graph with no loop left intact
        x: GraphSum of uncut insertions

    Returns:
        The inserted sum, keyed without leg labels

    Raises:
        StructureMismatchError: when a monomial does not fit the skeleton
    """
    skeleton = skeleton if isinstance(skeleton, PreCutGraph) else PreCutGraph(skeleton)
    result = GraphSum()
    counts: Dict[Monomial, int] = {}
    for monomial, coeff in one_leg(x).items():
        for glued, weight in _insert(skeleton, monomial).terms.items():
            if glued not in counts:
                counts[glued] = decomposition_count(_as_precut(glued.factors[0]), skeleton.norm)
            if counts[glued] == 0:
                raise StructureMismatchError(f"{glued} has no decomposition over the skeleton")
            result.add(glued, coeff * weight / counts[glued])
    return result


def _as_precut(generator: Union[Graph, PreCutGraph]) -> PreCutGraph:
    return generator if isinstance(generator, PreCutGraph) else PreCutGraph(generator)


def skeleton_exponents(skeleton: PreCutGraph) -> Dict[GreenSymbol, int]:
    """
    The Green functions inserted into a skeleton.

    G^{val} per unsplit vertex (G^p per split one), 1/G² per uncut edge and
    1/(G²)² per cut edge, whose chain carries exactly one cut propagator.
    """
    base = skeleton.base
    exponents: Dict[GreenSymbol, int] = {}
    for v, corolla in enumerate(base.vertices):
        if v in skeleton.vertex_splits:
            symbol: GreenSymbol = ('pC', tuple(sorted(len(p) for p in skeleton.vertex_splits[v])))
        else:
            symbol = ('core', (len(corolla),))
        exponents[symbol] = exponents.get(symbol, 0) + 1
    for name in base.edges:
        exponents[PROPAGATOR] = exponents.get(PROPAGATOR, 0) - (2 if name in skeleton.cut_edges else 1)
    return {s: e for s, e in sorted(exponents.items()) if e}


# ----------------------------------------------------------------------
# skeletons


@dataclass(frozen=True)
class PrimitiveSkeleton:
    """A skeleton with its coefficient and the Green functions it is dressed with."""

    graph: PreCutGraph
    coefficient: Fraction
    exponents: Tuple[Tuple[GreenSymbol, int], ...]

    @property
    def loops(self) -> int:
        return self.graph.loops

    def to_dict(self) -> Dict[str, Any]:
        return {
            'key': self.graph.key(labelled=False),
            'loops': self.loops,
            'class': self.graph.classify(),
            'coefficient': str(self.coefficient),
            'insertions': format_pi_omega(dict(self.exponents)),
        }


def _skeleton_list(classes: Iterable[Tuple[PreCutGraph, Fraction]]) -> List[PrimitiveSkeleton]:
    weights: Dict[str, Fraction] = {}
    representatives: Dict[str, PreCutGraph] = {}
    for graph, weight in classes:
        key = graph.key(labelled=False)
        weights[key] = weights.get(key, Fraction(0)) + weight
        representatives.setdefault(key, graph)
    result = [
        PrimitiveSkeleton(
            representatives[k], weights[k],
            tuple(skeleton_exponents(representatives[k]).items()),
        )
        for k in weights
    ]
    return sorted(result, key=lambda s: (s.loops, s.graph.base.n_vertices, s.graph.key(labelled=False)))


def core_skeletons(n: int, threads: int = 1) -> List[PrimitiveSkeleton]:
    """One-loop n-point graphs with Σ 1/|Aut| over their leg-labelled classes."""
    graphs = enumerate_graphs(n, 1, range(3, n + 3), threads)
    return _skeleton_list((PreCutGraph(g), Fraction(1, aut)) for g, aut in graphs)


def cut_skeletons(partition: Sequence[int], degrees: Iterable[int] = (3, 4)) -> List[PrimitiveSkeleton]:
    """
    One-loop Cutkosky skeletons of a cut type, from necklaces.

    The weight of a class is n!/|Aut| with the legs unlabelled, which equals
    Σ 1/|Aut| over its leg-labelled classes.
    """
    degrees = set(degrees)
    classes = []
    for necklace in necklaces_cut(partition):
        graph = necklace.realize()
        if not graph.is_cut():
            continue
        if any(len(c) not in degrees for c in graph.base.vertices):
            continue
        weight = Fraction(factorial(graph.base.n_legs), graph.automorphisms(labelled=False))
        classes.append((graph, weight))
    # reflected necklaces realize the same class; keep one weight per class
    unique: Dict[str, Tuple[PreCutGraph, Fraction]] = {}
    for graph, weight in classes:
        unique.setdefault(graph.key(labelled=False), (graph, weight))
    return _skeleton_list(unique.values())


def primitive_decomposition(partition: Sequence[int], loops: int, degrees: Iterable[int] = (3, 4),
                            threads: int = 1) -> List[PrimitiveSkeleton]:
    """
    The skeletons Γ_j with no loop left intact, up to ``loops`` loops.

    Skeleton vertices take any valence since they may carry blobs; each is
    dressed with Π_v G^{val} over its uncut and cut propagators.

    Args:
        partition: Cut type p
        loops: Largest skeleton loop number
        degrees: Unused by the skeleton set; kept for a uniform signature
        threads: Worker threads for the enumeration

    Returns:
        Skeletons with coefficients c_j
    """
    parts = tuple(sorted(partition))
    if len(parts) < 2:
        raise ValueError(f"A cut type needs at least two parts, got {list(parts)}")
    n = sum(parts)
    graphs = enumerate_graphs(n, loops, range(3, n + 2 * loops + 1), threads) if loops >= 1 else []
    classes = (
        (cut, Fraction(1, aut)) for graph, aut in graphs
        for cut in cutkosky_structures(graph, parts, intact=0)
    )
    skeletons = _skeleton_list(classes)
    logger.info(f"{len(skeletons)} skeletons with no intact loop for {list(parts)} up to {loops} loops")
    return skeletons


# ----------------------------------------------------------------------
# identities


def _report_difference(report: CheckReport, lhs: Any, rhs: Any, label: str) -> None:
    difference = lhs - rhs
    report.record(not difference, label)
    report.details.update({
        'lhs_terms': len(lhs),
        'rhs_terms': len(rhs),
        'difference_terms': len(difference),
    })


def check_graphins(target: Target, loops: int, degrees: Iterable[int] = (3, 4),
                   threads: int = 1) -> CheckReport:
    """
    Σ_γ g_γ/|Aut γ| · B₊^γ(Π_γ) against the enumerated Green function.

    The one-loop |p|-point skeletons are dressed with their vertex and
    propagator Green functions. A cut target then takes every graph of the
    insertion sum to the sum of its Cutkosky cuts of type p. At one loop the
    Cutkosky necklaces are compared with the enumeration as well.
    """
    symbol = green_symbol(target)
    kind, parts = symbol
    degrees = tuple(sorted(set(degrees)))
    report = CheckReport(f"graph-insertion[{format_pi_omega({symbol: 1})}]")
    expected = green_series(parts[0] if kind == 'core' else parts, loops, degrees, threads=threads).body()

    greens = GreenFunctions(max(loops - 1, 0), degrees, threads)
    skeletons = core_skeletons(sum(parts), threads) if loops >= 1 else []
    lhs = GraphSum()
    for skeleton in skeletons:
        dressing = greens.product(dict(skeleton.exponents))
        if dressing:
            lhs = lhs + b_plus(skeleton.graph, dressing).scale(skeleton.coefficient)
    report.details['skeletons'] = len(skeletons)

    if kind == 'core':
        _report_difference(report, lhs, expected, f"n={parts[0]} at {loops} loops")
        return report

    _report_difference(report, cut_images(lhs, parts), expected, f"{list(parts)} at {loops} loops")
    if loops >= 1:
        necklaces = GraphSum()
        for skeleton in cut_skeletons(parts, degrees):
            necklaces.add(Monomial.of(skeleton.graph), skeleton.coefficient)
        one_loop = GraphSum({m: c for m, c in expected.terms.items() if m.loops == 1})
        report.record(not (necklaces - one_loop), f"{list(parts)} necklaces")
        report.details['necklaces'] = len(necklaces)
    return report


def cut_images(x: GraphSum, partition: Sequence[int]) -> GraphSum:
    """Replace every uncut graph by the sum of its Cutkosky cuts of the given type."""
    result = GraphSum()
    for monomial, coeff in x.items():
        if len(monomial.factors) != 1:
            raise StructureMismatchError(f"Cuts are taken of connected graphs, got {monomial}")
        for cut in cutkosky_structures(_underlying(monomial.factors[0]), partition):
            result.add(Monomial.of(cut), coeff)
    return result


def check_primitive_decomposition(partition: Sequence[int], loops: int, degrees: Iterable[int] = (3, 4),
                                  threads: int = 1) -> CheckReport:
    """G^p = Σ_j c_j B₊^{Γ_j}(Π_j^p) over the skeletons with no loop left intact."""
    parts = tuple(sorted(partition))
    degrees = tuple(sorted(set(degrees)))
    report = CheckReport(f"primitive-decomposition[{list(parts)}]")
    greens = GreenFunctions(loops, degrees, threads)
    lhs = GraphSum()
    skeletons = primitive_decomposition(parts, loops, degrees, threads)
    for skeleton in skeletons:
        dressing = greens.product(dict(skeleton.exponents), loops - skeleton.loops)
        if dressing:
            lhs = lhs + b_plus(skeleton.graph, dressing).scale(skeleton.coefficient)
    expected = green_series(parts, loops, degrees, threads=threads).body()
    _report_difference(report, lhs, expected, f"{list(parts)} at {loops} loops")
    report.details['skeletons'] = len(skeletons)
    return report


def invariant_charge(part: Tuple[int, ...]) -> Dict[GreenSymbol, Fraction]:
    """
    Exponents of the invariant charge Q_p.

    Q_n = G^n/(G²)^{n/2} and Q_q = G^q/(G²)^{|q|/2} for a cut type q, so the
    cut propagator charge is Q_{1,1} = G^{1,1}/G².
    """
    part = tuple(sorted(part))
    kind = 'core' if len(part) == 1 else 'pC'
    return {(kind, part): Fraction(1), PROPAGATOR: Fraction(-sum(part), 2)}


def charge_exponents(power: Coupling) -> Dict[GreenSymbol, Fraction]:
    """Q^k = Π_p Q_p^{k_p}."""
    result: Dict[GreenSymbol, Fraction] = {}
    for part, e in power.exponents:
        result = merge_exponents(result, scale_exponents(invariant_charge(part), e))
    return result


def extract_coupling(x: GraphSum, power: Coupling) -> GraphSum:
    """[g^k] of a series of monomials."""
    return GraphSum({m: c for m, c in x.terms.items() if monomial_coupling(m) == power})


def _coproduct_for(symbol: GreenSymbol, degrees: Tuple[int, ...]) -> Coproduct:
    allowed = [d - 2 for d in degrees]
    if symbol[0] == 'core':
        return ProjectedCoproduct(allowed)
    return PreCutkoskyCoproduct(allowed=allowed)


def check_coprod_green(target: Target, loops: int, degrees: Iterable[int] = (3, 4),
                       power: Optional[Coupling] = None, threads: int = 1) -> CheckReport:
    """
    Δ([g^k]G) = Σ_j [g^j](G·Q^{k−j}) ⊗ [g^{k−j}]G.

    The right factors run over the terms of G and the unit; the left factor
    of a right term of coupling c is read off G·Q^c, where the target's own
    Green function cancels against its charge before expanding. Core targets
    use Δ_N with N the degrees minus two (Δ_core when the degrees cover
    every valence that can occur). Cut targets use Δ_pC restricted to
    unsplit vertices of the theory; their right factors also run over the
    pre-Cutkosky graphs with split vertices, whose split corollas are
    charged with Q_q.

    Args:
        target: n in the degrees or 2, or a cut type
        loops: Truncation order
        degrees: Vertex valences of the theory
        power: One coupling k; all couplings of G by default
        threads: Worker threads for the enumeration

    Returns:
        One report over the couplings checked

    Raises:
        ValueError: for core targets outside the theory
    """
    symbol = green_symbol(target)
    kind, parts = symbol
    degrees = tuple(sorted(set(degrees)))
    if kind == 'core' and parts[0] != 2 and parts[0] not in degrees:
        raise ValueError(f"G^{parts[0]} is not a Green function of the theory with valences {list(degrees)}")

    greens = GreenFunctions(loops, degrees, threads)
    series = greens.green(symbol)
    coproduct = _coproduct_for(symbol, degrees)
    report = CheckReport(f"coproduct-green[{format_pi_omega({symbol: 1})}]")

    unit = series.constant if kind == 'core' else Fraction(1)
    rights: List[Tuple[Monomial, Fraction, Coupling]] = [(Monomial.unit(), unit, Coupling.one())]
    rights += [(t.monomial, series.sign * t.weight, t.coupling) for t in series.terms]
    if kind == 'pC' and loops >= 2:
        split = precut_green_series(parts, loops - 1, degrees, threads)
        rights += [(t.monomial, t.weight, t.coupling) for t in split.terms]
        report.details['split_rights'] = len(split.terms)

    left_cache: Dict[Tuple[Coupling, int], GraphSum] = {}
    powers = [power] if power is not None else series.couplings()
    for k in powers:
        lhs = coproduct(series.extract(k))
        rhs = TensorSum()
        for right, coeff, c in rights:
            order = loops - right.loops
            if not coeff or order < 0:
                continue
            if (c, order) not in left_cache:
                exponents = merge_exponents({symbol: 1}, charge_exponents(c))
                left_cache[(c, order)] = greens.product(exponents, order)
            left = extract_coupling(left_cache[(c, order)], k / c)
            if left:
                rhs = rhs + TensorSum.tensor(left, GraphSum({right: coeff}))
        report.record(lhs == rhs, f"k={k}")
    report.details['couplings'] = [str(k) for k in powers]
    return report
