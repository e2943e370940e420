"""Cointeracting bialgebras of fundamental cycles, Galois conjugates and the cut pairing."""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .algebra import Monomial, TensorSum
from .checks import CheckReport
from .coproducts import gt_terms
from .cutgraph import GraphForestPair, PreCutGraph
from .errors import ContextMismatchError, ForestNotInTreeError, GraphError
from .forests import ForestData, spanning_forests
from .graph import Graph

logger = logging.getLogger(__name__)

EdgeSet = FrozenSet[str]


def _edge_order(name: str) -> Tuple:
    match = re.match(r'^(\D*)(\d*)$', name)
    if not match:
        return (name, 0)
    return (match.group(1), int(match.group(2) or 0))


def format_edges(edges: Iterable[str]) -> str:
    """e2e3 style, ∅ for the empty set."""
    names = sorted(edges, key=_edge_order)
    return ''.join(names) if names else '∅'


def _subsets(items: Iterable[str]) -> List[EdgeSet]:
    items = sorted(items, key=_edge_order)
    return [frozenset(c) for r in range(len(items) + 1) for c in combinations(items, r)]


@dataclass(frozen=True)
class Context:
    """A tree E_T, the loop edges E_L with their tree paths f, and E_m ⊆ E_L.

    Edges in E_m may not become tadpoles under ρ.
    """

    tree_edges: EdgeSet
    paths: Tuple[Tuple[str, EdgeSet], ...]
    massless: EdgeSet = frozenset()

    def __post_init__(self):
        for edge, path in self.paths:
            if not path <= self.tree_edges:
                raise GraphError(f"Path of {edge} leaves the tree: {sorted(path - self.tree_edges)}")
        if not self.massless <= self.loop_edges:
            raise GraphError(f"Massless edges {sorted(self.massless - self.loop_edges)} are not loop edges")

    @classmethod
    def of(cls, tree_edges: Iterable[str], paths: Mapping[str, Iterable[str]],
           massless: Iterable[str] = ()) -> 'Context':
        ordered = tuple(
            (e, frozenset(paths[e])) for e in sorted(paths, key=_edge_order)
        )
        return cls(frozenset(tree_edges), ordered, frozenset(massless))

    @classmethod
    def from_tree(cls, graph: Graph, tree: Iterable[str],
                  massless: Optional[Iterable[str]] = None) -> 'Context':
        """
        Context of a spanning tree: f(e) is the tree path between the ends of e.

        Args:
            graph: Connected graph
            tree: Edge names of a spanning tree
            massless: Loop edges forbidden as tadpoles; by default every loop
                edge without a mass

        Returns:
            The context
        """
        data = ForestData(graph, frozenset(tree))
        if not data.is_spanning_tree():
            raise ForestNotInTreeError(f"Edges {sorted(data.edges)} are not a spanning tree")
        paths = {e: data.tree_path(e) for e in data.non_forest_edges}
        if massless is None:
            massless = [e for e in paths if not graph.masses.get(e)]
        return cls.of(data.edges, paths, massless)

    @classmethod
    def random(cls, rng: np.random.Generator, max_tree: int = 4, max_loop: int = 3) -> 'Context':
        """A random abstract context; f and E_m are random subsets."""
        n_tree = int(rng.integers(0, max_tree + 1))
        n_loop = int(rng.integers(1, max_loop + 1))
        tree = [f"t{i + 1}" for i in range(n_tree)]
        paths = {
            f"l{j + 1}": [t for t, keep in zip(tree, rng.random(n_tree) < 0.5) if keep]
            for j in range(n_loop)
        }
        massless = [e for e, keep in zip(paths, rng.random(n_loop) < 0.5) if keep]
        return cls.of(tree, paths, massless)

    @cached_property
    def f(self) -> Dict[str, EdgeSet]:
        return dict(self.paths)

    @property
    def loop_edges(self) -> EdgeSet:
        return frozenset(e for e, _ in self.paths)

    def f_of(self, loops: Iterable[str]) -> EdgeSet:
        """f(B), the union of the tree paths."""
        return frozenset().union(*(self.f[e] for e in loops))

    def __str__(self) -> str:
        rows = ', '.join(f"{e}:{format_edges(p)}" for e, p in self.paths)
        return f"Context(T={format_edges(self.tree_edges)}, {rows}, m={format_edges(self.massless)})"


@dataclass(frozen=True)
class IncidenceMonomial:
    """The symbol B^{[A₁,A₂]} with A₁ ⊆ A₂ ⊆ f(B); ∅^{[∅,∅]} is the unit."""

    context: Optional[Context] = field(compare=False, repr=False)
    loops: EdgeSet = frozenset()
    lower: EdgeSet = frozenset()
    upper: EdgeSet = frozenset()

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise GraphError(
                f"Interval [{format_edges(self.lower)}, {format_edges(self.upper)}] is empty"
            )
        if self.loops and self.context is None:
            raise ContextMismatchError("A non-unit monomial needs a context")
        if self.context is not None:
            unknown = self.loops - self.context.loop_edges
            if unknown:
                raise GraphError(f"Edges {sorted(unknown)} are not loop edges of the context")
            if not self.upper <= self.context.f_of(self.loops):
                raise GraphError(
                    f"Interval end {format_edges(self.upper)} is not inside f({format_edges(self.loops)})"
                )

    @classmethod
    def unit(cls) -> 'IncidenceMonomial':
        return cls(None)

    @classmethod
    def of(cls, context: Context, loops: Iterable[str], lower: Iterable[str] = (),
           upper: Iterable[str] = ()) -> 'IncidenceMonomial':
        return cls(context, frozenset(loops), frozenset(lower), frozenset(upper))

    def is_unit(self) -> bool:
        return not self.loops

    def generators(self) -> List['IncidenceMonomial']:
        """The factors x_{e,[A₁∩f(e), A₂∩f(e)]}, one per loop edge."""
        result = []
        for e in sorted(self.loops, key=_edge_order):
            path = self.context.f[e]
            result.append(IncidenceMonomial(self.context, frozenset([e]), self.lower & path, self.upper & path))
        return result

    def in_a_p(self) -> bool:
        return not self.lower

    def _tadpole_free(self, end: EdgeSet) -> bool:
        if self.is_unit():
            return True
        outside = self.context.f_of(self.loops) - end
        return not any(self.context.f[e] <= outside for e in self.loops & self.context.massless)

    def in_a_m(self) -> bool:
        """No forbidden tadpole in the graph of the monomial."""
        return self._tadpole_free(self.upper)

    def in_a_e(self) -> bool:
        """No forest contraction can produce a forbidden tadpole."""
        return self._tadpole_free(self.lower)

    def __str__(self) -> str:
        if self.is_unit():
            return '1'
        return '*'.join(
            f"x_{{{next(iter(g.loops))},[{format_edges(g.lower)},{format_edges(g.upper)}]}}"
            for g in self.generators()
        )


def m_product(u: IncidenceMonomial, v: IncidenceMonomial) -> Optional[IncidenceMonomial]:
    """
    The product m; None stands for zero.

    Raises:
        ContextMismatchError: if both factors are non-units over different contexts
    """
    if u.is_unit():
        return v
    if v.is_unit():
        return u
    if u.context != v.context:
        raise ContextMismatchError("Monomials live over different contexts")
    if u.loops & v.loops:
        return None
    shared = u.context.f_of(u.loops) & u.context.f_of(v.loops)
    if (u.lower & shared) != (v.lower & shared) or (u.upper & shared) != (v.upper & shared):
        return None
    return IncidenceMonomial(u.context, u.loops | v.loops, u.lower | v.lower, u.upper | v.upper)


def from_generators(generators: Sequence[IncidenceMonomial]) -> Optional[IncidenceMonomial]:
    """Multiply generators back together; None when the product vanishes."""
    result: Optional[IncidenceMonomial] = IncidenceMonomial.unit()
    for g in generators:
        result = m_product(result, g)
        if result is None:
            return None
    return result


class IncidenceTensor(TensorSum):
    """Tensor words of incidence monomials; vanishing products drop the word."""

    @staticmethod
    def _leg_sort_key(leg: Any) -> Any:
        return (len(leg.loops), sorted(leg.loops), sorted(leg.lower), sorted(leg.upper))

    @staticmethod
    def _mul_leg(a: IncidenceMonomial, b: IncidenceMonomial) -> Optional[IncidenceMonomial]:
        return m_product(a, b)

    @staticmethod
    def _unit_leg() -> IncidenceMonomial:
        return IncidenceMonomial.unit()

    @classmethod
    def single(cls, u: IncidenceMonomial) -> 'IncidenceTensor':
        return cls({(u,): 1})


def counit(u: IncidenceMonomial) -> Fraction:
    """ε(𝕀) = 1 and ε(B^{[A₁,A₂]}) = 0 for B ≠ ∅."""
    return Fraction(1 if u.is_unit() else 0)


def delta_c(u: IncidenceMonomial) -> IncidenceTensor:
    """Δ_c: split B into B₁ with f(B₁) ∩ A₁ = ∅ and its complement."""
    result = IncidenceTensor()
    if u.is_unit():
        result.add((u, u), 1)
        return result
    ctx = u.context
    for chosen in _subsets(u.loops):
        path = ctx.f_of(chosen)
        if path & u.lower:
            continue
        rest = u.loops - chosen
        rest_path = ctx.f_of(rest)
        left = IncidenceMonomial(ctx, chosen, frozenset(), u.upper & path)
        right = IncidenceMonomial(ctx, rest, u.lower & rest_path, u.upper & rest_path)
        result.add((left, right), 1)
    return result


def rho(u: IncidenceMonomial) -> IncidenceTensor:
    """ρ: split the interval at every A that leaves no forbidden tadpole."""
    result = IncidenceTensor()
    if u.is_unit():
        result.add((u, u), 1)
        return result
    ctx = u.context
    full = ctx.f_of(u.loops)
    forbidden = [ctx.f[e] for e in u.loops & ctx.massless]
    for extra in _subsets(u.upper - u.lower):
        middle = u.lower | extra
        if any(path <= full - middle for path in forbidden):
            continue
        result.add(
            (
                IncidenceMonomial(ctx, u.loops, u.lower, middle),
                IncidenceMonomial(ctx, u.loops, middle, u.upper),
            ),
            1,
        )
    return result


def all_monomials(context: Context) -> List[IncidenceMonomial]:
    """Every B^{[A₁,A₂]} of a (small) context, the unit first."""
    result = []
    for loops in _subsets(context.loop_edges):
        for upper in _subsets(context.f_of(loops)):
            for lower in _subsets(upper):
                result.append(IncidenceMonomial(context, loops, lower, upper))
    return result


def sample_monomials(context: Context, rng: np.random.Generator, size: int = 6) -> List[IncidenceMonomial]:
    everything = all_monomials(context)
    if len(everything) <= size:
        return everything
    picks = rng.choice(len(everything), size=size, replace=False)
    return [everything[i] for i in sorted(picks)]


# ----------------------------------------------------------------------
# graph-forest pairs and Galois conjugates


def w_in(context: Context, pair: GraphForestPair) -> IncidenceMonomial:
    """
    The monomial of a pair inside a given context.

    B is the set of loop edges of the pair's tree, the lower end the tree
    edges off the forest and the upper end all of f(B).
    """
    if pair.tree is None:
        raise ForestNotInTreeError("The pair carries no spanning tree")
    loops = frozenset(pair.graph.edges) - pair.tree
    if not loops:
        return IncidenceMonomial.unit()
    path = context.f_of(loops)
    return IncidenceMonomial(context, loops, (pair.tree - pair.forest) & path, path)


def w_of(pair: GraphForestPair) -> IncidenceMonomial:
    """w((Γ,F)) = E_L^{[E_T∖E_F, E_T]} over the context of the pair's own tree."""
    if pair.tree is None:
        raise ForestNotInTreeError("w needs the spanning tree containing the forest")
    return w_in(Context.from_tree(pair.graph, pair.tree), pair)


def check_lem_cGT(pair: GraphForestPair) -> CheckReport:
    """Δ_c ∘ w = (w ⊗ w) ∘ Δ_GT on one pair, with both sides in the pair's context."""
    report = CheckReport("w intertwines Δ_c and Δ_GT")
    if pair.tree is None:
        raise ForestNotInTreeError("The pair carries no spanning tree")
    context = Context.from_tree(pair.graph, pair.tree)
    lhs = delta_c(w_in(context, pair))
    rhs = IncidenceTensor()
    for term in gt_terms(pair):
        left = w_in(context, term.left) if term.left is not None else IncidenceMonomial.unit()
        rhs.add((left, w_in(context, term.right)), 1)
    report.record(lhs == rhs, pair)
    report.details['terms'] = len(rhs)
    return report


@dataclass(frozen=True)
class GaloisConjugate:
    """(Γ/p, T/p ∖ q) for disjoint p, q ⊆ E_T."""

    contracted: EdgeSet
    cut: EdgeSet
    pair: GraphForestPair

    @property
    def kind(self) -> str:
        """'m' for q = ∅, 'dr' otherwise."""
        return 'm' if not self.cut else 'dr'

    def label(self, context: Context) -> IncidenceMonomial:
        """x_{E_L,[q, E_T∖p]} in the original context."""
        loops = context.loop_edges
        path = context.f_of(loops)
        if not loops:
            return IncidenceMonomial.unit()
        return IncidenceMonomial(context, loops, self.cut & path, (context.tree_edges - self.contracted) & path)

    def __str__(self) -> str:
        return f"(Γ/{format_edges(self.contracted)}, T/{format_edges(self.contracted)}∖{format_edges(self.cut)})"


def galois_conjugates(graph: Graph, tree: Iterable[str]) -> List[GaloisConjugate]:
    """
    All Galois conjugates of (Γ, T), deduplicated by labelled canonical form.

    Returns:
        Conjugates sorted by (|p|, |q|); (Γ, T) itself comes first
    """
    tree = frozenset(tree)
    if not ForestData(graph, tree).is_spanning_tree():
        raise ForestNotInTreeError(f"Edges {sorted(tree)} are not a spanning tree")
    seen = set()
    result = []
    ordered = sorted(tree, key=_edge_order)
    choices = list(product((0, 1, 2), repeat=len(ordered)))
    choices.sort(key=lambda c: (c.count(1), c.count(2), c))
    for choice in choices:
        p = frozenset(e for e, c in zip(ordered, choice) if c == 1)
        q = frozenset(e for e, c in zip(ordered, choice) if c == 2)
        remaining = tree - p
        pair = GraphForestPair(graph.contract_raw(p), remaining - q, remaining)
        key = pair.key(labelled=True)
        if key in seen:
            continue
        seen.add(key)
        result.append(GaloisConjugate(p, q, pair))
    logger.info(
        f"{len(result)} Galois conjugates "
        f"({sum(c.kind == 'm' for c in result)} m-type, {sum(c.kind == 'dr' for c in result)} dr-type)"
    )
    return result


def galois_pairing(graph: Graph, massless: Iterable[str] = ()) -> TensorSum:
    """
    The combinatorial pairing Σ_p Σ_{F∼p} (Γ/E_F) ⊗ Γ̃_F.

    Forests with the same cut give one term. Terms whose left graph has a
    self-loop on a massless edge vanish, as tadpoles do in kinematic schemes.

    Args:
        graph: Connected bridgeless graph
        massless: Edges whose tadpoles vanish; none by default, so every
            edge counts as massive

    Returns:
        Tensor of (contracted graph, Cutkosky graph) monomials, coefficient 1 each
    """
    massless = frozenset(massless)
    words = set()
    for k in range(1, graph.n_vertices + 1):
        for forest in spanning_forests(graph, k):
            contracted = graph.contract_raw(forest.edges)
            if any(contracted.is_self_loop(e) for e in massless if e in contracted.edges):
                continue
            cut = PreCutGraph(graph, forest.crossing_edges)
            if not cut.is_cutkosky():
                continue
            words.add((Monomial.of(contracted, labelled=True), Monomial.of(cut, labelled=True)))
    return TensorSum({word: 1 for word in words})


def generator_table(graph: Graph, tree: Iterable[str],
                    massless: Optional[Iterable[str]] = None) -> List[Dict[str, Any]]:
    """
    Galois conjugates with their generator labels, Δ_c rows and ρ rows.

    Returns:
        One {gen, conjugate, type, delta_c, rho} record per conjugate
    """
    tree = frozenset(tree)
    context = Context.from_tree(graph, tree, massless)
    rows = []
    for conjugate in galois_conjugates(graph, tree):
        label = conjugate.label(context)
        rows.append({
            'gen': str(label),
            'conjugate': str(conjugate),
            'type': conjugate.kind,
            'delta_c': _terms(delta_c(label)),
            'rho': _terms(rho(label)),
        })
    return rows


def _terms(tensor: IncidenceTensor) -> List[str]:
    return [
        ('' if c == 1 else f"{c} ") + ' ⊗ '.join(str(leg) for leg in word)
        for word, c in tensor.items()
    ]


# ----------------------------------------------------------------------
# identity checks


def check_cointeraction(context: Context, sample: Sequence[IncidenceMonomial]) -> List[CheckReport]:
    """
    The four cointeraction identities plus coassociativity, cocommutativity,
    the generator presentation and the target subspaces of rho.

    Args:
        context: Context of the sample
        sample: Monomials to evaluate on; pairs of them test multiplicativity

    Returns:
        One report per identity
    """
    unit = IncidenceMonomial.unit()
    unit_report = CheckReport("rho(1) = 1 ⊗ 1")
    unit_report.record(rho(unit) == IncidenceTensor({(unit, unit): 1}), unit)

    interaction = CheckReport("m_{1,3,24}(rho ⊗ rho)Δ_c = (Δ_c ⊗ id)rho")
    multiplicative = CheckReport("rho(w1 w2) = rho(w1) rho(w2)")
    counit_report = CheckReport("(ε ⊗ id)rho = ε·1")
    coassoc_c = CheckReport("Δ_c coassociative")
    coassoc_rho = CheckReport("rho coassociative")
    cocommutative = CheckReport("Δ_c cocommutative on A_p")
    presentation = CheckReport("u = m(generators(u))")
    split_legs = CheckReport("rho(u) in A_m ⊗ A_e")

    for u in sample:
        once = delta_c(u)
        lhs = once.apply_leg(0, rho).apply_leg(2, rho).multiply_out(((0,), (2,), (1, 3)))
        rhs = rho(u).apply_leg(0, delta_c)
        interaction.record(lhs == rhs, u)

        expected = IncidenceTensor.single(unit).scale(counit(u))
        counit_report.record(rho(u).apply_counit(0, counit) == expected, u)

        coassoc_c.record(once.apply_leg(0, delta_c) == once.apply_leg(1, delta_c), u)
        split = rho(u)
        coassoc_rho.record(split.apply_leg(0, rho) == split.apply_leg(1, rho), u)
        if u.in_a_p():
            swapped = IncidenceTensor({(b, a): c for (a, b), c in once.terms.items()})
            cocommutative.record(once == swapped, u)
        presentation.record(from_generators(u.generators()) == u, u)
        split_legs.record(all(a.in_a_m() and b.in_a_e() for a, b in split.terms), u)

    for u, v in combinations(sample, 2):
        product_uv = m_product(u, v)
        lhs = rho(product_uv) if product_uv is not None else IncidenceTensor()
        multiplicative.record(lhs == rho(u) * rho(v), (str(u), str(v)))

    reports = [unit_report, interaction, multiplicative, counit_report, coassoc_c, coassoc_rho, cocommutative,
               presentation, split_legs]
    logger.debug(f"Cointeraction checks on {context}: {[r.passed for r in reports]}")
    return reports


def check_random_contexts(count: int, seed: int = 0, max_tree: int = 4, max_loop: int = 3,
                          sample_size: int = 6) -> List[CheckReport]:
    """Run check_cointeraction on seeded random contexts and merge the reports."""
    rng = np.random.default_rng(seed)
    merged: Dict[str, CheckReport] = {}
    for _ in range(count):
        context = Context.random(rng, max_tree, max_loop)
        for report in check_cointeraction(context, sample_monomials(context, rng, sample_size)):
            merged.setdefault(report.name, CheckReport(report.name)).merge(report)
    logger.info(f"Checked cointeraction on {count} random contexts (seed {seed})")
    return list(merged.values())
