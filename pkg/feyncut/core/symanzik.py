"""Symanzik polynomials, their factorization identities, forest-sum integrands and sector counts."""

import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy as sp
from scipy.special import factorial

from .checks import CheckReport
from .errors import DisconnectedError
from .forests import ForestData, cycles, enumerate_subgraphs, spanning_forests, spanning_trees, spt, spt_bold
from .graph import Graph

logger = logging.getLogger(__name__)

MU_SQUARED = sp.Symbol('mu') ** 2

DivergencePredicate = Callable[[Graph, int], bool]


def edge_symbol(name: str) -> sp.Symbol:
    return sp.Symbol(f"A_{name}")


def edge_symbols(graph: Graph) -> Tuple[sp.Symbol, ...]:
    """A_e for every internal edge, in edge order."""
    return tuple(edge_symbol(n) for n in graph.edges)


def invariant_symbol(labels: Iterable[int]) -> sp.Symbol:
    """s_{ij...}: the square of the momentum flowing in through the given legs."""
    labels = sorted(labels)
    joiner = '' if all(label < 10 for label in labels) else '_'
    return sp.Symbol(f"s_{joiner.join(str(label) for label in labels)}")


@dataclass
class GraphPolynomial:
    """A polynomial in the edge variables of a graph with symbolic coefficients."""

    expr: sp.Expr
    variables: Tuple[sp.Symbol, ...]

    @property
    def poly(self) -> sp.Poly:
        return sp.Poly(self.expr, *self.variables) if self.variables else sp.Poly(self.expr, sp.Dummy())

    def is_zero(self) -> bool:
        return sp.expand(self.expr) == 0

    def degrees(self, subset: Optional[Sequence[sp.Symbol]] = None) -> List[int]:
        """Total degree of every monomial, counted in ``subset`` (default: all variables)."""
        if self.is_zero():
            return []
        chosen = set(subset if subset is not None else self.variables)
        index = [i for i, v in enumerate(self.variables) if v in chosen]
        return [sum(m[i] for i in index) for m in self.poly.monoms()]

    def is_homogeneous(self, degree: Optional[int] = None) -> bool:
        found = set(self.degrees())
        if degree is None:
            return len(found) <= 1
        return found <= {degree}

    def coefficients(self) -> List[sp.Expr]:
        return [c for _, c in self.poly.terms()]

    def to_records(self) -> List[Dict[str, str]]:
        """Canonical sorted monomial list."""
        records = []
        for exps, coeff in sorted(self.poly.terms()):
            monomial = '*'.join(
                str(v) if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            )
            records.append({'monomial': monomial or '1', 'coeff': str(coeff)})
        return records

    def __str__(self) -> str:
        return str(sp.factor(self.expr)) if self.variables else str(self.expr)


def _require_connected(graph: Graph) -> None:
    if not graph.is_connected():
        raise DisconnectedError(f"Symanzik polynomials need a connected graph, got {graph.h0} components")


def _psi_expr(graph: Graph) -> sp.Expr:
    trees = spanning_forests(graph, graph.h0) if graph.n_vertices else []
    if not trees:
        return sp.Integer(1)
    return sp.Add(*[
        sp.Mul(*[edge_symbol(n) for n in graph.edges if n not in tree.edges]) for tree in trees
    ])


def _mass_term(graph: Graph, masses: Mapping[str, str]) -> sp.Expr:
    return sp.Add(*[edge_symbol(n) * sp.Symbol(masses[n]) ** 2 for n in graph.edges if masses.get(n)])


Sides = Tuple[FrozenSet[int], FrozenSet[int]]


def split_sides(forest: ForestData) -> Sides:
    """Leg labels on the two trees that share a component of the graph."""
    graph = forest.graph
    component_of = {v: i for i, comp in enumerate(graph.components) for v in comp}
    trees: Dict[int, List[FrozenSet[int]]] = {}
    for tree in forest.components:
        labels = frozenset(label for v in tree for label in graph.legs_at(v))
        trees.setdefault(component_of[min(tree)], []).append(labels)
    first, second = next(pair for pair in trees.values() if len(pair) == 2)
    return first, second


def _phi_expr(graph: Graph, masses: Mapping[str, str], invariant: Callable[[Sides], sp.Expr]) -> sp.Expr:
    kinematic = []
    for forest in spanning_forests(graph, graph.h0 + 1):
        value = invariant(split_sides(forest))
        if value == 0:
            continue
        kinematic.append(value * sp.Mul(*[edge_symbol(n) for n in graph.edges if n not in forest.edges]))
    return sp.expand(sp.Add(*kinematic) - _mass_term(graph, masses) * _psi_expr(graph))


def crossing_invariant(sides: Sides) -> sp.Expr:
    """
    The invariant of the momentum crossing a 2-forest.

    The smaller side names the symbol; on a tie the side holding the
    smallest label does. A side without legs carries no momentum.
    """
    if not all(sides):
        return sp.Integer(0)
    smaller = min(sides, key=lambda s: (len(s), min(s)))
    return invariant_symbol(smaller)


def renormalization_point(sides: Sides) -> sp.Expr:
    """Every non-zero invariant evaluated at −μ²."""
    return -MU_SQUARED if all(sides) else sp.Integer(0)


def psi(graph: Graph) -> GraphPolynomial:
    """
    First Symanzik polynomial Σ_T Π_{e∉T} A_e.

    Raises:
        DisconnectedError: when the graph is not connected
    """
    _require_connected(graph)
    return GraphPolynomial(sp.expand(_psi_expr(graph)), edge_symbols(graph))


def phi(graph: Graph, masses: Optional[Mapping[str, str]] = None,
        rules: Optional[Mapping[str, Any]] = None) -> GraphPolynomial:
    """
    Second Symanzik polynomial with masses.

    φ = Σ_F s_F Π_{e∉F} A_e − (Σ_e A_e m_e²) ψ over spanning 2-forests F.

    Args:
        graph: A connected graph
        masses: Edge name to mass symbol; defaults to the graph's own masses
        rules: Rewrite rules symbol name -> expression, applied after assembly

    Returns:
        The polynomial in the edge variables

    Raises:
        DisconnectedError: when the graph is not connected
    """
    _require_connected(graph)
    masses = graph.masses if masses is None else masses
    expr = _phi_expr(graph, masses, crossing_invariant)
    if rules:
        expr = sp.expand(expr.subs({sp.Symbol(k): sp.sympify(v) for k, v in rules.items()}))
    return GraphPolynomial(expr, edge_symbols(graph))


def phi_at_renormalization_point(graph: Graph, masses: Optional[Mapping[str, str]] = None) -> GraphPolynomial:
    """φ₀: φ with every kinematic invariant set to −μ²; defined for disconnected graphs too."""
    masses = graph.masses if masses is None else masses
    return GraphPolynomial(_phi_expr(graph, masses, renormalization_point), edge_symbols(graph))


def _lowest_degree(expr: sp.Expr, variables: Tuple[sp.Symbol, ...], subset: Sequence[sp.Symbol]) -> Optional[int]:
    degrees = GraphPolynomial(sp.expand(expr), variables).degrees(subset)
    return min(degrees) if degrees else None


def factorization_check(graph: Graph, subgraph_edges: Iterable[str],
                        masses: Optional[Mapping[str, str]] = None) -> CheckReport:
    """
    ψ(Γ) = ψ(Γ/γ)ψ(γ) + R and φ(Γ) = φ(Γ/γ)ψ(γ) + R̃ with remainders of higher γ-degree.

    Both remainders are computed exactly and must have minimal degree in the
    variables of γ strictly above loops(γ), the degree of ψ(γ).

    Args:
        graph: A connected graph
        subgraph_edges: Internal edges of γ; empty gives a zero remainder
        masses: Edge name to mass symbol, defaults to the graph's masses

    Returns:
        CheckReport with the remainders in its details
    """
    names = frozenset(subgraph_edges)
    report = CheckReport(f"factorization[{','.join(sorted(names)) or 'empty'}]")
    variables = edge_symbols(graph)
    if not names:
        report.record(True)
        report.details.update({'psi_remainder': '0', 'phi_remainder': '0'})
        return report
    gamma = graph.subgraph(names)
    quotient = graph.contract_raw(names)
    masses = graph.masses if masses is None else masses
    inner = [edge_symbol(n) for n in names]
    psi_gamma = _psi_expr(gamma)

    remainder_psi = sp.expand(psi(graph).expr - _psi_expr(quotient) * psi_gamma)
    remainder_phi = sp.expand(
        phi(graph, masses).expr - _phi_expr(quotient, masses, crossing_invariant) * psi_gamma
    )
    for label, remainder in (('psi', remainder_psi), ('phi', remainder_phi)):
        lowest = _lowest_degree(remainder, variables, inner)
        ok = lowest is None or lowest > gamma.loops
        report.record(ok, f"{label} remainder has degree {lowest} <= {gamma.loops}")
    report.details.update({
        'subgraph_loops': gamma.loops,
        'psi_remainder': str(remainder_psi),
        'phi_remainder': str(remainder_phi),
    })
    return report


def check_deletion_contraction(graph: Graph) -> CheckReport:
    """ψ(Γ) = A_e ψ(Γ∖e) + ψ(Γ/e) for every edge that is neither a bridge nor a self-loop."""
    report = CheckReport('deletion-contraction')
    whole = psi(graph).expr
    bridges = graph.bridges
    for name in graph.edges:
        if name in bridges or graph.is_self_loop(name):
            continue
        rhs = edge_symbol(name) * _psi_expr(graph.delete_edges([name])) + _psi_expr(graph.contract_raw([name]))
        report.record(sp.expand(whole - rhs) == 0, name)
    return report


def check_vanishing_on_cycles(graph: Graph) -> CheckReport:
    """ψ vanishes once the variables of any cycle are set to zero."""
    report = CheckReport('psi-vanishes-on-cycles')
    whole = psi(graph).expr
    for cycle in cycles(graph):
        zeroed = whole.subs({edge_symbol(n): 0 for n in cycle})
        report.record(sp.expand(zeroed) == 0, sorted(cycle))
    return report


def check_symanzik(graph: Graph) -> CheckReport:
    """Homogeneity, unit coefficients, deletion-contraction and cycle vanishing of ψ and φ."""
    report = CheckReport('symanzik')
    first = psi(graph)
    report.record(first.is_homogeneous(graph.loops), 'psi is not homogeneous of degree |Γ|')
    report.record(all(c == 1 for c in first.coefficients()), 'psi has a coefficient other than 1')
    massless = phi(graph, masses={})
    report.record(massless.is_homogeneous(graph.loops + 1), 'massless phi is not homogeneous of degree |Γ|+1')
    report.merge(check_deletion_contraction(graph))
    report.merge(check_vanishing_on_cycles(graph))
    return report


# ----------------------------------------------------------------------
# renormalized integrand


def superficial_degree(graph: Graph, dimension: int) -> int:
    """ω = (|Γ|·D − 2e)/2."""
    return (graph.loops * dimension - 2 * graph.n_edges) // 2


def log_divergent(graph: Graph, dimension: int) -> bool:
    return superficial_degree(graph, dimension) >= 0


@dataclass
class IntegrandTerm:
    """One forest of the renormalization sum."""

    forest: Tuple[FrozenSet[str], ...]
    sign: int
    numerator: sp.Expr
    denominator: sp.Expr
    psi_quotient: sp.Expr
    psi_forest: sp.Expr

    @property
    def edges(self) -> FrozenSet[str]:
        return frozenset().union(*self.forest) if self.forest else frozenset()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'forest': [sorted(g) for g in self.forest],
            'sign': self.sign,
            'log_numerator': str(self.numerator),
            'log_denominator': str(self.denominator),
            'psi_quotient': str(sp.factor(self.psi_quotient)),
            'psi_forest': str(sp.factor(self.psi_forest)),
        }


@dataclass
class IntegrandExpression:
    """Σ_F (−1)^{|F|} ln(N_F/D_F) / (ψ(Γ/F)ψ(F))^{D/2} as structured data."""

    graph: Graph
    dimension: int
    terms: List[IntegrandTerm] = field(default_factory=list)
    warning: Optional[str] = None

    def to_sympy(self) -> sp.Expr:
        half = sp.Rational(self.dimension, 2)
        return sp.Add(*[
            t.sign * sp.log(t.numerator / t.denominator) / (t.psi_quotient ** half * t.psi_forest ** half)
            for t in self.terms
        ])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dimension': self.dimension,
            'terms': [t.to_dict() for t in self.terms],
            'warning': self.warning,
        }


def renormalization_forests(graph: Graph, dimension: int,
                            divergent: DivergencePredicate = log_divergent) -> List[Tuple[FrozenSet[str], ...]]:
    """
    Sets of pairwise vertex-disjoint divergent proper subgraphs, ∅ first.

    Candidates are connected bridgeless subgraphs other than Γ itself that
    pass ``divergent``.
    """
    whole = frozenset(graph.edges)
    candidates = []
    for edges in enumerate_subgraphs(graph):
        if edges == whole:
            continue
        sub = graph.subgraph(edges)
        if sub.is_connected() and divergent(sub, dimension):
            vertices = frozenset(v for n in edges for v in graph.endpoints[n])
            candidates.append((edges, vertices))
    forests: List[Tuple[FrozenSet[str], ...]] = [()]
    for size in range(1, len(candidates) + 1):
        for chosen in combinations(candidates, size):
            touched = [v for _, vertices in chosen for v in vertices]
            if len(touched) == len(set(touched)):
                forests.append(tuple(edges for edges, _ in chosen))
    return forests


def renorm_integrand(graph: Graph, dimension: int, masses: Optional[Mapping[str, str]] = None,
                     divergent: DivergencePredicate = log_divergent) -> IntegrandExpression:
    """
    The renormalized parametric integrand as a signed forest sum.

    For every forest F the logarithm's argument is
    (φ(Γ/F)ψ(F) + φ₀(F)ψ(Γ/F)) / (φ₀(Γ/F)ψ(F) + φ₀(F)ψ(Γ/F)),
    with φ₀ evaluated at the renormalization point.

    Args:
        graph: A connected graph
        dimension: Even spacetime dimension D
        masses: Edge name to mass symbol, defaults to the graph's masses
        divergent: Which subgraphs take part in the forests

    Returns:
        IntegrandExpression; its warning is set when Γ is not logarithmically divergent

    Raises:
        ValueError: for a non-positive or odd dimension
    """
    if dimension <= 0 or dimension % 2:
        raise ValueError(f"Dimension must be a positive even integer, got {dimension}")
    _require_connected(graph)
    masses = graph.masses if masses is None else masses
    expression = IntegrandExpression(graph, dimension)
    omega = superficial_degree(graph, dimension)
    if omega != 0:
        expression.warning = (
            f"Graph has superficial degree {omega} in D={dimension}; "
            "only the logarithmic subtraction is built"
        )
        logger.warning(expression.warning)

    for forest in renormalization_forests(graph, dimension, divergent):
        edges = frozenset().union(*forest) if forest else frozenset()
        if edges:
            sub = graph.subgraph(edges)
            quotient = graph.contract_raw(edges)
            psi_f = _psi_expr(sub)
            phi0_f = _phi_expr(sub, masses, renormalization_point)
        else:
            quotient = graph
            psi_f, phi0_f = sp.Integer(1), sp.Integer(0)
        psi_q = _psi_expr(quotient)
        numerator = sp.expand(_phi_expr(quotient, masses, crossing_invariant) * psi_f + phi0_f * psi_q)
        denominator = sp.expand(_phi_expr(quotient, masses, renormalization_point) * psi_f + phi0_f * psi_q)
        expression.terms.append(
            IntegrandTerm(forest, (-1) ** len(forest), numerator, denominator, psi_q, psi_f)
        )
    logger.info(f"Renormalized integrand with {len(expression.terms)} forest terms")
    return expression


# ----------------------------------------------------------------------
# sectors


def count_renorm_free_sectors(graph: Graph) -> int:
    """spt(Γ)·|Γ|!·(e − |Γ|)!: sectors whose leading edges form a spanning tree."""
    return spt_bold(graph) * int(factorial(graph.n_edges - graph.loops, exact=True))


def sector_oracle(graph: Graph) -> int:
    """Count edge orders in which the edges of some spanning tree precede all others."""
    trees = {tree.edges for tree in spanning_trees(graph)}
    size = graph.n_vertices - 1
    return sum(1 for order in permutations(graph.edges) if frozenset(order[:size]) in trees)


def sector_report(graph: Graph, oracle: bool = False) -> Dict[str, Any]:
    """Sector counts for the CLI; the oracle is opt-in since it walks all e! orders."""
    total = int(factorial(graph.n_edges, exact=True))
    free = count_renorm_free_sectors(graph)
    report = {
        'spt': spt(graph),
        'spt_bold': spt_bold(graph),
        'sectors': total,
        'renorm_free': free,
        'needing_blowup': total - free,
    }
    if oracle:
        report['oracle'] = sector_oracle(graph)
    return report
