"""Identity checks returning reports instead of raising."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

from .algebra import GraphSum, Monomial, TensorSum, one_leg
from .coproducts import Antipode, Coproduct, CoreCoproduct, coact_bar_core_on, reduced_iterate
from .forests import cycles, spt, spt_bold
from .graph import Graph

logger = logging.getLogger(__name__)


@dataclass
class CheckReport:
    """Outcome of an identity check over a sample."""

    name: str
    passed: bool = True
    checked: int = 0
    counterexample: Optional[Any] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def record(self, ok: bool, example: Any = None) -> None:
        self.checked += 1
        if not ok and self.passed:
            self.passed = False
            self.counterexample = example
            logger.warning(f"Check {self.name} failed on {example}")

    def merge(self, other: 'CheckReport') -> None:
        self.checked += other.checked
        if not other.passed and self.passed:
            self.passed = False
            self.counterexample = other.counterexample

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'passed': self.passed,
            'checked': self.checked,
            'counterexample': None if self.counterexample is None else str(self.counterexample),
            **self.details,
        }


def check_coassociative(coproduct: Coproduct, sample: Iterable[Any]) -> CheckReport:
    """(Δ⊗id)Δ = (id⊗Δ)Δ on every sample element."""
    report = CheckReport(f"coassociativity[{coproduct.name}]")
    for x in sample:
        once = coproduct(x)
        report.record(once.apply_leg(0, coproduct) == once.apply_leg(1, coproduct), x)
    return report


def check_counit(coproduct: Coproduct, sample: Iterable[Any]) -> CheckReport:
    """(ε⊗id)Δ = id = (id⊗ε)Δ."""
    report = CheckReport(f"counit[{coproduct.name}]")
    for x in sample:
        once = coproduct(x)
        expected = TensorSum({(m,): c for m, c in one_leg(x).terms.items()})
        left = once.apply_counit(0, coproduct.counit)
        right = once.apply_counit(1, coproduct.counit)
        report.record(left == expected and right == expected, x)
    return report


def check_antipode(coproduct: Coproduct, sample: Iterable[Any]) -> CheckReport:
    """m(S⊗id)Δ = ε·𝕀 = m(id⊗S)Δ."""
    report = CheckReport(f"antipode[{coproduct.name}]")
    antipode = Antipode(coproduct)
    for x in sample:
        x = one_leg(x)
        once = coproduct(x)
        expected = GraphSum.unit().scale(x.counit())
        left = _multiply(once.apply_leg(0, antipode.on_monomial))
        right = _multiply(once.apply_leg(1, antipode.on_monomial))
        report.record(left == expected and right == expected, x)
    return report


def _multiply(tensor: TensorSum) -> GraphSum:
    result = GraphSum()
    for word, coeff in tensor.terms.items():
        product = Monomial.unit()
        for leg in word:
            product = product * leg
        result.add(product, coeff)
    return result


def check_multiplicative(coproduct: Coproduct, pairs: Iterable[Sequence[Any]]) -> CheckReport:
    """Δ(xy) = Δ(x)Δ(y)."""
    report = CheckReport(f"multiplicativity[{coproduct.name}]")
    for x, y in pairs:
        product = one_leg(x) * one_leg(y)
        report.record(coproduct(product) == coproduct(x) * coproduct(y), (x, y))
    return report


def check_grading(coproduct: Coproduct, sample: Iterable[Any], norm: bool = False) -> CheckReport:
    """|left| + |right| = |x| on every term; with norm also ‖left‖ + ‖right‖ = ‖x‖."""
    report = CheckReport(f"grading[{coproduct.name}]")
    for x in sample:
        for monomial in one_leg(x).terms:
            ok = True
            for left, right in coproduct(GraphSum({monomial: 1})).terms:
                ok = ok and left.loops + right.loops == monomial.loops
                if norm:
                    ok = ok and left.norm + right.norm == monomial.norm
            report.record(ok, monomial)
    return report


def check_comodule(sample: Iterable[Any], coproduct: Optional[Coproduct] = None,
                   coaction: Optional[Callable[[Any], TensorSum]] = None) -> CheckReport:
    """
    Co-module law (Δ⊗id)ρ = (id⊗ρ)ρ and counit law (ε⊗id)ρ = id.

    Args:
        sample: Inputs for the coaction
        coproduct: Coproduct on the left factor, Δ_core by default
        coaction: The coaction ρ, ∆̄_core by default

    Returns:
        Report over the sample
    """
    coproduct = coproduct or CoreCoproduct()
    coaction = coaction or coact_bar_core_on
    report = CheckReport(f"comodule[{coproduct.name}]")
    for x in sample:
        once = coaction(x)
        ok = once.apply_leg(0, coproduct) == once.apply_leg(1, coaction)
        expected = TensorSum({(m,): c for m, c in one_leg(x).terms.items()})
        ok = ok and once.apply_counit(0, coproduct.counit) == expected
        report.record(ok, x)
    return report


def check_spanning_tree_counting(graphs: Iterable[Graph]) -> CheckReport:
    """
    spt(Γ)·|Γ| = Σ_C |C|·spt(Γ/C) and spt(Γ)·|Γ|! = m spt^{⊗|Γ|} Δ̃^{|Γ|−1}(Γ).

    The iterated coproduct keeps 2-valent vertices in its co-graphs, so the
    spanning trees of every co-graph are those of the plain contraction.
    """
    report = CheckReport("spanning-tree counting")
    core = CoreCoproduct(elide=False)
    for graph in graphs:
        total = sum(len(c) * spt(graph.contract_raw(c)) for c in cycles(graph))
        ok = spt(graph) * graph.loops == total
        if graph.loops >= 1:
            tensor = reduced_iterate(graph, graph.loops, core)
            value = tensor.contract_legs(lambda leg: Fraction(_spt_monomial(leg)))
            ok = ok and value == spt_bold(graph)
        report.record(ok, graph)
    return report


def _spt_monomial(monomial: Monomial) -> int:
    value = 1
    for factor in monomial.factors:
        value *= spt(factor)
    return value


def run_hopf_checks(coproduct: Coproduct, sample: List[Any], antipode: bool = True,
                    norm: bool = False) -> List[CheckReport]:
    """The axiom checks for one coproduct on one sample."""
    reports = [
        check_coassociative(coproduct, sample),
        check_counit(coproduct, sample),
        check_grading(coproduct, sample, norm=norm),
        check_multiplicative(coproduct, list(zip(sample, sample[1:]))),
    ]
    if antipode:
        reports.append(check_antipode(coproduct, sample))
    logger.info(
        f"Hopf checks for {coproduct.name}: "
        f"{sum(r.passed for r in reports)}/{len(reports)} passed"
    )
    return reports
