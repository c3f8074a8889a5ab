"""Exact fairness measures and welfare for a single allocation.

Each measure is the least additive slack under which the allocation satisfies
the corresponding notion: an allocation is eps-proportional iff
``eps >= proportionality_deficit``, eps-envy-free iff ``eps >= max(0, max_envy)``
and eps-equitable iff ``eps >= equitability_spread``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from linefair.core import Allocation, ContiguousAllocation, Instance, bundle_utility, check_allocation

UTILITARIAN = "utilitarian"
EGALITARIAN = "egalitarian"
WELFARE_KINDS = (UTILITARIAN, EGALITARIAN)


def cross_values(instance: Instance, allocation: Allocation) -> list[list[Fraction]]:
    """``V[i][j]`` is agent i's utility for agent j's bundle."""
    check_allocation(instance, allocation)
    n = instance.n
    if isinstance(allocation, ContiguousAllocation):
        blocks = allocation.blocks
        return [[instance.interval_utility(i, *blocks[j]) for j in range(n)] for i in range(n)]
    bundles = [allocation.bundle(j) for j in range(n)]
    return [[bundle_utility(instance, i, bundles[j]) for j in range(n)] for i in range(n)]


def own_values(instance: Instance, allocation: Allocation) -> list[Fraction]:
    check_allocation(instance, allocation)
    if isinstance(allocation, ContiguousAllocation):
        return [instance.interval_utility(i, *allocation.blocks[i]) for i in range(instance.n)]
    return [bundle_utility(instance, i, allocation.bundle(i)) for i in range(instance.n)]


def proportionality_deficit(instance: Instance, allocation: Allocation) -> Fraction:
    own = own_values(instance, allocation)
    n = instance.n
    return max([Fraction(0)] + [instance.total(i) / n - own[i] for i in range(n)])


def max_envy(instance: Instance, allocation: Allocation) -> Fraction:
    """Largest ``u_i(M_j) - u_i(M_i)`` over ordered pairs; may be negative, 0 for one agent."""
    if instance.n == 1:
        check_allocation(instance, allocation)
        return Fraction(0)
    V = cross_values(instance, allocation)
    n = instance.n
    return max(V[i][j] - V[i][i] for i in range(n) for j in range(n) if i != j)


def agent_envy(instance: Instance, allocation: Allocation) -> list[Fraction]:
    """Per-agent envy toward the most envied other agent (0 for a single agent)."""
    V = cross_values(instance, allocation)
    n = instance.n
    if n == 1:
        return [Fraction(0)]
    return [max(V[i][j] - V[i][i] for j in range(n) if j != i) for i in range(n)]


def equitability_spread(instance: Instance, allocation: Allocation) -> Fraction:
    own = own_values(instance, allocation)
    return max(own) - min(own)


def welfare(instance: Instance, allocation: Allocation, kind: str = UTILITARIAN) -> Fraction:
    own = own_values(instance, allocation)
    if kind == UTILITARIAN:
        return sum(own, Fraction(0))
    if kind == EGALITARIAN:
        return min(own)
    raise ValueError(f"unknown welfare kind {kind!r}; expected one of {WELFARE_KINDS}")


@dataclass(frozen=True)
class FairnessReport:
    prop_deficit: Fraction
    max_envy: Fraction
    equit_spread: Fraction
    utilitarian: Fraction
    egalitarian: Fraction

    def to_json(self) -> dict:
        return {
            "prop_deficit": str(self.prop_deficit),
            "max_envy": str(self.max_envy),
            "equit_spread": str(self.equit_spread),
            "utilitarian": str(self.utilitarian),
            "egalitarian": str(self.egalitarian),
        }

    def is_proportional(self, eps=0) -> bool:
        return self.prop_deficit <= eps

    def is_envy_free(self, eps=0) -> bool:
        return self.max_envy <= eps

    def is_equitable(self, eps=0) -> bool:
        return self.equit_spread <= eps


def report(instance: Instance, allocation: Allocation) -> FairnessReport:
    V = cross_values(instance, allocation)
    n = instance.n
    own = [V[i][i] for i in range(n)]
    deficit = max([Fraction(0)] + [instance.total(i) / n - own[i] for i in range(n)])
    if n == 1:
        envy = Fraction(0)
    else:
        envy = max(V[i][j] - own[i] for i in range(n) for j in range(n) if i != j)
    return FairnessReport(
        prop_deficit=deficit,
        max_envy=envy,
        equit_spread=max(own) - min(own),
        utilitarian=sum(own, Fraction(0)),
        egalitarian=min(own),
    )
