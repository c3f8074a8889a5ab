"""Exhaustive exact search over contiguous and general allocations.

All searches are deterministic: ties between equally good allocations are
broken toward the lexicographically least item-to-owner sequence, so the
result does not depend on enumeration order.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from linefair.core import ContiguousAllocation, GeneralAllocation, Instance, check_ordering
from linefair.errors import ArgumentError, CapacityError
from linefair.fairness import EGALITARIAN, UTILITARIAN

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "LINEFAIR_ORACLE_BUDGET"

CONTIGUOUS = "contiguous"
GENERAL = "general"


class Notion(str, Enum):
    PROPORTIONAL = "proportional"
    ENVY_FREE = "envy-free"
    EQUITABLE = "equitable"

    @classmethod
    def parse(cls, value) -> "Notion":
        if isinstance(value, Notion):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {
            "proportional": cls.PROPORTIONAL,
            "proportionality": cls.PROPORTIONAL,
            "prop": cls.PROPORTIONAL,
            "envy-free": cls.ENVY_FREE,
            "envy-freeness": cls.ENVY_FREE,
            "envyfree": cls.ENVY_FREE,
            "ef": cls.ENVY_FREE,
            "equitable": cls.EQUITABLE,
            "equitability": cls.EQUITABLE,
            "eq": cls.EQUITABLE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ArgumentError(f"unknown fairness notion {value!r}; use proportional, envy-free or equitable") from None


@dataclass(frozen=True)
class Constraint:
    """Restrict to allocations whose measure for ``notion`` is at most ``epsilon``."""

    notion: Notion
    epsilon: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "notion", Notion.parse(self.notion))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.epsilon < 0:
            raise ArgumentError(f"epsilon must be >= 0, got {self.epsilon}")


@dataclass(frozen=True)
class OracleResult:
    value: Optional[Fraction]
    witness: Optional[ContiguousAllocation | GeneralAllocation]
    explored: int

    @property
    def feasible(self) -> bool:
        return self.witness is not None


def oracle_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        budget = int(raw)
    except ValueError:
        raise ArgumentError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if budget < 1:
        raise ArgumentError(f"{BUDGET_ENV} must be positive, got {budget}")
    return budget


def contiguous_bound(n: int, m: int) -> int:
    """``C(m+n-1, n-1) * n!``: cut vectors times agent orders."""
    return math.comb(m + n - 1, n - 1) * math.factorial(n)


def count_contiguous(n: int, m: int) -> int:
    """Exact number of distinct contiguous allocations (as item-to-owner maps).

    A distinct allocation is an ordered choice of k nonempty agents together
    with a split of the line into k nonempty blocks.
    """
    if n < 1 or m < 0:
        raise ArgumentError(f"need n >= 1 and m >= 0, got n={n}, m={m}")
    if m == 0:
        return 1
    return sum(math.perm(n, k) * math.comb(m - 1, k - 1) for k in range(1, min(n, m) + 1))


def _check_budget(space: str, n: int, m: int, budget: Optional[int], ordering) -> int:
    budget = oracle_budget() if budget is None else budget
    if space == CONTIGUOUS:
        required = math.comb(m + n - 1, n - 1) if ordering is not None else contiguous_bound(n, m)
        label = "C(m+n-1, n-1)" if ordering is not None else "C(m+n-1, n-1) * n!"
    elif space == GENERAL:
        required = n**m
        label = "n^m"
    else:
        raise ArgumentError(f"unknown search space {space!r}; use contiguous or general")
    if required > budget:
        raise CapacityError(
            f"{space} search over n={n}, m={m} needs up to {label} = {required} allocations, budget is {budget}",
            required=required,
            limit=budget,
        )
    return required


def _compositions(m: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Boundary vectors ``0 = b_0 <= ... <= b_parts = m`` in lexicographic order."""
    for cuts in itertools.combinations_with_replacement(range(m + 1), parts - 1):
        yield (0,) + cuts + (m,)


def _canonical(order: Sequence[int], bounds: Sequence[int]) -> bool:
    """True iff (order, bounds) is the least pair producing its owner map.

    Empty blocks can sit anywhere; the least permutation merges the empty
    agents (ascending) into the nonempty sequence, always taking the smaller
    of the next empty agent and the next nonempty agent.
    """
    n = len(order)
    empty = sorted(order[p] for p in range(n) if bounds[p] == bounds[p + 1])
    if not empty:
        return True
    full = [order[p] for p in range(n) if bounds[p] != bounds[p + 1]]
    merged = []
    e = f = 0
    while e < len(empty) or f < len(full):
        if f == len(full) or (e < len(empty) and empty[e] < full[f]):
            merged.append(empty[e])
            e += 1
        else:
            merged.append(full[f])
            f += 1
    return tuple(merged) == tuple(order)


def enumerate_contiguous(
    instance: Instance,
    ordering: Optional[Sequence[int]] = None,
    budget: Optional[int] = None,
) -> Iterator[ContiguousAllocation]:
    """Yield every distinct contiguous allocation exactly once.

    With ``ordering`` only allocations whose blocks follow that agent order
    are produced (every boundary vector, no deduplication needed).
    """
    n, m = instance.n, instance.m
    _check_budget(CONTIGUOUS, n, m, budget, ordering)
    if ordering is not None:
        order = check_ordering(ordering, n)
        for bounds in _compositions(m, n):
            yield ContiguousAllocation(order, bounds)
        return
    for order in itertools.permutations(range(n)):
        for bounds in _compositions(m, n):
            if _canonical(order, bounds):
                yield ContiguousAllocation(order, bounds)


class _Scaled:
    """Integer copy of an instance scaled by ``n * lcm(denominators)``.

    Every measure is linear in the utilities, so evaluating in integers and
    dividing by the scale at the end is exact and much faster than Fractions.
    """

    def __init__(self, instance: Instance):
        self.n, self.m = instance.n, instance.m
        lcm = 1
        for row in instance.utilities:
            for u in row:
                lcm = math.lcm(lcm, u.denominator)
        self.scale = lcm * self.n
        self.rows = [[int(u * self.scale) for u in row] for row in instance.utilities]
        self.prefix = [list(itertools.accumulate(row, initial=0)) for row in self.rows]
        self.shares = [p[-1] // self.n for p in self.prefix]

    def contiguous_values(self, order, bounds):
        n = self.n
        blocks = [None] * n
        for p, a in enumerate(order):
            blocks[a] = (bounds[p], bounds[p + 1])
        return [[self.prefix[i][blocks[j][1]] - self.prefix[i][blocks[j][0]] for j in range(n)] for i in range(n)]

    def general_values(self, owners):
        n = self.n
        V = [[0] * n for _ in range(n)]
        for j, a in enumerate(owners):
            for i in range(n):
                V[i][a] += self.rows[i][j]
        return V

    def measure(self, notion: Notion, V) -> int:
        n = self.n
        if notion is Notion.PROPORTIONAL:
            return max(0, max(self.shares[i] - V[i][i] for i in range(n)))
        if notion is Notion.ENVY_FREE:
            if n == 1:
                return 0
            return max(0, max(V[i][j] - V[i][i] for i in range(n) for j in range(n) if i != j))
        own = [V[i][i] for i in range(n)]
        return max(own) - min(own)

    def welfare(self, kind: str, V) -> int:
        own = [V[i][i] for i in range(self.n)]
        if kind == UTILITARIAN:
            return sum(own)
        if kind == EGALITARIAN:
            return min(own)
        raise ArgumentError(f"unknown welfare kind {kind!r}")


def _candidates(instance: Instance, space: str, budget, ordering):
    """Yield (owner sequence, allocation, cross-value matrix) over the space."""
    if space not in (CONTIGUOUS, GENERAL):
        raise ArgumentError(f"unknown search space {space!r}; use contiguous or general")
    scaled = _Scaled(instance)
    n, m = instance.n, instance.m
    if space == CONTIGUOUS:
        for alloc in enumerate_contiguous(instance, ordering, budget):
            yield alloc, scaled.contiguous_values(alloc.order, alloc.bounds)
    else:
        if ordering is not None:
            raise ArgumentError("an agent ordering only applies to the contiguous space")
        _check_budget(GENERAL, n, m, budget, None)
        for owners in itertools.product(range(n), repeat=m):
            yield GeneralAllocation(owners, n), scaled.general_values(owners)


def _owners(alloc) -> tuple[int, ...]:
    return alloc.owners() if isinstance(alloc, ContiguousAllocation) else alloc.owners


def min_epsilon(
    instance: Instance,
    notion,
    space: str = CONTIGUOUS,
    *,
    ordering: Optional[Sequence[int]] = None,
    budget: Optional[int] = None,
) -> OracleResult:
    """Least eps for which some allocation in the space is eps-fair for ``notion``."""
    notion = Notion.parse(notion)
    scaled = _Scaled(instance)
    best = best_alloc = best_key = None
    explored = 0
    for alloc, V in _candidates(instance, space, budget, ordering):
        explored += 1
        value = scaled.measure(notion, V)
        if best is None or value < best:
            best, best_alloc, best_key = value, alloc, None
        elif value == best:
            best_key = best_key or _owners(best_alloc)
            key = _owners(alloc)
            if key < best_key:
                best_alloc, best_key = alloc, key
    return OracleResult(Fraction(best, scaled.scale), best_alloc, explored)


def optimal_welfare(
    instance: Instance,
    kind: str = UTILITARIAN,
    constraint: Optional[Constraint] = None,
    space: str = CONTIGUOUS,
    *,
    ordering: Optional[Sequence[int]] = None,
    budget: Optional[int] = None,
) -> OracleResult:
    """Largest welfare over allocations satisfying ``constraint``.

    When nothing satisfies the constraint the result has ``value`` and
    ``witness`` set to None.
    """
    if kind not in (UTILITARIAN, EGALITARIAN):
        raise ArgumentError(f"unknown welfare kind {kind!r}; use utilitarian or egalitarian")
    scaled = _Scaled(instance)
    limit = None
    if constraint is not None:
        limit = constraint.epsilon * scaled.scale
    best = best_alloc = best_key = None
    explored = 0
    for alloc, V in _candidates(instance, space, budget, ordering):
        explored += 1
        if limit is not None and scaled.measure(constraint.notion, V) > limit:
            continue
        value = scaled.welfare(kind, V)
        if best is None or value > best:
            best, best_alloc, best_key = value, alloc, None
        elif value == best:
            best_key = best_key or _owners(best_alloc)
            key = _owners(alloc)
            if key < best_key:
                best_alloc, best_key = alloc, key
    if best is None:
        return OracleResult(None, None, explored)
    return OracleResult(Fraction(best, scaled.scale), best_alloc, explored)
