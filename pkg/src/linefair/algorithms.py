"""Constructive procedures for approximately fair contiguous allocations."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from linefair.core import (
    ContiguousAllocation,
    GeneralAllocation,
    Instance,
    agent_u_max,
    as_fraction,
    check_ordering,
    u_max,
)
from linefair.errors import ArgumentError, CapacityError

MAX_REFINE_AGENTS = 8


def proportional_threshold(instance: Instance, agent: int) -> Fraction:
    """``u_i(M)/n - (n-1)/n * u_{i,max}``, the per-agent guarantee of the sweep."""
    n = instance.n
    return instance.total(agent) / n - Fraction(n - 1, n) * agent_u_max(instance, agent)


def allocate_proportional(instance: Instance) -> ContiguousAllocation:
    """Left-to-right sweep handing the growing block to the first agent whose threshold it meets.

    Ties go to the lowest agent index. Items left over once every agent holds
    a block join the last (rightmost) block.
    """
    n, m = instance.n, instance.m
    thresholds = [proportional_threshold(instance, i) for i in range(n)]
    waiting = list(range(n))
    order: list[int] = []
    bounds = [0]
    start = end = 0
    while True:
        winner = next(
            (i for i in waiting if instance.interval_utility(i, start, end) >= thresholds[i]),
            None,
        )
        if winner is not None:
            waiting.remove(winner)
            order.append(winner)
            if not waiting:
                bounds.append(m)
                break
            bounds.append(end)
            start = end
            continue
        if end == m:
            raise RuntimeError(f"sweep ran out of items with agents {waiting} unserved")
        end += 1
    return ContiguousAllocation(tuple(order), tuple(bounds))


def allocate_envy_free_two(instance: Instance) -> ContiguousAllocation:
    """Two-agent allocation where agent i envies the other by at most ``u_{i,max}``."""
    if instance.n != 2:
        raise ArgumentError(f"allocate_envy_free_two needs exactly 2 agents, got {instance.n}")
    return allocate_proportional(instance)


def move_cap(n: int, m: int) -> int:
    return 8 * n * n * m**4 + 64


@dataclass
class BlockMoverResult:
    allocation: ContiguousAllocation
    moves: int
    # one list per visit to the max-block selection step: potential after each move
    phases: list[list[int]] = field(default_factory=list)


def _potential(bounds: Sequence[int], i: int) -> int:
    return sum(abs(i - z) * (bounds[z + 1] - bounds[z]) for z in range(len(bounds) - 1))


def run_block_mover(instance: Instance, ordering: Sequence[int]) -> BlockMoverResult:
    """Shift boundary items from the richest block toward the poorest until the spread is at most u_max.

    Starts with every item in the first block of ``ordering``. Positions
    (not agent ids) index the blocks; ties in the max and min selection go to
    the lower agent id.
    """
    n, m = instance.n, instance.m
    order = check_ordering(ordering, n)
    umax = u_max(instance)
    bounds = [0] + [m] * n
    vals = [instance.interval_utility(order[p], bounds[p], bounds[p + 1]) for p in range(n)]
    cap = move_cap(n, m)
    moves = 0
    phases: list[list[int]] = []

    def pick_max():
        top = max(vals)
        return min((p for p in range(n) if vals[p] == top), key=lambda p: order[p])

    i = pick_max()
    phases.append([_potential(bounds, i)])
    while True:
        if max(vals) <= min(vals) + umax:
            break
        low = min(vals)
        j = min((p for p in range(n) if vals[p] == low), key=lambda p: (abs(p - i), order[p]))
        k = j - 1 if j > i else j + 1
        if bounds[k] == bounds[k + 1]:
            raise RuntimeError(f"block at position {k} is empty; block mover invariant broken")
        if j > i:
            # last item of block k becomes the first item of block j
            bounds[j] -= 1
            item = bounds[j]
        else:
            item = bounds[j + 1]
            bounds[j + 1] += 1
        vals[j] = instance.interval_utility(order[j], bounds[j], bounds[j + 1])
        vals[k] = instance.interval_utility(order[k], bounds[k], bounds[k + 1])
        moves += 1
        if moves > cap:
            raise RuntimeError(f"block mover exceeded {cap} moves; termination bound violated")
        phases[-1].append(_potential(bounds, i))
        if k == i and instance.utilities[order[i]][item] != 0:
            i = pick_max()
            phases.append([_potential(bounds, i)])
    return BlockMoverResult(ContiguousAllocation(order, tuple(bounds)), moves, phases)


def allocate_equitable(instance: Instance, ordering: Optional[Sequence[int]] = None) -> ContiguousAllocation:
    """u_max-equitable contiguous allocation with blocks in the given agent order."""
    if ordering is None:
        ordering = range(instance.n)
    return run_block_mover(instance, ordering).allocation


def _greedy_fixed_order(instance: Instance, order: Sequence[int], w: Fraction, start: int = 0, end: Optional[int] = None):
    """Minimal prefix blocks reaching ``w``; returns the boundaries or None when infeasible."""
    end = instance.m if end is None else end
    bounds = [start]
    pos = start
    for a in order[:-1]:
        cut = pos
        while instance.interval_utility(a, pos, cut) < w:
            if cut == end:
                return None
            cut += 1
        bounds.append(cut)
        pos = cut
    if instance.interval_utility(order[-1], pos, end) < w:
        return None
    bounds.append(end)
    return bounds


def max_egalitarian_fixed_order(instance: Instance, ordering: Sequence[int]) -> tuple[Fraction, ContiguousAllocation]:
    """Best egalitarian welfare over contiguous allocations with blocks in ``ordering``.

    The optimum is the utility of some agent for some interval (or 0), so a
    binary search over those candidates with the greedy feasibility test is exact.
    """
    n, m = instance.n, instance.m
    order = check_ordering(ordering, n)
    candidates = {Fraction(0)}
    for a in range(n):
        for s in range(m + 1):
            for e in range(s, m + 1):
                candidates.add(instance.interval_utility(a, s, e))
    values = sorted(candidates)
    lo, hi = 0, len(values) - 1  # values[lo] is always feasible
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _greedy_fixed_order(instance, order, values[mid]) is not None:
            lo = mid
        else:
            hi = mid - 1
    w = values[lo]
    bounds = _greedy_fixed_order(instance, order, w)
    return w, ContiguousAllocation(order, tuple(bounds))


def max_egalitarian_contiguous(instance: Instance) -> tuple[Fraction, ContiguousAllocation]:
    """Best egalitarian welfare over all orderings (first ordering in lexicographic order wins ties)."""
    if instance.n > MAX_REFINE_AGENTS:
        raise CapacityError(
            f"ordering search over {instance.n}! orderings exceeds the limit of n <= {MAX_REFINE_AGENTS}",
            required=math.factorial(instance.n),
            limit=math.factorial(MAX_REFINE_AGENTS),
        )
    best = None
    for perm in itertools.permutations(range(instance.n)):
        w, alloc = max_egalitarian_fixed_order(instance, perm)
        if best is None or w > best[0]:
            best = (w, alloc)
    return best


def equitable_refine(instance: Instance) -> ContiguousAllocation:
    """u_max-equitable allocation whose egalitarian welfare is the contiguous optimum.

    Starts from an egalitarian-optimal allocation and repositions boundaries:
    every block but the last is trimmed from the right into [w, w + u_max),
    then, if the last block is still worth more than w + u_max, its left
    boundary moves right and the first n-1 agents are refined recursively.
    """
    w, start = max_egalitarian_contiguous(instance)
    umax = u_max(instance)
    order = start.order
    bounds = list(start.bounds)

    def value(p):
        return instance.interval_utility(order[p], bounds[p], bounds[p + 1])

    for k in range(len(order), 0, -1):
        # agents at positions 0..k-1 share items [0, bounds[k])
        for p in range(k - 1):
            while value(p) >= w + umax and bounds[p + 1] > bounds[p]:
                bounds[p + 1] -= 1
        last = k - 1
        if value(last) <= w + umax:
            break
        if last == 0:
            raise RuntimeError(f"single remaining agent holds {value(0)} > {w} + {umax}")
        while value(last) > w + umax:
            bounds[last] += 1

    result = ContiguousAllocation(order, tuple(bounds))
    own = [instance.interval_utility(a, *result.blocks[a]) for a in range(instance.n)]
    if min(own) != w or max(own) > w + umax:
        raise RuntimeError(f"refinement left utilities {own} outside [{w}, {w + umax}]")
    return result


@dataclass(frozen=True)
class DivisibleAllocation:
    """Contiguous division of the cake [0, m]; piece p lies between cuts p-1 and p."""

    cuts: tuple[Fraction, ...]
    order: tuple[int, ...]

    def __post_init__(self):
        cuts = tuple(as_fraction(c) for c in self.cuts)
        order = check_ordering(self.order, len(self.order))
        if len(cuts) != len(order) - 1:
            raise ArgumentError(f"{len(order)} pieces need {len(order) - 1} cuts, got {len(cuts)}")
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "order", order)

    def points(self, m: int) -> tuple[Fraction, ...]:
        pts = (Fraction(0),) + self.cuts + (Fraction(m),)
        if any(a > b for a, b in zip(pts, pts[1:])):
            raise ArgumentError(f"cuts {tuple(str(c) for c in self.cuts)} must be nondecreasing within [0, {m}]")
        return pts

    def piece(self, agent: int, m: int) -> tuple[Fraction, Fraction]:
        pts = self.points(m)
        p = self.order.index(agent)
        return pts[p], pts[p + 1]


def cake_value(instance: Instance, agent: int, a: Fraction, b: Fraction) -> Fraction:
    """Agent's value for [a, b] when item j is spread uniformly over [j-1, j]."""

    def cdf(x):
        k = math.floor(x)
        if k >= instance.m:
            return instance.total(agent)
        return instance.prefix[agent][k] + (x - k) * instance.utilities[agent][k]

    return cdf(b) - cdf(a)


def divisible_envy(instance: Instance, division: DivisibleAllocation) -> list[list[Fraction]]:
    """``E[i][j]`` is agent i's envy toward agent j's piece of the cake."""
    n, m = instance.n, instance.m
    pieces = [division.piece(a, m) for a in range(n)]
    vals = [[cake_value(instance, i, *pieces[j]) for j in range(n)] for i in range(n)]
    return [[vals[i][j] - vals[i][i] for j in range(n)] for i in range(n)]


def cut_and_choose(instance: Instance) -> DivisibleAllocation:
    """Envy-free division of the cake for two agents.

    Agent 1 cuts at its leftmost halving point, agent 2 takes the piece it
    prefers (the left one on a tie).
    """
    if instance.n != 2:
        raise ArgumentError(f"cut_and_choose needs exactly 2 agents, got {instance.n}")
    half = instance.total(0) / 2
    row, prefix = instance.utilities[0], instance.prefix[0]
    x = Fraction(0)
    if half > 0:
        for k in range(instance.m):
            if row[k] > 0 and prefix[k] <= half <= prefix[k + 1]:
                x = k + (half - prefix[k]) / row[k]
                break
    left = cake_value(instance, 1, Fraction(0), x)
    right = cake_value(instance, 1, x, Fraction(instance.m))
    order = (1, 0) if left >= right else (0, 1)
    return DivisibleAllocation((x,), order)


def round_divisible(instance: Instance, division: DivisibleAllocation) -> ContiguousAllocation:
    """Give item j to the piece containing point j, or the piece to its left on a boundary.

    Item j (1-based) lands in the piece with ``c_p < j <= c_{p+1}``, so that
    piece keeps items ``floor(c_p) + 1 .. floor(c_{p+1})``.
    """
    if len(division.order) != instance.n:
        raise ArgumentError(f"division has {len(division.order)} pieces for {instance.n} agents")
    pts = division.points(instance.m)
    bounds = tuple(math.floor(c) for c in pts)
    return ContiguousAllocation(division.order, bounds)


def allocate_round_robin(instance: Instance) -> GeneralAllocation:
    """Agents 1..n in turn take their favourite remaining item (lowest index on ties)."""
    n, m = instance.n, instance.m
    remaining = list(range(m))
    owners = [0] * m
    turn = 0
    while remaining:
        row = instance.utilities[turn]
        pick = max(remaining, key=lambda j: (row[j], -j))
        owners[pick] = turn
        remaining.remove(pick)
        turn = (turn + 1) % n
    return GeneralAllocation(tuple(owners), n)
