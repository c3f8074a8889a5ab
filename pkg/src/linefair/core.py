"""Exact data model: instances, contiguous and general allocations.

Items sit on a line in index order. Internally agents and items are 0-based;
file formats and reports use 1-based agent numbers (see :mod:`linefair.io`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from linefair.errors import ArgumentError, NormalizationError


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and exact strings to a Fraction.

    Floats are rejected because they cannot be converted without silently
    inheriting binary rounding.
    """
    if isinstance(value, bool):
        raise ArgumentError(f"booleans are not utilities: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ArgumentError(f"float {value!r} is not exact; pass an int, a decimal string or 'p/q'")
    if isinstance(value, str):
        text = value.strip()
        try:
            q = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ArgumentError(f"not an exact rational: {value!r}") from exc
        return q
    raise ArgumentError(f"unsupported utility type {type(value).__name__}")


@dataclass(frozen=True)
class Instance:
    """``n`` agents with nonnegative additive utilities over ``m`` items on a line."""

    utilities: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(u) for u in row) for row in self.utilities)
        if not rows:
            raise ArgumentError("an instance needs at least one agent")
        m = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != m:
                raise ArgumentError(f"row {i + 1} has {len(row)} items, expected {m}")
            for j, u in enumerate(row):
                if u < 0:
                    raise ArgumentError(f"utility of agent {i + 1} for item {j + 1} is negative ({u})")
        object.__setattr__(self, "utilities", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "Instance":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.utilities)

    @property
    def m(self) -> int:
        return len(self.utilities[0])

    @cached_property
    def prefix(self) -> tuple[tuple[Fraction, ...], ...]:
        """``prefix[i][k]`` is agent i's utility for the first k items."""
        out = []
        for row in self.utilities:
            acc = [Fraction(0)]
            for u in row:
                acc.append(acc[-1] + u)
            out.append(tuple(acc))
        return tuple(out)

    def total(self, agent: int) -> Fraction:
        return self.prefix[agent][self.m]

    def interval_utility(self, agent: int, start: int, end: int) -> Fraction:
        """Utility of ``agent`` for the half-open item interval [start, end)."""
        p = self.prefix[agent]
        return p[end] - p[start]

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(str(u) for u in row) + ")" for row in self.utilities)
        return f"Instance(n={self.n}, m={self.m}, [{rows}])"


def _check_agent(instance: Instance, agent: int):
    if not 0 <= agent < instance.n:
        raise ArgumentError(f"agent {agent} out of range 0..{instance.n - 1}")


def bundle_utility(instance: Instance, agent: int, items: Iterable[int]) -> Fraction:
    _check_agent(instance, agent)
    row = instance.utilities[agent]
    total = Fraction(0)
    for j in items:
        if not 0 <= j < instance.m:
            raise ArgumentError(f"item {j} out of range 0..{instance.m - 1}")
        total += row[j]
    return total


def agent_u_max(instance: Instance, agent: int) -> Fraction:
    _check_agent(instance, agent)
    return max(instance.utilities[agent], default=Fraction(0))


def u_max(instance: Instance) -> Fraction:
    return max((agent_u_max(instance, i) for i in range(instance.n)), default=Fraction(0))


def normalize(instance: Instance) -> Instance:
    """Rescale every row to sum to exactly 1."""
    rows = []
    for i, row in enumerate(instance.utilities):
        total = sum(row, Fraction(0))
        if total == 0:
            raise NormalizationError(f"agent {i + 1} has total utility 0; cannot normalize")
        rows.append(tuple(u / total for u in row))
    return Instance(tuple(rows))


def check_ordering(order: Sequence[int], n: int) -> tuple[int, ...]:
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise ArgumentError(f"ordering {order} is not a permutation of 0..{n - 1}")
    return order


@dataclass(frozen=True)
class ContiguousAllocation:
    """Agents own consecutive blocks, placed left to right in ``order``.

    ``bounds`` holds the n+1 block boundaries ``0 = b_0 <= ... <= b_n = m``;
    the agent at position p owns items ``[bounds[p], bounds[p+1])``. Empty
    blocks keep the position where they were created.
    """

    order: tuple[int, ...]
    bounds: tuple[int, ...]

    def __post_init__(self):
        order = check_ordering(self.order, len(self.order))
        bounds = tuple(int(b) for b in self.bounds)
        if len(bounds) != len(order) + 1:
            raise ArgumentError(f"expected {len(order) + 1} boundaries, got {len(bounds)}")
        if bounds[0] != 0 or any(a > b for a, b in zip(bounds, bounds[1:])):
            raise ArgumentError(f"boundaries {bounds} must start at 0 and be nondecreasing")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "bounds", bounds)

    @classmethod
    def from_blocks(cls, blocks: Sequence[tuple[int, int]], order: Optional[Sequence[int]] = None):
        """Build from per-agent half-open ``(start, end)`` intervals.

        Without an explicit ``order`` the left-to-right order is recovered by
        sorting on (start, end, agent), which is unambiguous unless several
        empty blocks share one boundary point.
        """
        blocks = [tuple(b) for b in blocks]
        n = len(blocks)
        if n == 0:
            raise ArgumentError("an allocation needs at least one agent")
        for a, (s, e) in enumerate(blocks):
            if s > e:
                raise ArgumentError(f"block of agent {a + 1} has start {s} > end {e}")
        if order is None:
            order = sorted(range(n), key=lambda a: (blocks[a][0], blocks[a][1], a))
        order = check_ordering(order, n)
        pos = 0
        bounds = [0]
        for a in order:
            s, e = blocks[a]
            if s != pos:
                raise ArgumentError(f"blocks do not tile the line: agent {a + 1} starts at {s}, expected {pos}")
            pos = e
            bounds.append(e)
        return cls(order, tuple(bounds))

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def m(self) -> int:
        return self.bounds[-1]

    @cached_property
    def blocks(self) -> tuple[tuple[int, int], ...]:
        """Per-agent ``(start, end)`` intervals, indexed by agent."""
        out = [None] * self.n
        for p, a in enumerate(self.order):
            out[a] = (self.bounds[p], self.bounds[p + 1])
        return tuple(out)

    def bundle(self, agent: int) -> range:
        s, e = self.blocks[agent]
        return range(s, e)

    def owners(self) -> tuple[int, ...]:
        out = []
        for p, a in enumerate(self.order):
            out.extend([a] * (self.bounds[p + 1] - self.bounds[p]))
        return tuple(out)

    def to_general(self) -> "GeneralAllocation":
        return GeneralAllocation(self.owners(), self.n)


@dataclass(frozen=True)
class GeneralAllocation:
    """Arbitrary partition: ``owners[j]`` is the agent holding item j."""

    owners: tuple[int, ...]
    n: int = field(default=0)

    def __post_init__(self):
        owners = tuple(int(a) for a in self.owners)
        n = self.n or (max(owners) + 1 if owners else 1)
        for j, a in enumerate(owners):
            if not 0 <= a < n:
                raise ArgumentError(f"item {j + 1} assigned to agent {a + 1}, outside 1..{n}")
        object.__setattr__(self, "owners", owners)
        object.__setattr__(self, "n", n)

    @property
    def m(self) -> int:
        return len(self.owners)

    def bundle(self, agent: int) -> tuple[int, ...]:
        return tuple(j for j, a in enumerate(self.owners) if a == agent)


def contiguous_to_general(allocation: ContiguousAllocation) -> GeneralAllocation:
    return allocation.to_general()


def general_is_contiguous(allocation: GeneralAllocation) -> Optional[ContiguousAllocation]:
    """Return the block form of ``allocation``, or None if some bundle has a gap.

    Agents with empty bundles are placed at the left end of the line, in index
    order, so the result is deterministic.
    """
    runs = []
    for a in allocation.owners:
        if runs and runs[-1][0] == a:
            runs[-1][1] += 1
        else:
            runs.append([a, 1])
    seen = [a for a, _ in runs]
    if len(seen) != len(set(seen)):
        return None
    empty = [a for a in range(allocation.n) if a not in set(seen)]
    order = empty + seen
    bounds = [0] * (len(empty) + 1)
    for _, length in runs:
        bounds.append(bounds[-1] + length)
    return ContiguousAllocation(tuple(order), tuple(bounds))


Allocation = ContiguousAllocation | GeneralAllocation


def check_allocation(instance: Instance, allocation: Allocation):
    if allocation.n != instance.n or allocation.m != instance.m:
        raise ArgumentError(
            f"allocation covers {allocation.n} agents and {allocation.m} items, "
            f"instance has {instance.n} agents and {instance.m} items"
        )
