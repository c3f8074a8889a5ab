"""JSON documents for instances, allocations and reports.

Agents are numbered from 1 in every document. Block boundaries are item
positions on the line, so ``[0, 1]`` is the block holding item 1 alone.
Fractions are written as strings ``"p/q"`` (or ``"p"``).
"""

from __future__ import annotations

import json
from decimal import Decimal
from fractions import Fraction

from linefair.core import ContiguousAllocation, GeneralAllocation, Instance
from linefair.errors import ArgumentError, ParseError


def loads(text: str):
    """Parse JSON keeping decimal literals exact."""
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


def dumps(document) -> str:
    """Canonical form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def parse_utility(value, row: int, col: int) -> Fraction:
    where = f"row {row}, column {col}"
    if isinstance(value, bool) or value is None:
        raise ParseError(f"{where}: {value!r} is not a number")
    try:
        if isinstance(value, Decimal):
            if not value.is_finite():
                raise ParseError(f"{where}: {value} is not finite")
            q = Fraction(value)
        elif isinstance(value, int):
            q = Fraction(value)
        elif isinstance(value, str):
            q = Fraction(value.strip())
        else:
            raise ParseError(f"{where}: {value!r} is not an integer, decimal string or 'p/q' fraction")
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: {value!r} is not an exact rational") from exc
    if q < 0:
        raise ParseError(f"{where}: utility {q} is negative")
    return q


def parse_instance(document) -> Instance:
    if isinstance(document, str):
        document = loads(document)
    if not isinstance(document, dict):
        raise ParseError("instance document must be a JSON object")
    for key in ("agents", "items", "utilities"):
        if key not in document:
            raise ParseError(f"instance document is missing {key!r}")
    n, m, rows = document["agents"], document["items"], document["utilities"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"'agents' must be a positive integer, got {n!r}")
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        raise ParseError(f"'items' must be a nonnegative integer, got {m!r}")
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"'utilities' must hold {n} rows, got {len(rows) if isinstance(rows, list) else rows!r}")
    parsed = []
    for i, row in enumerate(rows, start=1):
        if not isinstance(row, list) or len(row) != m:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise ParseError(f"row {i} has {got} entries, expected {m} items")
        parsed.append(tuple(parse_utility(u, i, j) for j, u in enumerate(row, start=1)))
    return Instance(tuple(parsed))


def instance_to_json(instance: Instance) -> dict:
    return {
        "agents": instance.n,
        "items": instance.m,
        "utilities": [[str(u) for u in row] for row in instance.utilities],
    }


def allocation_to_json(allocation) -> dict:
    if isinstance(allocation, ContiguousAllocation):
        return {
            "type": "contiguous",
            "blocks": [list(b) for b in allocation.blocks],
            "order": [a + 1 for a in allocation.order],
        }
    return {"type": "general", "owners": [a + 1 for a in allocation.owners]}


def parse_allocation(document, n: int | None = None):
    """Read a contiguous (``blocks``) or general (``owners``) allocation."""
    if isinstance(document, str):
        document = loads(document)
    if not isinstance(document, dict):
        raise ParseError("allocation document must be a JSON object")
    kind = document.get("type", "contiguous" if "blocks" in document else "general")
    try:
        if kind == "contiguous":
            blocks = document.get("blocks")
            if not isinstance(blocks, list) or not all(isinstance(b, list) and len(b) == 2 for b in blocks):
                raise ParseError("'blocks' must be a list of [start, end] pairs")
            order = document.get("order")
            if order is not None:
                order = [int(a) - 1 for a in order]
            return ContiguousAllocation.from_blocks([tuple(int(x) for x in b) for b in blocks], order)
        if kind == "general":
            owners = document.get("owners")
            if not isinstance(owners, list):
                raise ParseError("'owners' must be a list of 1-based agent numbers")
            for j, a in enumerate(owners, start=1):
                if not isinstance(a, int) or isinstance(a, bool) or a < 1:
                    raise ParseError(f"owner of item {j} must be a positive agent number, got {a!r}")
            return GeneralAllocation(tuple(a - 1 for a in owners), n or (max(owners) if owners else 1))
    except ParseError:
        raise
    except (ArgumentError, TypeError, ValueError) as exc:
        raise ParseError(f"invalid allocation: {exc}") from exc
    raise ParseError(f"unknown allocation type {kind!r}; use contiguous or general")
