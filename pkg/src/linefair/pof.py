"""Price of fairness over contiguous allocations, and the lower-bound instance families."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from linefair.core import ContiguousAllocation, Instance, normalize, u_max
from linefair.errors import ArgumentError
from linefair.fairness import EGALITARIAN, UTILITARIAN, max_envy, report, welfare
from linefair.oracle import CONTIGUOUS, GENERAL, Constraint, Notion, enumerate_contiguous, min_epsilon, optimal_welfare

DEFINED = "defined"
UNDEFINED = "undefined"
INFINITE = "infinite"

FAMILIES = (
    "prop-lower",
    "equit-lower-2",
    "equit-lower",
    "ef-util-lower",
    "ef-egal-lower",
    "unit-items",
    "order-counterexample",
    "crumbs",
    "random",
)


@dataclass(frozen=True)
class PofResult:
    notion: Notion
    welfare: str
    optimal: Fraction
    best_fair: Optional[Fraction]
    ratio: Optional[Fraction]
    status: str
    optimal_witness: Optional[ContiguousAllocation] = None
    fair_witness: Optional[ContiguousAllocation] = None

    def to_json(self) -> dict:
        def frac(q):
            return None if q is None else str(q)

        def blocks(a):
            return None if a is None else [list(b) for b in a.blocks]

        return {
            "notion": self.notion.value,
            "welfare": self.welfare,
            "optimal": frac(self.optimal),
            "best_fair": frac(self.best_fair),
            "ratio": frac(self.ratio),
            "status": self.status,
            "optimal_witness": blocks(self.optimal_witness),
            "fair_witness": blocks(self.fair_witness),
        }


def price_of_fairness(instance: Instance, notion, kind: str = UTILITARIAN, *, budget=None) -> PofResult:
    """Optimal contiguous welfare over the best exactly-fair contiguous welfare.

    Rows are normalized first. The price is undefined when no contiguous
    allocation is exactly fair; a zero best-fair welfare against a positive
    optimum is reported as infinite, and 0/0 as 1.
    """
    notion = Notion.parse(notion)
    inst = normalize(instance)
    opt = optimal_welfare(inst, kind, None, CONTIGUOUS, budget=budget)
    fair = optimal_welfare(inst, kind, Constraint(notion), CONTIGUOUS, budget=budget)
    if not fair.feasible:
        return PofResult(notion, kind, opt.value, None, None, UNDEFINED, opt.witness, None)
    if fair.value == 0:
        if opt.value == 0:
            return PofResult(notion, kind, opt.value, fair.value, Fraction(1), DEFINED, opt.witness, fair.witness)
        return PofResult(notion, kind, opt.value, fair.value, None, INFINITE, opt.witness, fair.witness)
    return PofResult(notion, kind, opt.value, fair.value, opt.value / fair.value, DEFINED, opt.witness, fair.witness)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: Optional[int] = None
    m: Optional[int] = None
    epsilon: Optional[Fraction] = None
    seed: int = 0
    denominator: int = 100

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ArgumentError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.epsilon is not None:
            object.__setattr__(self, "epsilon", Fraction(self.epsilon))


def _need(spec: FamilySpec, name: str):
    value = getattr(spec, name)
    if value is None:
        raise ArgumentError(f"family {spec.family} requires parameter {name}")
    return value


def _epsilon(spec: FamilySpec, upper: Fraction, label: str) -> Fraction:
    eps = _need(spec, "epsilon")
    if not 0 < eps < upper:
        raise ArgumentError(f"family {spec.family} requires 0 < epsilon < {label}, got {eps}")
    return eps


def _prop_lower(n: int, eps: Fraction) -> list[list[Fraction]]:
    m = 2 * n - 1
    rows = [[Fraction(0)] * m for _ in range(n)]
    for i in range(1, n):
        rows[i - 1][2 * i - 2] = eps
        rows[i - 1][2 * i - 1] = Fraction(1, n) - eps
        rows[i - 1][2 * i] = Fraction(n - 1, n)
    for j in range(1, n):
        rows[n - 1][2 * j - 2] = Fraction(1, n) - eps
    rows[n - 1][2 * n - 2] = Fraction(1, n) + (n - 1) * eps
    return rows


def _equit_lower(n: int, eps: Fraction) -> list[list[Fraction]]:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        rows[i - 1][i - 1] = eps
        rows[i - 1][i] = 1 - eps
    rows[n - 1][0] = 1 - 2 * eps
    rows[n - 1][n - 2] = eps
    rows[n - 1][n - 1] = eps
    return rows


def _ef_util_lower(n: int) -> list[list[Fraction]]:
    r = math.isqrt(n)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, r):
        for j in range(r):
            rows[i - 1][i * r - j - 1] = Fraction(1, r)
    tail = n - r * (r - 1)
    for j in range(r * (r - 1) + 1, n + 1):
        rows[r - 1][j - 1] = Fraction(1, tail)
    for i in range(r + 1, n + 1):
        rows[i - 1] = [Fraction(1, n)] * n
    return rows


def _ef_egal_lower(n: int, eps: Fraction) -> list[list[Fraction]]:
    m = 2 * n
    rows = [[Fraction(0)] * m for _ in range(n)]
    for i in range(1, n):
        rows[i - 1][2 * i - 1] = Fraction(1, 2) + eps
        rows[i - 1][2 * n - 2 * i - 2] = Fraction(1, 2) - eps
    rows[n - 1] = [Fraction(1, 2 * n)] * m
    return rows


def generate(spec: FamilySpec) -> Instance:
    """Build the utility matrix of a named instance family."""
    f = spec.family
    if f == "crumbs":
        return Instance.from_rows([[1, 2, 1], [1, 2, 1]])
    if f == "equit-lower-2":
        h = Fraction(1, 2)
        return Instance.from_rows([[h, 0, h, 0], [0, h, 0, h]])
    if f == "order-counterexample":
        m = spec.m if spec.m is not None else 6
        if m < 6:
            raise ArgumentError(f"order-counterexample requires m >= 6, got {m}")
        return Instance.from_rows([[0] * (m - 3) + [1, 1, 1], [1] * m])
    if f == "random":
        n, m = _need(spec, "n"), _need(spec, "m")
        if n < 1 or m < 0 or spec.denominator < 1:
            raise ArgumentError(f"random requires n >= 1, m >= 0, denominator >= 1; got n={n}, m={m}, D={spec.denominator}")
        rng = random.Random(spec.seed)
        d = spec.denominator
        return Instance.from_rows([[Fraction(rng.randint(0, d), d) for _ in range(m)] for _ in range(n)])
    n = _need(spec, "n")
    if f == "unit-items":
        if n < 2:
            raise ArgumentError(f"unit-items requires n >= 2, got {n}")
        return Instance.from_rows([[1] * (n - 1)] * n)
    if f == "prop-lower":
        if n < 1:
            raise ArgumentError(f"prop-lower requires n >= 1, got {n}")
        return Instance.from_rows(_prop_lower(n, _epsilon(spec, Fraction(1, n), "1/n")))
    if f == "equit-lower":
        if n < 3:
            raise ArgumentError(f"equit-lower requires n >= 3, got {n}")
        return Instance.from_rows(_equit_lower(n, _epsilon(spec, Fraction(1, 2), "1/2")))
    if f == "ef-util-lower":
        if n < 1:
            raise ArgumentError(f"ef-util-lower requires n >= 1, got {n}")
        return Instance.from_rows(_ef_util_lower(n))
    if f == "ef-egal-lower":
        if n < 2:
            raise ArgumentError(f"ef-egal-lower requires n >= 2, got {n}")
        return Instance.from_rows(_ef_egal_lower(n, _epsilon(spec, Fraction(1, 2 * n), "1/(2n)")))
    raise ArgumentError(f"unknown family {f!r}")


def constructed_allocation(spec: FamilySpec) -> Optional[ContiguousAllocation]:
    """The high-welfare contiguous allocation exhibited alongside a lower-bound family."""
    f, n = spec.family, spec.n
    if f == "prop-lower":
        # agent n takes item 1, agent i takes items 2i and 2i+1
        return ContiguousAllocation((n - 1,) + tuple(range(n - 1)), (0, 1) + tuple(2 * i + 1 for i in range(1, n)))
    if f == "equit-lower":
        return ContiguousAllocation((n - 1,) + tuple(range(n - 1)), tuple(range(n + 1)))
    if f == "equit-lower-2":
        return ContiguousAllocation((0, 1), (0, 3, 4))
    if f == "ef-util-lower":
        r = math.isqrt(n)
        order = tuple(range(n))
        bounds = [i * r for i in range(r)] + [n] * (n - r + 1)
        return ContiguousAllocation(order, tuple(bounds))
    if f == "ef-egal-lower":
        half = (n - 1) // 2
        blocks = [None] * n
        for i in range(1, half + 1):
            blocks[i - 1] = (2 * i - 1, 2 * i)
        for i in range(half + 1, n):
            j = 2 * n - 2 * i - 1
            blocks[i - 1] = (j - 1, j)
        blocks[n - 1] = (n - 1, 2 * n)
        return ContiguousAllocation.from_blocks(blocks)
    return None


@dataclass
class Check:
    name: str
    relation: str
    claimed: object
    observed: object

    @property
    def holds(self) -> bool:
        a, b = self.observed, self.claimed
        if a is None or b is None:
            return self.relation == "==" and a is b
        return {
            "==": a == b,
            "<=": a <= b,
            ">=": a >= b,
            "<": a < b,
            ">": a > b,
        }[self.relation]

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v)
            return v

        return {
            "name": self.name,
            "relation": self.relation,
            "claimed": enc(self.claimed),
            "observed": enc(self.observed),
            "holds": self.holds,
        }


@dataclass
class VerificationReport:
    spec: FamilySpec
    checks: list[Check] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    def add(self, name, relation, claimed, observed):
        self.checks.append(Check(name, relation, claimed, observed))

    def to_json(self) -> dict:
        s = self.spec
        return {
            "family": s.family,
            "n": s.n,
            "m": s.m,
            "epsilon": None if s.epsilon is None else str(s.epsilon),
            "seed": s.seed if s.family == "random" else None,
            "checks": [c.to_json() for c in self.checks],
            "holds": self.holds,
        }


def _fair_best(inst, kind, notion, budget):
    return optimal_welfare(inst, kind, Constraint(notion), CONTIGUOUS, budget=budget)


def verify_family_bound(spec: FamilySpec, *, budget=None) -> VerificationReport:
    """Compare the values claimed for a family against exhaustive search."""
    inst = generate(spec)
    rep = VerificationReport(spec)
    f, n, eps = spec.family, spec.n, spec.epsilon
    built = constructed_allocation(spec)
    if f == "prop-lower":
        rep.add("constructed utilitarian welfare", "==", n - 1 + Fraction(1, n) - n * eps, welfare(inst, built))
        rep.add("optimal utilitarian welfare", ">=", n - 1 + Fraction(1, n) - n * eps,
                optimal_welfare(inst, UTILITARIAN, budget=budget).value)
        rep.add("best proportional utilitarian welfare", "==", 1 + (n - 1) * eps,
                _fair_best(inst, UTILITARIAN, Notion.PROPORTIONAL, budget).value)
        pof = price_of_fairness(inst, Notion.PROPORTIONAL, UTILITARIAN, budget=budget)
        rep.add("utilitarian price of proportionality", ">=",
                (n - 1 + Fraction(1, n) - n * eps) / (1 + (n - 1) * eps), pof.ratio)
        rep.add("upper bound n - 1 + 1/n", "<=", n - 1 + Fraction(1, n), pof.ratio)
    elif f == "equit-lower-2":
        rep.add("optimal utilitarian welfare", "==", Fraction(3, 2), optimal_welfare(inst, UTILITARIAN, budget=budget).value)
        rep.add("best equitable utilitarian welfare", "==", Fraction(1),
                _fair_best(inst, UTILITARIAN, Notion.EQUITABLE, budget).value)
        rep.add("utilitarian price of equitability", "==", Fraction(3, 2),
                price_of_fairness(inst, Notion.EQUITABLE, UTILITARIAN, budget=budget).ratio)
        rep.add("egalitarian price of equitability", "==", Fraction(1),
                price_of_fairness(inst, Notion.EQUITABLE, EGALITARIAN, budget=budget).ratio)
    elif f == "equit-lower":
        rep.add("constructed utilitarian welfare", "==", n - (n + 1) * eps, welfare(inst, built))
        rep.add("constructed egalitarian welfare", "==", 1 - 2 * eps, welfare(inst, built, EGALITARIAN))
        rep.add("best equitable utilitarian welfare", "==", n * eps,
                _fair_best(inst, UTILITARIAN, Notion.EQUITABLE, budget).value)
        rep.add("best equitable egalitarian welfare", "==", eps,
                _fair_best(inst, EGALITARIAN, Notion.EQUITABLE, budget).value)
        rep.add("utilitarian price of equitability", ">=", (n - (n + 1) * eps) / (n * eps),
                price_of_fairness(inst, Notion.EQUITABLE, UTILITARIAN, budget=budget).ratio)
        rep.add("egalitarian price of equitability", ">=", (1 - 2 * eps) / eps,
                price_of_fairness(inst, Notion.EQUITABLE, EGALITARIAN, budget=budget).ratio)
    elif f == "ef-util-lower":
        r = math.isqrt(n)
        best = _fair_best(inst, UTILITARIAN, Notion.ENVY_FREE, budget)
        rep.add("constructed utilitarian welfare", "==", Fraction(r), welfare(inst, built))
        rep.add("envy-free contiguous allocation exists", "==", True, best.feasible)
        rep.add("best envy-free utilitarian welfare", "<=", 2 - Fraction(r, n), best.value)
        every_single = all(
            all(e - s == 1 for s, e in alloc.blocks)
            for alloc in enumerate_contiguous(inst, budget=budget)
            if max_envy(inst, alloc) <= 0
        )
        rep.add("every envy-free allocation gives one item each", "==", True, every_single)
        pof = price_of_fairness(inst, Notion.ENVY_FREE, UTILITARIAN, budget=budget)
        rep.add("utilitarian price of envy-freeness", ">", Fraction(r, 2), pof.ratio)
    elif f == "ef-egal-lower":
        witness = ContiguousAllocation(tuple(range(n)), tuple(range(0, 2 * n + 1, 2)))
        best = _fair_best(inst, EGALITARIAN, Notion.ENVY_FREE, budget)
        rep.add("constructed egalitarian welfare", "==", Fraction(1, 2) - eps, welfare(inst, built, EGALITARIAN))
        rep.add("pairs allocation is envy-free", "<=", Fraction(0), max_envy(inst, witness))
        rep.add("best envy-free egalitarian welfare", "<=", Fraction(1, n), best.value)
        pof = price_of_fairness(inst, Notion.ENVY_FREE, EGALITARIAN, budget=budget)
        rep.add("egalitarian price of envy-freeness", ">=", (Fraction(1, 2) - eps) * n, pof.ratio)
        rep.add("upper bound n/2", "<=", Fraction(n, 2), pof.ratio)
    elif f == "crumbs":
        for notion, claimed in ((Notion.PROPORTIONAL, 1), (Notion.ENVY_FREE, 2), (Notion.EQUITABLE, 2)):
            rep.add(f"min contiguous {notion.value} epsilon", "==", Fraction(claimed),
                    min_epsilon(inst, notion, CONTIGUOUS, budget=budget).value)
            rep.add(f"min general {notion.value} epsilon", "==", Fraction(0),
                    min_epsilon(inst, notion, GENERAL, budget=budget).value)
    elif f == "unit-items":
        rep.add("min general proportional epsilon", "==", Fraction(n - 1, n) * u_max(inst),
                min_epsilon(inst, Notion.PROPORTIONAL, GENERAL, budget=budget).value)
        rep.add("min contiguous proportional epsilon", "==", Fraction(n - 1, n) * u_max(inst),
                min_epsilon(inst, Notion.PROPORTIONAL, CONTIGUOUS, budget=budget).value)
    elif f == "order-counterexample":
        umax = u_max(inst)
        # agent 1 on the left, agent 2 on the right
        worst = min(
            report(inst, alloc).prop_deficit
            for alloc in enumerate_contiguous(inst, ordering=(0, 1), budget=budget)
        )
        rep.add("least deficit with agent 1 on the left", ">", umax / 2, worst)
        if inst.m >= 8:
            rep.add("least deficit with agent 1 on the left exceeds u_max", ">", umax, worst)
    elif f == "random":
        umax = u_max(inst)
        k = inst.n
        rep.add("min contiguous proportional epsilon", "<=", Fraction(k - 1, k) * umax,
                min_epsilon(inst, Notion.PROPORTIONAL, budget=budget).value)
        rep.add("min contiguous equitable epsilon", "<=", umax,
                min_epsilon(inst, Notion.EQUITABLE, budget=budget).value)
        rep.add("min contiguous envy-free epsilon", "<=", (1 if k == 2 else 2) * umax,
                min_epsilon(inst, Notion.ENVY_FREE, budget=budget).value)
    return rep
