"""Acceptance criteria, one test each. All comparisons are exact.

Run ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or ``python tests/test_acceptance.py``.
"""

import itertools
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from linefair.algorithms import (  # noqa: E402
    allocate_envy_free_two,
    allocate_proportional,
    equitable_refine,
    move_cap,
    run_block_mover,
)
from linefair.core import ContiguousAllocation, agent_u_max, general_is_contiguous, u_max  # noqa: E402
from linefair.fairness import agent_envy, own_values, report, welfare  # noqa: E402
from linefair.oracle import (  # noqa: E402
    CONTIGUOUS,
    GENERAL,
    Constraint,
    count_contiguous,
    enumerate_contiguous,
    min_epsilon,
    optimal_welfare,
)
from linefair.pof import DEFINED, UNDEFINED, FamilySpec, constructed_allocation, generate, price_of_fairness  # noqa: E402

from _helpers import binary_instance, naive_contiguous_owner_maps, random_contiguous, random_general, random_instance  # noqa: E402

RESULTS: list[tuple[str, bool, str]] = []


def record(name: str, ok: bool, detail: str = ""):
    RESULTS.append((name, ok, detail))
    print(f"[{'PASS' if ok else 'FAIL'}] {name}{': ' + detail if detail else ''}")
    assert ok, detail


def seeded_instances(count: int, seed: int, n_range, m_range, denominator=100):
    rng = random.Random(seed)
    return [random_instance(rng, rng.randint(*n_range), rng.randint(*m_range), denominator) for _ in range(count)]


SWEEP_SET = seeded_instances(1000, 1, (2, 6), (1, 20))


def test_c01_proportional_sweep():
    bad = 0
    for inst in SWEEP_SET:
        alloc = allocate_proportional(inst)
        n = inst.n
        own = own_values(inst, alloc)
        ok = all(own[i] >= inst.total(i) / n - Fraction(n - 1, n) * agent_u_max(inst, i) for i in range(n))
        ok = ok and general_is_contiguous(alloc.to_general()) is not None
        bad += not ok
    record("C1 proportional sweep bound", bad == 0, f"{len(SWEEP_SET)} instances, {bad} violations")


def test_c02_block_mover():
    rng = random.Random(2)
    runs = bad = 0
    for inst in SWEEP_SET:
        for _ in range(3):
            order = list(range(inst.n))
            rng.shuffle(order)
            res = run_block_mover(inst, order)
            a = res.allocation
            vals = own_values(inst, a)
            ok = (
                max(vals) - min(vals) <= u_max(inst)
                and a.order == tuple(order)
                and res.moves <= move_cap(inst.n, inst.m)
                and all(x < y for phase in res.phases for x, y in zip(phase, phase[1:]))
            )
            runs += 1
            bad += not ok
    record("C2 block mover spread/order/cap/potential", bad == 0, f"{runs} runs, {bad} violations")


def test_c03_envy_free_two():
    bad = 0
    for inst in seeded_instances(1000, 3, (2, 2), (0, 20)):
        envy = agent_envy(inst, allocate_envy_free_two(inst))
        bad += any(envy[i] > agent_u_max(inst, i) for i in range(2))
    record("C3 two-agent envy <= own u_max", bad == 0, f"1000 instances, {bad} violations")


def _binary_envy_witness(inst, x):
    for alloc in enumerate_contiguous(inst):
        envy = agent_envy(inst, alloc)
        if all(envy[i] <= x[i] for i in range(inst.n)):
            return True
    return False


def test_c04_envy_free_general_via_oracle():
    bad = 0
    for inst in seeded_instances(200, 4, (3, 4), (4, 10)):
        bad += min_epsilon(inst, "envy-free").value > 2 * u_max(inst)
    rng = random.Random(44)
    bad_binary = 0
    for _ in range(200):
        inst = binary_instance(rng, rng.randint(3, 4), rng.randint(4, 10))
        x = [agent_u_max(inst, i) for i in range(inst.n)]
        ok = min_epsilon(inst, "envy-free").value <= max(x) and _binary_envy_witness(inst, x)
        bad_binary += not ok
    record(
        "C4 min contiguous envy <= 2 u_max; binary <= x_i",
        bad == 0 and bad_binary == 0,
        f"200 random ({bad} violations), 200 binary ({bad_binary} violations)",
    )


def test_c05_refine_vs_oracle():
    bad = 0
    for inst in seeded_instances(200, 5, (1, 4), (0, 10)):
        alloc = equitable_refine(inst)
        vals = own_values(inst, alloc)
        w = optimal_welfare(inst, "egalitarian", None, CONTIGUOUS).value
        bad += not (max(vals) - min(vals) <= u_max(inst) and min(vals) == w)
    record("C5 refine: spread <= u_max and egalitarian optimum", bad == 0, f"200 instances, {bad} violations")


def test_c06_price_of_proportionality_family():
    lines = []
    ok = True
    for n in (2, 3, 4):
        for eps in (Fraction(1, 10), Fraction(1, 100)):
            inst = generate(FamilySpec("prop-lower", n=n, epsilon=eps))
            fair = optimal_welfare(inst, "utilitarian", Constraint("proportional")).value
            best = optimal_welfare(inst, "utilitarian").value
            good = fair == 1 + (n - 1) * eps and best >= n - 1 + Fraction(1, n) - n * eps
            ok &= good
            lines.append(f"n={n} eps={eps}: fair={fair} opt={best}")
    record("C6 prop-lower exact values", ok, "; ".join(lines))


def test_c07_price_of_equitability():
    tight = generate(FamilySpec("equit-lower-2"))
    opt = optimal_welfare(tight, "utilitarian").value
    fair = optimal_welfare(tight, "utilitarian", Constraint("equitable")).value
    ratio = price_of_fairness(tight, "equitable", "utilitarian").ratio
    ok = (opt, fair, ratio) == (Fraction(3, 2), 1, Fraction(3, 2))
    lines = [f"m=4: opt={opt} fair={fair} ratio={ratio}"]
    for n in (3, 4):
        ratios = [
            price_of_fairness(generate(FamilySpec("equit-lower", n=n, epsilon=eps)), "equitable", "utilitarian").ratio
            for eps in (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000))
        ]
        ok &= ratios[1] > 10 and ratios[0] < ratios[1] < ratios[2]
        lines.append(f"n={n}: ratios {', '.join(str(r) for r in ratios)}")
    record("C7 equitability prices", ok, "; ".join(lines))


def test_c08_envy_free_utilitarian_n4():
    spec = FamilySpec("ef-util-lower", n=4)
    inst = generate(spec)
    built = welfare(inst, constructed_allocation(spec))
    fair = optimal_welfare(inst, "utilitarian", Constraint("envy-free"))
    ratio = price_of_fairness(inst, "envy-free", "utilitarian").ratio
    r = math.isqrt(4)
    ok = built == 2 and fair.feasible and fair.value <= Fraction(3, 2) and ratio > Fraction(r, 2)
    record("C8 ef-util-lower n=4", ok, f"constructed={built} best envy-free={fair.value} ratio={ratio}")


def test_c09_egalitarian_price_of_proportionality():
    rng = random.Random(9)
    seen = bad = 0
    while seen < 200:
        inst = random_instance(rng, rng.randint(2, 4), rng.randint(1, 8))
        if any(inst.total(i) == 0 for i in range(inst.n)):
            continue
        res = price_of_fairness(inst, "proportional", "egalitarian")
        if res.status == UNDEFINED:
            continue
        seen += 1
        bad += not (res.status == DEFINED and res.ratio == 1)
    record("C9 egalitarian price of proportionality = 1", bad == 0, f"{seen} instances, {bad} violations")


def test_c10_envy_free_egalitarian_n3():
    eps = Fraction(1, 10)
    inst = generate(FamilySpec("ef-egal-lower", n=3, epsilon=eps))
    best = optimal_welfare(inst, "egalitarian").value
    witnesses = [a for a in enumerate_contiguous(inst) if welfare(inst, a, "egalitarian") == Fraction(2, 5)]
    ef = [welfare(inst, a, "egalitarian") for a in enumerate_contiguous(inst) if report(inst, a).max_envy <= 0]
    ok = bool(witnesses) and bool(ef) and max(ef) <= Fraction(1, 3)
    record("C10 ef-egal-lower n=3", ok, f"allocations at 2/5: {len(witnesses)}, best overall {best}, best envy-free {max(ef)}")


def test_c11_proposition_one():
    rng = random.Random(11)
    bad = bad_two = 0
    for k in range(10_000):
        n, m = rng.randint(1, 5), rng.randint(0, 8)
        inst = random_instance(rng, n, m, denominator=rng.choice((1, 6, 100)))
        alloc = random_contiguous(rng, n, m) if k % 2 else random_general(rng, n, m)
        r = report(inst, alloc)
        envy = max(Fraction(0), r.max_envy)
        bad += r.prop_deficit > envy
        if n == 2:
            bad_two += envy > 2 * r.prop_deficit
    record("C11 deficit <= envy; n=2 envy <= 2 deficit", bad == 0 and bad_two == 0, f"10000 pairs, {bad}+{bad_two} violations")


def test_c12_tightness_examples():
    crumbs = generate(FamilySpec("crumbs"))
    contiguous = tuple(min_epsilon(crumbs, nt, CONTIGUOUS).value for nt in ("proportional", "envy-free", "equitable"))
    general = tuple(min_epsilon(crumbs, nt, GENERAL).value for nt in ("proportional", "envy-free", "equitable"))
    unit = generate(FamilySpec("unit-items", n=3))
    ex2 = min_epsilon(unit, "proportional", GENERAL).value
    ok = contiguous == (1, 2, 2) and general == (0, 0, 0) and ex2 == Fraction(2, 3) == Fraction(2, 3) * u_max(unit)
    record(
        "C12 crumbs and unit-items minima",
        ok,
        f"contiguous {tuple(map(str, contiguous))}, general {tuple(map(str, general))}, unit-items n=3 {ex2}",
    )


def test_c13_counting():
    ok = count_contiguous(2, 3) == 6
    checked = 0
    for n in range(1, 4):
        for m in range(0, 7):
            inst = generate(FamilySpec("random", n=n, m=m, seed=n * 10 + m))
            owners = [a.owners() for a in enumerate_contiguous(inst)]
            ok &= len(owners) == len(set(owners)) == count_contiguous(n, m)
            ok &= set(owners) == naive_contiguous_owner_maps(n, m)
            checked += 1
    record("C13 counting and exactly-once enumeration", ok, f"count(2,3)={count_contiguous(2, 3)}, {checked} (n, m) pairs")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
