import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from linefair.algorithms import (
    DivisibleAllocation,
    allocate_envy_free_two,
    allocate_equitable,
    allocate_proportional,
    allocate_round_robin,
    cake_value,
    cut_and_choose,
    divisible_envy,
    equitable_refine,
    max_egalitarian_contiguous,
    max_egalitarian_fixed_order,
    move_cap,
    proportional_threshold,
    round_divisible,
    run_block_mover,
)
from linefair.core import ContiguousAllocation, Instance, agent_u_max, u_max
from linefair.errors import ArgumentError, CapacityError
from linefair.fairness import agent_envy, cross_values, equitability_spread, max_envy, own_values, report, welfare
from linefair.oracle import optimal_welfare
from linefair.pof import FamilySpec, generate

from _helpers import CRUMBS, SWAP2, TIGHT4, random_instance

UNIT3 = generate(FamilySpec("unit-items", n=3))
utility = st.fractions(min_value=0, max_value=10, max_denominator=12)


@st.composite
def instances(draw, min_n=1, max_n=4, max_m=8):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(0, max_m))
    return Instance.from_rows(draw(st.lists(st.lists(utility, min_size=m, max_size=m), min_size=n, max_size=n)))


# proportional sweep

def test_proportional_crumbs():
    alloc = allocate_proportional(CRUMBS)
    assert alloc.blocks == ((0, 1), (1, 3))
    assert proportional_threshold(CRUMBS, 0) == 1


def test_proportional_single_item_two_agents():
    alloc = allocate_proportional(Instance.from_rows([[1], [1]]))
    assert alloc.blocks == ((0, 0), (0, 1))


def test_proportional_unit_items_is_tight():
    alloc = allocate_proportional(UNIT3)
    assert [alloc.blocks[a] for a in range(3)] == [(0, 0), (0, 0), (0, 2)]
    r = report(UNIT3, alloc)
    assert r.prop_deficit == Fraction(2, 3) == Fraction(2, 3) * u_max(UNIT3)


@settings(max_examples=200, deadline=None)
@given(instances())
def test_proportional_guarantee(inst):
    alloc = allocate_proportional(inst)
    n = inst.n
    for i, v in enumerate(own_values(inst, alloc)):
        assert v >= inst.total(i) / n - Fraction(n - 1, n) * agent_u_max(inst, i)


# envy-free for two agents

def test_envy_free_two_examples():
    assert allocate_envy_free_two(CRUMBS).blocks == ((0, 1), (1, 3))
    assert agent_envy(CRUMBS, allocate_envy_free_two(CRUMBS))[0] == 2
    uniform = Instance.from_rows([[1] * 4] * 2)
    alloc = allocate_envy_free_two(uniform)
    assert alloc.blocks == ((0, 2), (2, 4))
    assert agent_envy(uniform, alloc) == [0, 0]
    single = Instance.from_rows([[1], [1]])
    assert agent_envy(single, allocate_envy_free_two(single))[0] == 1


def test_envy_free_two_rejects_other_n():
    with pytest.raises(ArgumentError):
        allocate_envy_free_two(UNIT3)


@settings(max_examples=200, deadline=None)
@given(instances(min_n=2, max_n=2))
def test_envy_free_two_guarantee(inst):
    envy = agent_envy(inst, allocate_envy_free_two(inst))
    assert all(envy[i] <= agent_u_max(inst, i) for i in range(2))


# block mover

def test_block_mover_swap_instance_stops_immediately():
    res = run_block_mover(SWAP2, (0, 1))
    assert res.allocation.blocks == ((0, 2), (2, 2))
    assert res.moves == 0
    assert equitability_spread(SWAP2, res.allocation) == 1 == u_max(SWAP2)


def test_block_mover_all_zero():
    inst = Instance.from_rows([[0, 0, 0]] * 3)
    alloc = allocate_equitable(inst, (2, 0, 1))
    assert alloc.order == (2, 0, 1) and alloc.bounds == (0, 3, 3, 3)


def test_block_mover_crumbs():
    alloc = allocate_equitable(CRUMBS, (0, 1))
    assert equitability_spread(CRUMBS, alloc) <= 2


def test_block_mover_rejects_bad_ordering():
    with pytest.raises(ArgumentError):
        allocate_equitable(CRUMBS, (0, 0))


@settings(max_examples=200, deadline=None)
@given(instances(), st.randoms(use_true_random=False))
def test_block_mover_guarantee(inst, rnd):
    order = list(range(inst.n))
    rnd.shuffle(order)
    res = run_block_mover(inst, order)
    assert res.allocation.order == tuple(order)
    assert equitability_spread(inst, res.allocation) <= u_max(inst)
    assert res.moves <= move_cap(inst.n, inst.m)
    for phase in res.phases:
        assert all(a < b for a, b in zip(phase, phase[1:]))


# fixed-order egalitarian optimum

def test_max_egalitarian_tight4():
    w, alloc = max_egalitarian_fixed_order(TIGHT4, (0, 1))
    assert w == Fraction(1, 2)
    assert welfare(TIGHT4, alloc, "egalitarian") == w


def test_max_egalitarian_swap_instance():
    w, alloc = max_egalitarian_fixed_order(SWAP2, (0, 1))
    assert w == 0


def test_max_egalitarian_single_agent():
    inst = Instance.from_rows([[1, 2, 3]])
    w, alloc = max_egalitarian_fixed_order(inst, (0,))
    assert w == 6 and alloc.blocks == ((0, 3),)


def test_max_egalitarian_matches_ordered_enumeration():
    rng = random.Random(3)
    for _ in range(150):
        n, m = rng.randint(1, 4), rng.randint(0, 7)
        inst = random_instance(rng, n, m, denominator=6)
        order = list(range(n))
        rng.shuffle(order)
        w, alloc = max_egalitarian_fixed_order(inst, order)
        truth = optimal_welfare(inst, "egalitarian", ordering=order)
        assert w == truth.value
        assert alloc.order == tuple(order)
        assert welfare(inst, alloc, "egalitarian") == w


# boundary-moving refinement

def test_refine_tight4():
    alloc = equitable_refine(TIGHT4)
    assert welfare(TIGHT4, alloc, "egalitarian") == Fraction(1, 2)
    assert equitability_spread(TIGHT4, alloc) <= u_max(TIGHT4)


def test_refine_single_agent():
    inst = Instance.from_rows([[1, 0, 4]])
    assert equitable_refine(inst).blocks == ((0, 3),)


def test_refine_swap_instance():
    alloc = equitable_refine(SWAP2)
    # w = 1: the order (2, 1) gives each agent its liked item
    assert max_egalitarian_contiguous(SWAP2)[0] == 1
    assert all(0 <= v <= 1 for v in own_values(SWAP2, alloc))


def test_refine_capacity_limit():
    inst = Instance.from_rows([[1]] * 9)
    with pytest.raises(CapacityError, match="n <= 8"):
        equitable_refine(inst)


def test_refine_matches_oracle():
    rng = random.Random(11)
    for _ in range(60):
        n, m = rng.randint(1, 4), rng.randint(0, 8)
        inst = random_instance(rng, n, m, denominator=5)
        alloc = equitable_refine(inst)
        vals = own_values(inst, alloc)
        w = optimal_welfare(inst, "egalitarian").value
        assert min(vals) == w
        assert max(vals) <= w + u_max(inst)


# rounding a divisible allocation

UNIFORM4 = Instance.from_rows([[1] * 4] * 2)


def test_round_interior_point():
    alloc = round_divisible(UNIFORM4, DivisibleAllocation((Fraction(5, 2),), (0, 1)))
    assert alloc.blocks == ((0, 2), (2, 4))


def test_round_boundary_point_goes_left():
    alloc = round_divisible(UNIFORM4, DivisibleAllocation((2,), (0, 1)))
    assert alloc.blocks == ((0, 2), (2, 4))


def test_round_all_cuts_at_zero():
    inst = Instance.from_rows([[1] * 4] * 3)
    alloc = round_divisible(inst, DivisibleAllocation((0, 0), (0, 1, 2)))
    assert alloc.blocks == ((0, 0), (0, 0), (0, 4))


def test_round_rejects_malformed_cuts():
    with pytest.raises(ArgumentError):
        round_divisible(UNIFORM4, DivisibleAllocation((5,), (0, 1)))
    with pytest.raises(ArgumentError):
        DivisibleAllocation((1, 2), (0, 1))
    inst = Instance.from_rows([[1] * 4] * 3)
    with pytest.raises(ArgumentError):
        round_divisible(inst, DivisibleAllocation((3, 1), (0, 1, 2)))


def test_cake_value_is_piecewise_uniform():
    assert cake_value(CRUMBS, 0, Fraction(1, 2), Fraction(3, 2)) == Fraction(1, 2) + 1
    assert cake_value(CRUMBS, 0, Fraction(0), Fraction(3)) == 4


def test_cut_and_choose_is_envy_free():
    rng = random.Random(2)
    for _ in range(200):
        inst = random_instance(rng, 2, rng.randint(0, 8), denominator=7)
        division = cut_and_choose(inst)
        assert max(max(row) for row in divisible_envy(inst, division)) <= 0


@st.composite
def divisions(draw):
    n = draw(st.integers(2, 4))
    m = draw(st.integers(1, 8))
    rows = draw(st.lists(st.lists(utility, min_size=m, max_size=m), min_size=n, max_size=n))
    cuts = sorted(draw(st.lists(st.fractions(min_value=0, max_value=m, max_denominator=6), min_size=n - 1, max_size=n - 1)))
    order = draw(st.permutations(range(n)))
    return Instance.from_rows(rows), DivisibleAllocation(tuple(cuts), tuple(order))


@settings(max_examples=300, deadline=None)
@given(divisions())
def test_rounding_loss_contract(case):
    inst, division = case
    rounded = round_divisible(inst, division)
    before = divisible_envy(inst, division)
    V = cross_values(inst, rounded)
    for i in range(inst.n):
        bound = 2 * agent_u_max(inst, i)
        for j in range(inst.n):
            after = V[i][j] - V[i][i]
            assert after <= before[i][j] + bound
            if bound > 0:
                assert after < before[i][j] + bound


def test_envy_free_division_rounds_within_twice_u_max():
    rng = random.Random(8)
    for _ in range(200):
        inst = random_instance(rng, 2, rng.randint(1, 8))
        alloc = round_divisible(inst, cut_and_choose(inst))
        envy = agent_envy(inst, alloc)
        assert all(envy[i] < 2 * agent_u_max(inst, i) or agent_u_max(inst, i) == 0 for i in range(2))


# round robin

def test_round_robin_disjoint_tastes():
    alloc = allocate_round_robin(Instance.from_rows([[1, 0], [0, 1]]))
    assert alloc.owners == (0, 1)
    assert agent_envy(Instance.from_rows([[1, 0], [0, 1]]), alloc) == [-1, -1]


def test_round_robin_unit_items():
    alloc = allocate_round_robin(UNIT3)
    assert alloc.owners == (0, 1)
    assert agent_envy(UNIT3, alloc)[2] == 1 == u_max(UNIT3)


def test_round_robin_all_zero():
    inst = Instance.from_rows([[0] * 5] * 2)
    alloc = allocate_round_robin(inst)
    assert alloc.owners == (0, 1, 0, 1, 0)
    r = report(inst, alloc)
    assert (r.prop_deficit, r.max_envy, r.equit_spread) == (0, 0, 0)


@settings(max_examples=200, deadline=None)
@given(instances(max_n=5, max_m=10))
def test_round_robin_envy_bound(inst):
    assert max(Fraction(0), max_envy(inst, allocate_round_robin(inst))) <= u_max(inst)
