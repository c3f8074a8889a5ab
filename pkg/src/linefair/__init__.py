"""Exact fair division of indivisible items on a line with contiguous bundles."""

from linefair.algorithms import (
    DivisibleAllocation,
    allocate_envy_free_two,
    allocate_equitable,
    allocate_proportional,
    allocate_round_robin,
    cut_and_choose,
    equitable_refine,
    max_egalitarian_fixed_order,
    round_divisible,
)
from linefair.core import (
    ContiguousAllocation,
    GeneralAllocation,
    Instance,
    agent_u_max,
    bundle_utility,
    contiguous_to_general,
    general_is_contiguous,
    normalize,
    u_max,
)
from linefair.errors import ArgumentError, CapacityError, NormalizationError, ParseError
from linefair.fairness import (
    FairnessReport,
    equitability_spread,
    max_envy,
    proportionality_deficit,
    report,
    welfare,
)
from linefair.oracle import Constraint, Notion, count_contiguous, enumerate_contiguous, min_epsilon, optimal_welfare
from linefair.pof import FamilySpec, generate, price_of_fairness, verify_family_bound

__version__ = "0.1.0"
