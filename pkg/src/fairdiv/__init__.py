"""Exact price of fairness for indivisible goods."""

from fairdiv.checkers import PropertyWitness, is_balanced, is_ef1, is_efx, is_pareto_optimal
from fairdiv.constructive import (
    TieRule,
    balanced_high_welfare,
    balanced_two_agents,
    best_rr_ordering,
    bucketed_rr_ordering,
    ef1_two_agents,
    efx_two_agents,
    round_robin,
)
from fairdiv.core import (
    Allocation,
    BudgetExceeded,
    Instance,
    optimal_welfare,
    parse_allocation,
    parse_instance,
    social_welfare,
    utility_vector,
)
from fairdiv.pof import FixtureSpec, PriceReport, adversarial_search, fixture_expected_prices, generate_fixture, price_of
from fairdiv.solvers import (
    NashValue,
    PropertyId,
    cycle_swap_improvement,
    enumerate_allocations,
    fair_set,
    leximin_allocations,
    mew_allocations,
    mnw_allocations,
)

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "BudgetExceeded",
    "FixtureSpec",
    "Instance",
    "NashValue",
    "PriceReport",
    "PropertyId",
    "PropertyWitness",
    "TieRule",
    "adversarial_search",
    "balanced_high_welfare",
    "balanced_two_agents",
    "best_rr_ordering",
    "bucketed_rr_ordering",
    "cycle_swap_improvement",
    "ef1_two_agents",
    "efx_two_agents",
    "enumerate_allocations",
    "fair_set",
    "fixture_expected_prices",
    "generate_fixture",
    "is_balanced",
    "is_ef1",
    "is_efx",
    "is_pareto_optimal",
    "leximin_allocations",
    "mew_allocations",
    "mnw_allocations",
    "optimal_welfare",
    "parse_allocation",
    "parse_instance",
    "price_of",
    "round_robin",
    "social_welfare",
    "utility_vector",
]
