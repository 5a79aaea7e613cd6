"""Constructive allocation algorithms: round-robin and the welfare-preserving
constructions for EF1, EFX and balancedness."""

from __future__ import annotations

import enum
import itertools
import math
import random
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from fairdiv.core import (
    Allocation,
    DimensionError,
    Instance,
    InvariantViolation,
    check_budget,
    default_budget,
    optimal_welfare,
    scale_rows,
    social_welfare,
)
from fairdiv.exact import ceil_sqrt, cmp_sqrt_log
from fairdiv.kernels import integer_matrix

Ordering = tuple[int, ...]

BUCKET_COEF = 65
SAMPLED_ORDERINGS = 2000


class TieRule(enum.Enum):
    LOWEST_INDEX = "lowest"
    ADVERSARIAL = "adversarial"


class BestOrdering(NamedTuple):
    order: Ordering
    welfare: Fraction
    exhaustive: bool


def _check_order(n: int, order) -> Ordering:
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise DimensionError(f"{order!r} is not an ordering of {n} agents")
    return order


def _preference_lists(inst: Instance) -> list[list[int]]:
    return [sorted(range(inst.m), key=lambda g: (-row[g], g)) for row in inst.utilities]


def _round_robin_lowest(inst: Instance, order: Ordering, prefs=None) -> Allocation:
    prefs = prefs or _preference_lists(inst)
    owner = [-1] * inst.m
    cursor = [0] * inst.n
    for t in range(inst.m):
        agent = order[t % inst.n]
        pref = prefs[agent]
        c = cursor[agent]
        while owner[pref[c]] != -1:
            c += 1
        owner[pref[c]] = agent
        cursor[agent] = c + 1
    return Allocation(tuple(owner))


def _round_robin_worst(inst: Instance, order: Ordering, budget: int) -> Allocation:
    """Worst-welfare outcome over every way of breaking ties between goods."""
    n, m = inst.n, inst.m
    memo: dict[tuple[frozenset, int], tuple[Fraction, tuple[int, ...]]] = {}

    def solve(remaining: frozenset, t: int):
        # returns (welfare of the suffix, owners of `remaining` in good order)
        if not remaining:
            return Fraction(0), ()
        key = (remaining, t)
        if key in memo:
            return memo[key]
        check_budget(len(memo) + 1, budget, "tie-resolution states")
        agent = order[t % n]
        row = inst.utilities[agent]
        top = max(row[g] for g in remaining)
        goods = sorted(remaining)
        best = None
        for g in goods:
            if row[g] != top:
                continue
            sub_sw, sub_owner = solve(remaining - {g}, t + 1)
            rest = [gg for gg in goods if gg != g]
            merged = dict(zip(rest, sub_owner))
            merged[g] = agent
            cand = (top + sub_sw, tuple(merged[gg] for gg in goods))
            if best is None or cand < best:
                best = cand
        memo[key] = best
        return best

    _, owner = solve(frozenset(range(m)), 0)
    return Allocation(owner)


def round_robin(inst: Instance, order=None, ties: TieRule = TieRule.LOWEST_INDEX, budget: int | None = None) -> Allocation:
    """Agents pick their favourite remaining good in turn, cycling through ``order``."""
    order = _check_order(inst.n, range(inst.n) if order is None else order)
    if ties is TieRule.ADVERSARIAL:
        return _round_robin_worst(inst, order, default_budget() if budget is None else budget)
    return _round_robin_lowest(inst, order)


def rr_outcomes(inst: Instance, ties: TieRule = TieRule.LOWEST_INDEX, budget: int | None = None) -> dict[Ordering, Allocation]:
    """Round-robin allocation for every one of the n! orderings."""
    check_budget(math.factorial(inst.n) * max(1, inst.m), budget, "round-robin picks")
    prefs = _preference_lists(inst)
    out = {}
    for order in itertools.permutations(range(inst.n)):
        if ties is TieRule.LOWEST_INDEX:
            out[order] = _round_robin_lowest(inst, order, prefs)
        else:
            out[order] = round_robin(inst, order, ties, budget)
    return out


def mean_rr_welfare(inst: Instance, ties: TieRule = TieRule.LOWEST_INDEX, budget: int | None = None) -> Fraction:
    outcomes = rr_outcomes(inst, ties, budget)
    return sum((social_welfare(inst, a) for a in outcomes.values()), Fraction(0)) / len(outcomes)


def best_rr_ordering(inst: Instance, budget: int | None = None, seed: int = 0) -> BestOrdering:
    """Ordering whose round-robin allocation has the highest welfare.

    Exhaustive over all n! orderings when they fit in ``budget``; otherwise the
    best of a seeded random sample, with ``exhaustive=False``.
    """
    budget = default_budget() if budget is None else budget
    prefs = _preference_lists(inst)
    if math.factorial(inst.n) <= budget:
        candidates = itertools.permutations(range(inst.n))
        exhaustive = True
    else:
        rng = random.Random(seed)
        samples = []
        for _ in range(min(budget, SAMPLED_ORDERINGS)):
            perm = list(range(inst.n))
            rng.shuffle(perm)
            samples.append(tuple(perm))
        candidates = sorted(set(samples))
        exhaustive = False
    best = None
    for order in candidates:
        sw = social_welfare(inst, _round_robin_lowest(inst, order, prefs))
        if best is None or sw > best[1]:
            best = (order, sw)
    return BestOrdering(best[0], best[1], exhaustive)


# --- two agents ----------------------------------------------------------------


def _require_two(inst: Instance) -> None:
    if inst.n != 2:
        raise DimensionError(f"this construction is for 2 agents, got {inst.n}")


def ef1_two_agents(inst: Instance) -> Allocation:
    """EF1 allocation for two agents with welfare at least sqrt(3)/2 of optimal.

    Goods are ordered by the ratio u1/u2 (goods only agent 1 values first,
    goods only agent 2 values last).  Agent 1 is the agent who is worse off in
    the optimum; she takes the shortest prefix, starting at her part of the
    optimum, after which she no longer envies the rest up to one good.
    """
    _require_two(inst)
    u = inst.utilities
    live = [g for g in range(inst.m) if u[0][g] or u[1][g]]
    dead = [g for g in range(inst.m) if not (u[0][g] or u[1][g])]

    mine = sum((u[0][g] for g in live if u[0][g] > u[1][g]), Fraction(0))
    theirs = sum((u[1][g] for g in live if u[0][g] <= u[1][g]), Fraction(0))
    first, second = (0, 1) if mine <= theirs else (1, 0)
    a, b = u[first], u[second]

    def key(g):
        if b[g] == 0:
            return (0, 0, g)
        if a[g] == 0:
            return (2, 0, g)
        return (1, -(a[g] / b[g]), g)

    goods = sorted(live, key=key)
    m = len(goods)
    s = 0
    while s < m and a[goods[s]] > b[goods[s]]:
        s += 1
    prefix = [Fraction(0)]
    for g in goods:
        prefix.append(prefix[-1] + a[g])
    total = prefix[-1]

    f = s
    # u_a(L(f)) < u_a(R(f + 2)), where R(f + 2) is everything after position f + 1
    while f < m and prefix[f] < total - prefix[min(m, f + 1)]:
        f += 1
    if f >= m:
        raise InvariantViolation("EF1 split point ran past the last good")

    owner = [second] * inst.m
    for g in goods[:f]:
        owner[g] = first
    for g in dead:
        owner[g] = second
    return Allocation(tuple(owner))


def _subset_sums(values: list[int], dtype) -> np.ndarray:
    sums = np.zeros(1, dtype=dtype)
    for v in values:
        sums = np.concatenate([sums, sums + v])
    return sums


def most_equal_split(values: list[Fraction], budget: int | None = None) -> tuple[list[int], list[int], Fraction]:
    """Split goods into two bundles as equally as possible for one valuation.

    Returns ``(first, second, x)`` with ``x`` the larger bundle value (on
    ``first``); goods of value zero are placed in ``second``.  Among equally
    good splits the one with the smallest subset bitmask is used.
    """
    m = len(values)
    check_budget(2**m, budget, "bipartitions")
    scale, rows = scale_rows([values])
    A = integer_matrix(scale, rows)
    sums = _subset_sums(list(A[0]), A.dtype)
    total = int(scale)
    gap = np.abs(2 * sums - total)
    mask = int(np.argmin(gap))
    side = [g for g in range(m) if mask >> g & 1]
    other = [g for g in range(m) if not mask >> g & 1]
    v_side = sum((values[g] for g in side), Fraction(0))
    v_other = sum((values[g] for g in other), Fraction(0))
    first, second = (side, other) if v_side >= v_other else (other, side)
    zeros = [g for g in first if values[g] == 0]
    first = [g for g in first if values[g] != 0]
    second = sorted(second + zeros)
    return first, second, max(v_side, v_other)


def efx_two_agents(inst: Instance, budget: int | None = None) -> Allocation:
    """EFX allocation for two agents with welfare at least 1.

    The agent whose most-equal split is more balanced cuts; the other agent
    takes the bundle she prefers, ties resolved towards welfare.
    """
    _require_two(inst)
    splits = [most_equal_split(list(inst.utilities[i]), budget) for i in (0, 1)]
    cutter = 0 if splits[1][2] >= splits[0][2] else 1
    chooser = 1 - cutter
    first, second, _ = splits[cutter]
    z = inst.value(chooser, first)
    owner = [0] * inst.m
    if 2 * z <= 1:
        mine, theirs = first, second
    else:
        mine, theirs = second, first
    for g in mine:
        owner[g] = cutter
    for g in theirs:
        owner[g] = chooser
    return Allocation(tuple(owner))


def balanced_two_agents(inst: Instance) -> Allocation:
    """Balanced allocation for two agents with welfare at least 3/4 of optimal."""
    _require_two(inst)
    m = inst.m
    u = inst.utilities
    padded = m + (m % 2)
    diff = [u[0][g] - u[1][g] for g in range(m)] + [Fraction(0)] * (padded - m)
    nonneg = sum(1 for d in diff if d >= 0)
    if 2 * nonneg >= padded:
        first = 0
    else:
        first = 1
        diff = [-d for d in diff]
    goods = sorted(range(padded), key=lambda g: (-diff[g], g))
    owner = [1 - first] * m
    for g in goods[: padded // 2]:
        if g < m:
            owner[g] = first
    return Allocation(tuple(owner))


# --- general n -----------------------------------------------------------------


def _top_goods(inst: Instance, agent: int, goods: list[int], k: int) -> list[int]:
    row = inst.utilities[agent]
    return sorted(goods, key=lambda g: (-row[g], g))[:k]


def keep_and_rebalance(inst: Instance) -> Allocation:
    """Balanced allocation built from the utilitarian optimum.

    Agents holding few goods in the optimum keep their most valuable ones
    (ceil(m / 2n) of them if m >= n, else one); everything else is dealt to
    the currently smallest bundles.
    """
    n, m = inst.n, inst.m
    _, opt = optimal_welfare(inst)
    bundles = opt.bundles(n)
    if m >= n:
        heavy = [n * len(b) ** 2 >= m * m for b in bundles]
        keep = -(-m // (2 * n))
    else:
        heavy = [len(b) ** 2 >= n for b in bundles]
        keep = 1
    owner = [-1] * m
    sizes = [0] * n
    for i, b in enumerate(bundles):
        if heavy[i]:
            continue
        for g in _top_goods(inst, i, b, keep):
            owner[g] = i
            sizes[i] += 1
    for g in range(m):
        if owner[g] == -1:
            i = min(range(n), key=lambda a: (sizes[a], a))
            owner[g] = i
            sizes[i] += 1
    return Allocation(tuple(owner))


def balanced_high_welfare(inst: Instance, budget: int | None = None) -> Allocation:
    """Balanced allocation with welfare at least OPT / (4 sqrt(n))."""
    opt, _ = optimal_welfare(inst)
    if opt * opt <= 16 * inst.n:
        best = best_rr_ordering(inst, budget)
        return _round_robin_lowest(inst, best.order)
    return keep_and_rebalance(inst)


def _bucket(u: Fraction, r: int) -> int:
    if u == 0:
        return r
    level = 0
    while level < r and u * 2 ** (level + 1) <= 1:
        level += 1
    return min(level, r)


def log_bucket_ordering(inst: Instance) -> Ordering:
    """Ordering that lets many agents grab a good from the heaviest value class.

    Goods each agent receives in the utilitarian optimum are grouped by value
    into classes (2^-l-1, 2^-l]; the class with the largest total is chosen.
    If it holds more than 2n goods any ordering works (identity); otherwise
    the first ceil(4 sqrt(n)) positions go to agents whose class goods have not
    been taken by the agents placed before them.
    """
    n, m = inst.n, inst.m
    _, opt = optimal_welfare(inst)
    bundles = opt.bundles(n)
    r = 0
    while 4**r < m * m * n:
        r += 1
    levels = range(r) if r > 0 else range(1)
    classes = {
        lvl: [[g for g in bundles[i] if _bucket(inst.utilities[i][g], r) == lvl] for i in range(n)]
        for lvl in levels
    }
    weight = {lvl: sum(inst.value(i, classes[lvl][i]) for i in range(n)) for lvl in levels}
    star = min(levels, key=lambda lvl: (-weight[lvl], lvl))
    chosen = classes[star]
    if sum(len(c) for c in chosen) > 2 * n:
        return tuple(range(n))

    steps = min(n, ceil_sqrt(16 * n))
    prefs = _preference_lists(inst)
    order: list[int] = []
    taken: set[int] = set()
    for _ in range(steps):
        cand = next(
            (i for i in range(n) if i not in order and any(g not in taken for g in chosen[i])),
            None,
        )
        if cand is None:
            break
        order.append(cand)
        taken.add(next(g for g in prefs[cand] if g not in taken))
    order += [i for i in range(n) if i not in order]
    return tuple(order)


def bucketed_threshold_branch(inst: Instance, opt: Fraction) -> bool:
    """True when OPT <= 65 sqrt(n) log2(mn), i.e. the best-ordering branch applies.

    An undecidable comparison falls through to the constructive branch.
    """
    return cmp_sqrt_log(opt, inst.n, inst.n * inst.m, BUCKET_COEF) in (-1, 0)


def bucketed_rr_ordering(inst: Instance, budget: int | None = None) -> tuple[Ordering, Allocation]:
    """Round-robin ordering with welfare at least OPT / (65 sqrt(n) log2(mn))."""
    opt, _ = optimal_welfare(inst)
    if bucketed_threshold_branch(inst, opt):
        order = best_rr_ordering(inst, budget).order
    else:
        order = log_bucket_ordering(inst)
    return order, _round_robin_lowest(inst, order)


def bucketed_guarantee_holds(inst: Instance, alloc: Allocation) -> bool:
    """65 sqrt(n) log2(mn) * SW >= OPT, decided exactly."""
    opt, _ = optimal_welfare(inst)
    sw = social_welfare(inst, alloc)
    if inst.n * inst.m == 1:
        # log2(1) = 0; the only allocation is optimal
        return sw == opt
    if sw == 0:
        return opt == 0
    return cmp_sqrt_log(opt / sw, inst.n, inst.n * inst.m, BUCKET_COEF) in (-1, 0)
