"""Exhaustive enumeration, welfare maximizers and fair sets.

:class:`AllocationSpace` materializes the scaled utility vector of all n**m
allocations through the kernels; every maximizer and property set is a
boolean mask over that table.  :func:`enumerate_allocations` is the generic
(slow, exact) visitor engine for ad-hoc reductions.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Protocol

import numpy as np

from fairdiv import kernels
from fairdiv.constructive import TieRule, rr_outcomes
from fairdiv.core import (
    Allocation,
    Instance,
    InvariantViolation,
    allocation_at,
    allocation_index,
    check_budget,
    social_welfare,
    utility_vector,
)


class PropertyId(enum.Enum):
    EF1 = "EF1"
    EFX = "EFX"
    BAL = "BAL"
    PO = "PO"
    RR = "RR"
    MNW = "MNW"
    MEW = "MEW"
    LEX = "LEX"

    @classmethod
    def parse(cls, text: str) -> "PropertyId":
        key = text.strip().upper()
        aliases = {"LEXIMIN": "LEX", "BALANCED": "BAL"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown property {text!r}") from None


@dataclass(frozen=True, order=True)
class NashValue:
    """Nash welfare with the zero rule: more positive agents first, then their product."""

    positive_count: int
    product: Fraction

    @classmethod
    def of(cls, utilities) -> "NashValue":
        positive = [u for u in utilities if u > 0]
        return cls(len(positive), math.prod(positive, start=Fraction(1)))


# --- generic visitor engine ------------------------------------------------------


class Reduction(Protocol):
    """Fold over allocations; ``combine`` must be associative and commutative."""

    def initial(self) -> Any: ...

    def visit(self, acc: Any, alloc: Allocation, utilities: tuple[Fraction, ...]) -> Any: ...

    def combine(self, left: Any, right: Any) -> Any: ...


class CountAllocations:
    def initial(self):
        return 0

    def visit(self, acc, alloc, utilities):
        return acc + 1

    def combine(self, left, right):
        return left + right


class MaxWelfare:
    """Best (welfare, owner vector); ties go to the lexicographically smallest owner."""

    def initial(self):
        return None

    def visit(self, acc, alloc, utilities):
        return self.combine(acc, (sum(utilities, Fraction(0)), alloc.owner))

    def combine(self, left, right):
        if left is None or right is None:
            return left if right is None else right
        return min(left, right, key=lambda t: (-t[0], t[1]))


def enumerate_allocations(inst: Instance, reduction: Reduction, budget: int | None = None, workers: int = 1):
    """Fold ``reduction`` over all n**m allocations, split into ``workers`` index ranges."""
    n, m = inst.n, inst.m
    total = n**m
    check_budget(total, budget)

    def fold(lo: int, hi: int):
        acc = reduction.initial()
        for k in range(lo, hi):
            alloc = allocation_at(k, n, m)
            acc = reduction.visit(acc, alloc, utility_vector(inst, alloc))
        return acc

    spans = kernels._ranges(total, workers)
    if len(spans) <= 1:
        return fold(0, total)
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        parts = list(pool.map(lambda span: fold(*span), spans))
    acc = parts[0]
    for part in parts[1:]:
        acc = reduction.combine(acc, part)
    return acc


# --- vectorized space ---------------------------------------------------------------


def _unique_rows(table: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if table.dtype != object:
        uniq, inverse = np.unique(table, axis=0, return_inverse=True)
        return uniq, inverse.reshape(-1)
    rows = [tuple(r) for r in table]
    distinct = sorted(set(rows))
    pos = {r: k for k, r in enumerate(distinct)}
    uniq = np.empty((len(distinct), table.shape[1]), dtype=object)
    for k, r in enumerate(distinct):
        uniq[k, :] = r
    return uniq, np.array([pos[r] for r in rows], dtype=np.int64)


class AllocationSpace:
    """All allocations of an instance with their scaled utility vectors.

    ``table[k]`` holds ``scale * u_i(M_i)`` for allocation number ``k``
    (lexicographic order of owner vectors).
    """

    def __init__(self, inst: Instance, workers: int = 1):
        self.inst = inst
        self.workers = workers
        self.scale, rows = inst.scaled()
        self.matrix = kernels.integer_matrix(self.scale, rows)
        self.table = kernels.utility_table(self.matrix, workers)

    def __len__(self) -> int:
        return self.table.shape[0]

    def allocation(self, k: int) -> Allocation:
        return allocation_at(int(k), self.inst.n, self.inst.m)

    def index(self, alloc: Allocation) -> int:
        return allocation_index(alloc, self.inst.n)

    def fraction(self, scaled) -> Fraction:
        return Fraction(int(scaled), self.scale)

    @cached_property
    def welfare(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @cached_property
    def _flags(self):
        return kernels.envy_flags(self.matrix, self.workers)

    @cached_property
    def _unique(self):
        return _unique_rows(self.table)

    def ef1_mask(self) -> np.ndarray:
        return self._flags[0]

    def efx_mask(self) -> np.ndarray:
        return self._flags[1]

    def balanced_mask(self) -> np.ndarray:
        return self._flags[2]

    def po_mask(self) -> np.ndarray:
        uniq, inverse = self._unique
        return kernels.pareto_mask(uniq)[inverse]

    def mew_mask(self) -> np.ndarray:
        mins = self.table.min(axis=1)
        return mins == mins.max()

    def leximin_mask(self) -> np.ndarray:
        ranked = np.sort(self.table, axis=1)
        mask = np.ones(len(self), dtype=bool)
        for col in range(ranked.shape[1]):
            column = ranked[:, col]
            best = column[mask].max()
            mask &= np.asarray(column == best, dtype=bool)
        return mask

    def mnw_mask(self) -> np.ndarray:
        uniq, inverse = self._unique
        positive = np.asarray(uniq > 0, dtype=bool).sum(axis=1)
        top = positive.max()
        best_rows, best = [], None
        for k in np.flatnonzero(positive == top):
            prod = math.prod(int(v) for v in uniq[k] if v > 0)
            if best is None or prod > best:
                best_rows, best = [k], prod
            elif prod == best:
                best_rows.append(k)
        chosen = np.zeros(len(uniq), dtype=bool)
        chosen[best_rows] = True
        return chosen[inverse]

    def nash_value(self, k: int) -> NashValue:
        return NashValue.of(self.fraction(v) for v in self.table[k])

    def mask(self, prop: PropertyId) -> np.ndarray:
        getter = {
            PropertyId.EF1: self.ef1_mask,
            PropertyId.EFX: self.efx_mask,
            PropertyId.BAL: self.balanced_mask,
            PropertyId.PO: self.po_mask,
            PropertyId.MNW: self.mnw_mask,
            PropertyId.MEW: self.mew_mask,
            PropertyId.LEX: self.leximin_mask,
        }[prop]
        return np.asarray(getter(), dtype=bool)

    def allocations(self, mask: np.ndarray) -> list[Allocation]:
        return [self.allocation(k) for k in np.flatnonzero(mask)]


@lru_cache(maxsize=8)
def _cached_space(inst: Instance, workers: int) -> AllocationSpace:
    return AllocationSpace(inst, workers)


def allocation_space(inst: Instance, budget: int | None = None, workers: int = 1) -> AllocationSpace:
    check_budget(inst.n**inst.m, budget)
    return _cached_space(inst, workers)


def mnw_allocations(inst: Instance, budget: int | None = None, workers: int = 1) -> list[Allocation]:
    space = allocation_space(inst, budget, workers)
    return space.allocations(space.mask(PropertyId.MNW))


def mew_allocations(inst: Instance, budget: int | None = None, workers: int = 1) -> list[Allocation]:
    space = allocation_space(inst, budget, workers)
    return space.allocations(space.mask(PropertyId.MEW))


def leximin_allocations(inst: Instance, budget: int | None = None, workers: int = 1) -> list[Allocation]:
    space = allocation_space(inst, budget, workers)
    return space.allocations(space.mask(PropertyId.LEX))


def rr_set(inst: Instance, ties: TieRule = TieRule.LOWEST_INDEX, budget: int | None = None) -> list[Allocation]:
    return sorted(set(rr_outcomes(inst, ties, budget).values()), key=lambda a: a.owner)


def fair_set(
    inst: Instance,
    prop: PropertyId,
    budget: int | None = None,
    workers: int = 1,
    ties: TieRule = TieRule.LOWEST_INDEX,
) -> list[Allocation]:
    """Every allocation satisfying ``prop``, in canonical (owner-vector) order."""
    if prop is PropertyId.RR:
        out = rr_set(inst, ties, budget)
    else:
        space = allocation_space(inst, budget, workers)
        out = space.allocations(space.mask(prop))
    if not out:
        raise InvariantViolation(f"no allocation satisfies {prop.value}")
    return out


# --- cycle rotation --------------------------------------------------------------------


def _smallest_cycle(edges: list[list[int]]) -> list[int] | None:
    n = len(edges)
    for start in range(n):
        path = [start]
        on_path = {start}

        def dfs(v: int) -> bool:
            for w in edges[v]:
                if w == start:
                    return True
            for w in edges[v]:
                if w > start and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    if dfs(w):
                        return True
                    path.pop()
                    on_path.discard(w)
            return False

        if dfs(start):
            return path
    return None


def cycle_swap_improvement(inst: Instance, alloc: Allocation) -> Allocation | None:
    """Rotate bundles along a cycle of the "values your bundle more than you do" graph.

    There is an edge i -> j when u_i(M_j) > u_j(M_j); along the cycle each agent
    takes the bundle of her successor, so every utility on the cycle strictly
    increases.  Returns None when the graph is acyclic, which cannot happen
    while the welfare is below 1.
    """
    n = inst.n
    own = utility_vector(inst, alloc)
    bundles = alloc.bundles(n)
    edges = [[j for j in range(n) if j != i and inst.value(i, bundles[j]) > own[j]] for i in range(n)]
    cycle = _smallest_cycle(edges)
    if cycle is None:
        if sum(own) < 1:
            raise InvariantViolation("welfare below 1 but the improvement graph has no cycle")
        return None
    owner = list(alloc.owner)
    for pos, i in enumerate(cycle):
        j = cycle[(pos + 1) % len(cycle)]
        for g in bundles[j]:
            owner[g] = i
    return Allocation(tuple(owner))


def repair_low_welfare(inst: Instance, alloc: Allocation, max_steps: int = 10_000) -> Allocation:
    """Apply cycle rotations until the welfare reaches 1."""
    for _ in range(max_steps):
        if social_welfare(inst, alloc) >= 1:
            return alloc
        nxt = cycle_swap_improvement(inst, alloc)
        alloc = nxt
    raise InvariantViolation("cycle rotation did not reach welfare 1")
