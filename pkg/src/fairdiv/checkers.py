"""Property checks for a single allocation, with violation certificates.

A negative verdict always carries a certificate whose ``verify`` method
re-checks the violation from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from fairdiv.core import Allocation, Instance, utility_vector
from fairdiv.solvers import allocation_space


@dataclass(frozen=True)
class EnvyViolation:
    """``agent`` envies ``other`` even after ``removed`` leaves the other's bundle.

    For EF1 the removed good is the one ``agent`` values most in that bundle
    (None for an empty bundle), so the envy survives every single removal.
    For EFX it is the good whose removal leaves the envy in place.
    """

    kind: str
    agent: int
    other: int
    removed: int | None

    def verify(self, inst: Instance, alloc: Allocation) -> bool:
        bundles = alloc.bundles(inst.n)
        mine = inst.value(self.agent, bundles[self.agent])
        theirs = bundles[self.other]
        if self.kind == "EF1":
            options = [[g for g in theirs if g != r] for r in theirs] + [theirs]
            return all(mine < inst.value(self.agent, rest) for rest in options)
        if self.removed not in theirs:
            return False
        rest = [g for g in theirs if g != self.removed]
        return mine < inst.value(self.agent, rest)

    def to_dict(self) -> dict:
        return {
            "type": "envy",
            "agent": self.agent + 1,
            "other": self.other + 1,
            "removed": None if self.removed is None else self.removed + 1,
        }


@dataclass(frozen=True)
class BalanceViolation:
    """Bundle of ``large`` holds at least two goods more than the bundle of ``small``."""

    large: int
    small: int

    def verify(self, inst: Instance, alloc: Allocation) -> bool:
        sizes = [len(b) for b in alloc.bundles(inst.n)]
        return sizes[self.large] - sizes[self.small] >= 2

    def to_dict(self) -> dict:
        return {"type": "balance", "agents": [self.large + 1, self.small + 1]}


@dataclass(frozen=True)
class ParetoViolation:
    improvement: Allocation

    def verify(self, inst: Instance, alloc: Allocation) -> bool:
        old = utility_vector(inst, alloc)
        new = utility_vector(inst, self.improvement)
        return all(b >= a for a, b in zip(old, new)) and any(b > a for a, b in zip(old, new))

    def to_dict(self) -> dict:
        return {"type": "pareto", "improvement": [i + 1 for i in self.improvement.owner]}


Violation = EnvyViolation | BalanceViolation | ParetoViolation


@dataclass(frozen=True)
class PropertyWitness:
    satisfied: bool
    violation: Violation | None = None

    def __bool__(self) -> bool:
        return self.satisfied

    def to_dict(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "violation": None if self.violation is None else self.violation.to_dict(),
        }


_OK = PropertyWitness(True)


def _envy_check(inst: Instance, alloc: Allocation, kind: str) -> PropertyWitness:
    alloc.validate(inst)
    n = inst.n
    bundles = alloc.bundles(n)
    for i in range(n):
        row = inst.utilities[i]
        mine = inst.value(i, bundles[i])
        for j in range(n):
            if j == i or not bundles[j]:
                continue
            theirs = bundles[j]
            total = sum((row[g] for g in theirs), Fraction(0))
            if mine >= total:
                continue
            if kind == "EF1":
                g = min(theirs, key=lambda g: (-row[g], g))
            else:
                g = min(theirs, key=lambda g: (row[g], g))
            if mine < total - row[g]:
                return PropertyWitness(False, EnvyViolation(kind, i, j, g))
    return _OK


def is_ef1(inst: Instance, alloc: Allocation) -> PropertyWitness:
    """Envy towards any bundle disappears after removing its most valuable good."""
    return _envy_check(inst, alloc, "EF1")


def is_efx(inst: Instance, alloc: Allocation) -> PropertyWitness:
    """Envy towards any bundle disappears after removing its least valuable good."""
    return _envy_check(inst, alloc, "EFX")


def is_balanced(inst: Instance, alloc: Allocation) -> PropertyWitness:
    alloc.validate(inst)
    sizes = [len(b) for b in alloc.bundles(inst.n)]
    large = max(range(inst.n), key=lambda i: (sizes[i], -i))
    small = min(range(inst.n), key=lambda i: (sizes[i], i))
    if sizes[large] - sizes[small] <= 1:
        return _OK
    return PropertyWitness(False, BalanceViolation(large, small))


def is_pareto_optimal(inst: Instance, alloc: Allocation, budget: int | None = None, workers: int = 1) -> PropertyWitness:
    """Exhaustive search for a Pareto improvement.

    The certificate is the improving allocation with the smallest owner vector.
    """
    alloc.validate(inst)
    space = allocation_space(inst, budget, workers)
    own = space.table[space.index(alloc)]
    table = space.table
    weakly = np.asarray((table >= own).all(axis=1), dtype=bool)
    strictly = np.asarray((table > own).any(axis=1), dtype=bool)
    hits = np.flatnonzero(weakly & strictly)
    if hits.size == 0:
        return _OK
    return PropertyWitness(False, ParetoViolation(space.allocation(int(hits[0]))))


CHECKERS = {
    "EF1": is_ef1,
    "EFX": is_efx,
    "BAL": is_balanced,
}
