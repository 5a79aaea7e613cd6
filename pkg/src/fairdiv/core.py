"""Instances, allocations, welfare and the JSON document formats.

Utilities are :class:`fractions.Fraction` everywhere; nothing in the package
rounds.  Agents and goods are 0-based in Python and 1-based in documents.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

DEFAULT_BUDGET = 10**6


class FairDivError(Exception):
    """Base class for errors raised by this package."""


class InstanceError(FairDivError, ValueError):
    """Malformed or invalid instance / allocation document."""


class DimensionError(FairDivError, ValueError):
    """An allocation does not fit the instance it is used with."""


class BudgetExceeded(FairDivError):
    """An exhaustive search would exceed the configured enumeration budget."""

    def __init__(self, needed: int, budget: int, what: str = "allocations"):
        super().__init__(f"need {needed} {what} but budget is {budget}")
        self.needed = needed
        self.budget = budget


class InvariantViolation(FairDivError, AssertionError):
    """An internal consistency check failed (this is a bug)."""


def default_budget() -> int:
    env = os.environ.get("FAIRDIV_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def check_budget(needed: int, budget: int | None, what: str = "allocations") -> None:
    budget = default_budget() if budget is None else budget
    if needed > budget:
        raise BudgetExceeded(needed, budget, what)


def to_fraction(value) -> Fraction:
    """Exact conversion of an int, Fraction or ``"p/q"``/decimal string."""
    if isinstance(value, bool):
        raise InstanceError(f"not a number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InstanceError(f"bad rational {value!r}") from exc
    if isinstance(value, float):
        raise InstanceError(
            f"float {value!r} is not exact; write it as an integer or a 'p/q' string"
        )
    raise InstanceError(f"not a number: {value!r}")


def format_fraction(q: Fraction) -> str | int:
    """Document encoding: plain int when integral, else ``"p/q"``."""
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Instance:
    """Normalized additive instance: ``utilities[i][j]`` is agent i's value for good j."""

    utilities: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = self.utilities
        if not rows:
            raise InstanceError("an instance needs at least one agent")
        m = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != m:
                raise InstanceError(f"agent {i + 1} has {len(row)} entries, expected {m}")
            if any(v < 0 for v in row):
                raise InstanceError(f"agent {i + 1} has a negative utility")
            if sum(row) != 1:
                raise InstanceError(f"agent {i + 1} utilities sum to {sum(row)}, not 1")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "Instance":
        """Build an instance from raw non-negative rows, dividing each by its sum."""
        parsed = [[to_fraction(v) for v in row] for row in rows]
        if not parsed:
            raise InstanceError("an instance needs at least one agent")
        out = []
        for i, row in enumerate(parsed):
            if any(v < 0 for v in row):
                raise InstanceError(f"agent {i + 1} has a negative utility")
            total = sum(row, Fraction(0))
            if total == 0:
                raise InstanceError(f"agent {i + 1} values every good at 0")
            out.append(tuple(v / total for v in row))
        return cls(tuple(out))

    @property
    def n(self) -> int:
        return len(self.utilities)

    @property
    def m(self) -> int:
        return len(self.utilities[0])

    def value(self, agent: int, goods: Iterable[int]) -> Fraction:
        row = self.utilities[agent]
        return sum((row[g] for g in goods), Fraction(0))

    def scaled(self) -> tuple[int, list[list[int]]]:
        """Common denominator ``L`` and the integer matrix ``L * utilities``."""
        return scale_rows(self.utilities)


def scale_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[int, list[list[int]]]:
    scale = math.lcm(*(v.denominator for row in rows for v in row))
    return scale, [[v.numerator * (scale // v.denominator) for v in row] for row in rows]


@dataclass(frozen=True)
class Allocation:
    """``owner[j]`` is the (0-based) agent receiving good j."""

    owner: tuple[int, ...]

    @classmethod
    def from_bundles(cls, bundles: Sequence[Iterable[int]], m: int) -> "Allocation":
        owner = [-1] * m
        for agent, bundle in enumerate(bundles):
            for g in bundle:
                if not 0 <= g < m or owner[g] != -1:
                    raise DimensionError(f"good {g} is out of range or assigned twice")
                owner[g] = agent
        if -1 in owner:
            raise DimensionError(f"good {owner.index(-1)} is unassigned")
        return cls(tuple(owner))

    @property
    def m(self) -> int:
        return len(self.owner)

    def bundles(self, n: int) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(n)]
        for g, i in enumerate(self.owner):
            out[i].append(g)
        return out

    def validate(self, inst: Instance) -> None:
        if len(self.owner) != inst.m:
            raise DimensionError(f"allocation covers {len(self.owner)} goods, instance has {inst.m}")
        for g, i in enumerate(self.owner):
            if not 0 <= i < inst.n:
                raise DimensionError(f"good {g + 1} is assigned to unknown agent {i + 1}")


def utility_vector(inst: Instance, alloc: Allocation) -> tuple[Fraction, ...]:
    alloc.validate(inst)
    totals = [Fraction(0)] * inst.n
    for g, i in enumerate(alloc.owner):
        totals[i] += inst.utilities[i][g]
    return tuple(totals)


def social_welfare(inst: Instance, alloc: Allocation) -> Fraction:
    return sum(utility_vector(inst, alloc), Fraction(0))


def optimal_welfare(inst: Instance) -> tuple[Fraction, Allocation]:
    """Utilitarian optimum: every good goes to an agent valuing it most.

    Ties go to the lowest agent index.
    """
    owner = []
    total = Fraction(0)
    for g in range(inst.m):
        best = max(range(inst.n), key=lambda i: (inst.utilities[i][g], -i))
        owner.append(best)
        total += inst.utilities[best][g]
    return total, Allocation(tuple(owner))


def allocation_count(n: int, m: int) -> int:
    return n**m


def allocation_at(index: int, n: int, m: int) -> Allocation:
    """Allocation number ``index`` in lexicographic order of owner vectors."""
    owner = [0] * m
    for g in range(m - 1, -1, -1):
        index, owner[g] = divmod(index, n)
    return Allocation(tuple(owner))


def allocation_index(alloc: Allocation, n: int) -> int:
    index = 0
    for i in alloc.owner:
        index = index * n + i
    return index


def iter_owner_vectors(n: int, m: int) -> Iterator[tuple[int, ...]]:
    """All n**m owner vectors in lexicographic order (one empty vector when m == 0)."""
    return itertools.product(range(n), repeat=m)


def random_instance(n: int, m: int, rng: random.Random, grid: int = 12, zero_prob: float = 0.25) -> Instance:
    """Random instance on an integer grid, with some zero entries."""
    rows = []
    for _ in range(n):
        while True:
            row = [0 if rng.random() < zero_prob else rng.randint(1, grid) for _ in range(m)]
            if any(row):
                break
        rows.append(row)
    return Instance.from_rows(rows)


# --- documents ---------------------------------------------------------------


def instance_to_dict(inst: Instance) -> dict:
    return {
        "n": inst.n,
        "m": inst.m,
        "utilities": [[format_fraction(v) for v in row] for row in inst.utilities],
    }


def instance_from_dict(doc: dict) -> Instance:
    if not isinstance(doc, dict) or "utilities" not in doc:
        raise InstanceError("instance document needs a 'utilities' field")
    rows = doc["utilities"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InstanceError("'utilities' must be an array of arrays")
    n, m = doc.get("n", len(rows)), doc.get("m", len(rows[0]) if rows else 0)
    if n != len(rows):
        raise InstanceError(f"n = {n} but {len(rows)} utility rows given")
    for i, row in enumerate(rows):
        if len(row) != m:
            raise InstanceError(f"agent {i + 1} has {len(row)} entries, expected m = {m}")
    return Instance.from_rows(rows)


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"instance document is not valid JSON: {exc}") from exc
    return instance_from_dict(doc)


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst))


def allocation_to_dict(alloc: Allocation) -> dict:
    return {"owner": [i + 1 for i in alloc.owner]}


def allocation_from_dict(doc: dict) -> Allocation:
    owner = doc.get("owner") if isinstance(doc, dict) else None
    if not isinstance(owner, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in owner):
        raise InstanceError("allocation document needs an integer array 'owner'")
    if any(i < 1 for i in owner):
        raise InstanceError("agent indices in 'owner' are 1-based")
    return Allocation(tuple(i - 1 for i in owner))


def parse_allocation(text: str) -> Allocation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"allocation document is not valid JSON: {exc}") from exc
    return allocation_from_dict(doc)


def serialize_allocation(alloc: Allocation) -> str:
    return json.dumps(allocation_to_dict(alloc))
