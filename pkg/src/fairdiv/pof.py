"""Per-instance price of fairness, lower-bound fixtures and adversarial search."""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from fairdiv.constructive import TieRule, rr_outcomes
from fairdiv.core import (
    Allocation,
    Instance,
    InstanceError,
    check_budget,
    format_fraction,
    optimal_welfare,
    serialize_instance,
    social_welfare,
    to_fraction,
)
from fairdiv.solvers import PropertyId, allocation_space

INF = math.inf
DEFAULT_EPS = Fraction(1, 100)

Price = Fraction | float  # float only for INF


def format_price(p: Price) -> str | int:
    return "inf" if p == INF else format_fraction(p)


def _ratio(opt: Fraction, fair: Fraction) -> Price:
    if opt == 0:
        return Fraction(1)
    if fair == 0:
        return INF
    return opt / fair


@dataclass(frozen=True)
class PriceReport:
    property: PropertyId
    opt: Fraction
    best_fair: Fraction
    worst_fair: Fraction
    price: Price
    strong_price: Price
    best_witness: Allocation
    worst_witness: Allocation
    opt_witness: Allocation
    fair_count: int

    def to_dict(self) -> dict:
        owners = lambda a: [i + 1 for i in a.owner]  # noqa: E731
        return {
            "property": self.property.value,
            "opt": format_fraction(self.opt),
            "best_fair": format_fraction(self.best_fair),
            "worst_fair": format_fraction(self.worst_fair),
            "price": format_price(self.price),
            "strong_price": format_price(self.strong_price),
            "fair_count": self.fair_count,
            "witnesses": {
                "opt": owners(self.opt_witness),
                "best_fair": owners(self.best_witness),
                "worst_fair": owners(self.worst_witness),
            },
        }


def _report(prop, opt, opt_alloc, best, worst, best_alloc, worst_alloc, count) -> PriceReport:
    return PriceReport(
        prop, opt, best, worst, _ratio(opt, best), _ratio(opt, worst), best_alloc, worst_alloc, opt_alloc, count
    )


def price_of(
    inst: Instance,
    prop: PropertyId,
    budget: int | None = None,
    workers: int = 1,
    ties: TieRule = TieRule.LOWEST_INDEX,
) -> PriceReport:
    """Price and strong price of ``prop`` on one instance.

    Witnesses are the allocations with the smallest owner vector among those
    attaining the best and the worst fair welfare.
    """
    opt, opt_alloc = optimal_welfare(inst)
    if prop is PropertyId.RR:
        outcomes = sorted(set(rr_outcomes(inst, ties, budget).values()), key=lambda a: a.owner)
        scored = [(social_welfare(inst, a), a) for a in outcomes]
        best = max(sw for sw, _ in scored)
        worst = min(sw for sw, _ in scored)
        best_alloc = next(a for sw, a in scored if sw == best)
        worst_alloc = next(a for sw, a in scored if sw == worst)
        return _report(prop, opt, opt_alloc, best, worst, best_alloc, worst_alloc, len(outcomes))

    space = allocation_space(inst, budget, workers)
    mask = space.mask(prop)
    idx = np.flatnonzero(mask)
    welfare = space.welfare[idx]
    hi, lo = welfare.max(), welfare.min()
    k_best = int(idx[np.flatnonzero(welfare == hi)[0]])
    k_worst = int(idx[np.flatnonzero(welfare == lo)[0]])
    return _report(
        prop,
        opt,
        opt_alloc,
        space.fraction(hi),
        space.fraction(lo),
        space.allocation(k_best),
        space.allocation(k_worst),
        len(idx),
    )


# --- fixtures ------------------------------------------------------------------------

FAMILIES = (
    "thm1-sqrt",
    "ef1-2",
    "efx-2",
    "identity-match",
    "rr-price",
    "rr-strong",
    "bal-2",
    "welfare-linear",
    "mew-infinite",
    "mnw-2",
    "mew-2",
    "po-quadratic",
)


@dataclass(frozen=True)
class FixtureSpec:
    family: str
    n: int | None = None
    m: int | None = None
    x: int | None = None
    eps: Fraction | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InstanceError(f"unknown fixture family {self.family!r}")
        if self.eps is not None:
            object.__setattr__(self, "eps", to_fraction(self.eps))

    def to_dict(self) -> dict:
        out = {"family": self.family}
        for key in ("n", "m", "x"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.eps is not None:
            out["eps"] = format_fraction(self.eps)
        return out


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise InstanceError(msg)


def _eps(spec: FixtureSpec, upper: Fraction) -> Fraction:
    eps = DEFAULT_EPS if spec.eps is None else spec.eps
    _need(0 < eps < upper, f"{spec.family} needs 0 < eps < {upper}, got {eps}")
    return eps


def _n(spec: FixtureSpec, default: int, low: int) -> int:
    n = default if spec.n is None else spec.n
    _need(n >= low, f"{spec.family} needs n >= {low}, got {n}")
    return n


def _check_m(spec: FixtureSpec, m: int) -> None:
    _need(spec.m is None or spec.m == m, f"{spec.family} has m = {m}, got m = {spec.m}")


def _zeros(n: int, m: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * m for _ in range(n)]


def generate_fixture(spec: FixtureSpec, budget: int | None = None) -> Instance:
    """Utility matrix of a lower-bound construction (1-based goods in the comments)."""
    fam = spec.family
    F = Fraction

    if fam == "thm1-sqrt":
        n = _n(spec, 4, 1)
        _check_m(spec, n)
        r = math.isqrt(n)
        u = _zeros(n, n)
        for i in range(r - 1):
            for g in range(i * r, (i + 1) * r):
                u[i][g] = F(1, r)
        for g in range(r * (r - 1), n):
            u[r - 1][g] = F(1, n - r * (r - 1))
        for i in range(r, n):
            u[i] = [F(1, n)] * n
        return Instance(tuple(map(tuple, u)))

    if fam in ("ef1-2", "efx-2", "mnw-2", "mew-2"):
        _need(spec.n in (None, 2), f"{fam} is a two-agent fixture")
        _check_m(spec, 3)
        if fam == "ef1-2":
            e = _eps(spec, F(1, 6))
            rows = [[F(1, 3) - 2 * e, F(1, 3) + e, F(1, 3) + e], [0, F(1, 2), F(1, 2)]]
        elif fam == "efx-2":
            e = _eps(spec, F(1, 2))
            rows = [[F(1, 2) + e, F(1, 2) - e, 0], [F(1, 2) + e, 0, F(1, 2) - e]]
        elif fam == "mnw-2":
            e = _eps(spec, F(1, 7))
            rows = [[F(2, 3), F(1, 3), 0], [F(4, 7) - e, F(1, 7) + e, F(2, 7)]]
        else:
            e = _eps(spec, F(1, 2))
            rows = [[F(1, 2), F(1, 2) - e, e], [F(1, 2), e, F(1, 2) - e]]
        return Instance(tuple(tuple(F(v) for v in row) for row in rows))

    if fam in ("identity-match", "mew-infinite", "welfare-linear", "po-quadratic"):
        low = 3 if fam == "mew-infinite" else (2 if fam in ("welfare-linear", "po-quadratic") else 1)
        n = _n(spec, 3, low)
        _check_m(spec, n)
        u = _zeros(n, n)
        if fam == "identity-match":
            for i in range(n):
                u[i][i] = F(1)
        elif fam == "mew-infinite":
            u[0][0] = F(1)
            for i in range(1, n):
                u[i][i - 1] = F(1)
        elif fam == "welfare-linear":
            e = _eps(spec, F(1))
            u[0][0] = F(1)
            for i in range(1, n):
                u[i][i - 1], u[i][i] = 1 - e, e
        else:
            e = _eps(spec, F(1, n))
            u[0] = [F(1, n) + e] + [F(1, n) - e / (n - 1)] * (n - 1)
            for i in range(1, n):
                u[i][i - 1], u[i][i] = 1 - e, e
        return Instance(tuple(map(tuple, u)))

    if fam == "rr-price":
        n = _n(spec, 2, 1)
        x = 2 * n if spec.x is None else spec.x
        _need(x >= 1 and x % n == 0, f"rr-price needs x divisible by n, got x = {x}, n = {n}")
        m = x**n
        _check_m(spec, m)
        check_budget(m, budget, "goods")
        u = _zeros(n, m)
        for i in range(n):
            for g in range(x ** (i + 1)):
                u[i][g] = F(1, x ** (i + 1))
        return Instance(tuple(map(tuple, u)))

    if fam == "rr-strong":
        n = _n(spec, 2, 1)
        m = 2 * n if spec.m is None else spec.m
        _need(m >= max(1, n - 1) and m % n == 0, f"rr-strong needs m divisible by n and m >= n - 1, got m = {m}")
        u = _zeros(n, m)
        u[0] = [F(1, m)] * m
        for i in range(1, n):
            u[i][i - 1] = F(1)
        return Instance(tuple(map(tuple, u)))

    if fam == "bal-2":
        _need(spec.n in (None, 2), "bal-2 is a two-agent fixture")
        m = 4 if spec.m is None else spec.m
        _need(m >= 2 and m % 2 == 0, f"bal-2 needs an even m >= 2, got {m}")
        u = _zeros(2, m)
        u[0][0] = F(1)
        u[1] = [F(1, m)] * m
        return Instance(tuple(map(tuple, u)))

    raise InstanceError(f"unknown fixture family {fam!r}")  # pragma: no cover


@dataclass(frozen=True)
class ExpectedPrice:
    """Closed-form price data of a fixture; None where no closed form is known.

    ``best_fair_below`` is a strict upper bound on the best fair welfare for
    fixtures that only come with an inequality.
    """

    property: PropertyId
    opt: Fraction
    price: Price | None = None
    strong_price: Price | None = None
    best_fair_below: Fraction | None = None
    asymptotic_limit: Fraction | None = field(default=None, compare=False)


def fixture_expected_prices(spec: FixtureSpec) -> list[ExpectedPrice]:
    fam = spec.family
    F = Fraction
    P = PropertyId
    if fam == "rr-price":
        n = _n(spec, 2, 1)
        x = 2 * n if spec.x is None else spec.x
        _need(x >= 1 and x % n == 0, f"rr-price needs x divisible by n, got x = {x}, n = {n}")
        opt = n - F(n - 1, x)
        return [ExpectedPrice(P.RR, opt, price=opt, strong_price=opt, asymptotic_limit=F(n))]
    inst = generate_fixture(spec)
    n = inst.n

    if fam == "thm1-sqrt":
        r = F(math.isqrt(n))
        return [ExpectedPrice(p, r, best_fair_below=F(2)) for p in (P.EF1, P.BAL)]
    if fam == "ef1-2":
        e = _eps(spec, F(1, 6))
        opt = F(4, 3) - 2 * e
        return [ExpectedPrice(P.EF1, opt, price=opt / (F(7, 6) - e), asymptotic_limit=F(8, 7))]
    if fam == "efx-2":
        e = _eps(spec, F(1, 2))
        opt = F(3, 2) - e
        return [ExpectedPrice(P.EFX, opt, price=opt, asymptotic_limit=F(3, 2))]
    if fam == "identity-match":
        return [ExpectedPrice(p, F(n), price=F(1), strong_price=INF) for p in (P.EF1, P.EFX, P.BAL)]
    if fam == "rr-strong":
        m = inst.m
        opt = F(m - n + 1, m) + (n - 1)
        return [ExpectedPrice(P.RR, opt, strong_price=opt * n, asymptotic_limit=F(n * n))]
    if fam == "bal-2":
        m = inst.m
        opt = 2 - F(1, m)
        return [ExpectedPrice(P.BAL, opt, price=opt / F(3, 2), strong_price=2 * opt, asymptotic_limit=F(4, 3))]
    if fam == "welfare-linear":
        e = _eps(spec, F(1))
        # good 1 to agent 1, good i to agent i + 1 (1 < i < n), good n to agent n
        opt = 1 + (n - 2) * (1 - e) + e
        fair = 1 + (n - 1) * e
        return [
            ExpectedPrice(p, opt, price=opt / fair, strong_price=opt / fair, asymptotic_limit=F(n - 1))
            for p in (P.MNW, P.MEW, P.LEX)
        ]
    if fam == "mew-infinite":
        return [ExpectedPrice(P.MEW, F(n - 1), price=F(1), strong_price=INF)]
    if fam == "mnw-2":
        e = _eps(spec, F(1, 7))
        ratio = F(9, 7) / (F(23, 21) + e)
        return [ExpectedPrice(P.MNW, F(9, 7), price=ratio, strong_price=ratio, asymptotic_limit=F(27, 23))]
    if fam == "mew-2":
        e = _eps(spec, F(1, 2))
        opt = F(3, 2) - 2 * e
        return [ExpectedPrice(P.MEW, opt, price=opt, strong_price=opt, asymptotic_limit=F(3, 2))]
    if fam == "po-quadratic":
        e = _eps(spec, F(1, n))
        opt = max(F(1, n) + e, 1 - e) + (n - 2) * (1 - e) + max(e, F(1, n) - e / (n - 1))
        worst = F(1, n) + n * e
        limit = F(3) if n == 2 else None
        return [ExpectedPrice(P.PO, opt, price=F(1), strong_price=opt / worst, asymptotic_limit=limit)]
    raise InstanceError(f"unknown fixture family {fam!r}")  # pragma: no cover


# --- adversarial search ---------------------------------------------------------------

GRID = 64


def _objective(report: PriceReport, strong: bool) -> Price:
    return report.strong_price if strong else report.price


def _climb(prop, n, m, rng: random.Random, iterations, budget, strong, ties):
    def random_weights():
        rows = []
        for _ in range(n):
            row = [rng.randint(0, GRID) for _ in range(m)]
            if not any(row):
                row[rng.randrange(m)] = GRID
            rows.append(row)
        return rows

    def evaluate(w):
        inst = Instance.from_rows(w)
        return inst, price_of(inst, prop, budget, 1, ties)

    weights = random_weights()
    inst, report = evaluate(weights)
    for _ in range(iterations):
        i, j = rng.randrange(n), rng.randrange(m)
        step = rng.choice((-1, 1))
        cand = [row[:] for row in weights]
        cand[i][j] = max(0, cand[i][j] + step * max(1, sum(cand[i]) // GRID))
        if not any(cand[i]):
            continue
        c_inst, c_report = evaluate(cand)
        if _objective(c_report, strong) >= _objective(report, strong):
            weights, inst, report = cand, c_inst, c_report
    return inst, report


def adversarial_search(
    prop: PropertyId,
    n: int,
    m: int,
    seed: int = 0,
    iterations: int = 200,
    budget: int | None = None,
    strong: bool = False,
    restarts: int = 4,
    workers: int = 1,
    ties: TieRule = TieRule.LOWEST_INDEX,
) -> tuple[Instance, PriceReport]:
    """Seeded hill climbing on the price (or strong price) of ``prop``.

    Each restart draws integer weights from [0, 64] and repeatedly moves one
    entry by 1/64 of its row total; utilities are the renormalized weights.
    Restarts are independent and merged by highest objective, ties going to
    the smallest serialized instance, so the result does not depend on
    ``workers``.
    """
    if n < 1 or m < 1:
        raise InstanceError("search needs n >= 1 and m >= 1")
    if prop is not PropertyId.RR:
        check_budget(n**m, budget)

    def run(k: int):
        rng = random.Random(seed * 1_000_003 + k)
        return _climb(prop, n, m, rng, iterations, budget, strong, ties)

    if workers > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=min(workers, restarts)) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(k) for k in range(restarts)]
    return min(results, key=lambda r: (-_objective(r[1], strong), serialize_instance(r[0])))


__all__ = [
    "INF",
    "DEFAULT_EPS",
    "FAMILIES",
    "ExpectedPrice",
    "FixtureSpec",
    "PriceReport",
    "adversarial_search",
    "fixture_expected_prices",
    "format_price",
    "generate_fixture",
    "price_of",
]
