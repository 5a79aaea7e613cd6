"""``fairdiv`` command line: check, solve, construct, price, generate, search, reproduce.

Exit codes: 0 success, 1 failed reproduction rows or internal error, 2 bad
input, 3 enumeration budget exceeded, 4 file error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

from fairdiv import __version__
from fairdiv.checkers import is_balanced, is_ef1, is_efx, is_pareto_optimal
from fairdiv.constructive import (
    TieRule,
    balanced_high_welfare,
    balanced_two_agents,
    bucketed_guarantee_holds,
    bucketed_rr_ordering,
    ef1_two_agents,
    efx_two_agents,
    round_robin,
)
from fairdiv.core import (
    Allocation,
    BudgetExceeded,
    DimensionError,
    FairDivError,
    Instance,
    InstanceError,
    InvariantViolation,
    allocation_to_dict,
    default_budget,
    format_fraction,
    instance_to_dict,
    optimal_welfare,
    parse_allocation,
    parse_instance,
    random_instance,
    social_welfare,
    to_fraction,
    utility_vector,
)
from fairdiv.pof import (
    DEFAULT_EPS,
    FAMILIES,
    INF,
    FixtureSpec,
    adversarial_search,
    fixture_expected_prices,
    format_price,
    generate_fixture,
    price_of,
)
from fairdiv.solvers import NashValue, PropertyId, allocation_space

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BUDGET, EXIT_FILE = 0, 1, 2, 3, 4

ASYMPTOTIC = "asymptotic: fixture inequality only"


class UsageError(FairDivError, ValueError):
    pass


# --- helpers -----------------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _instance(args) -> Instance:
    if not args.instance:
        raise UsageError("--instance is required")
    return parse_instance(_read(args.instance))


def _owners(alloc: Allocation) -> list[int]:
    return [i + 1 for i in alloc.owner]


def _fr(q: Fraction):
    return format_fraction(q)


def _config(args) -> dict:
    # the worker count never changes results, so it is not echoed
    skip = {"func", "workers", "out", "format"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or value is None:
            continue
        out[key] = format_fraction(value) if isinstance(value, Fraction) else value
    out["budget"] = args.budget if args.budget is not None else default_budget()
    return out


def _budget(args) -> int:
    return args.budget if args.budget is not None else default_budget()


def _ties(args) -> TieRule:
    return TieRule.ADVERSARIAL if getattr(args, "ties", "lowest") == "adversarial" else TieRule.LOWEST_INDEX


# --- commands --------------------------------------------------------------------------------


def cmd_check(args) -> tuple[int, dict]:
    inst = _instance(args)
    if not args.allocation:
        raise UsageError("--allocation is required")
    alloc = parse_allocation(_read(args.allocation))
    prop = PropertyId.parse(args.property)
    if prop is PropertyId.PO:
        witness = is_pareto_optimal(inst, alloc, _budget(args), args.workers)
    elif prop in (PropertyId.EF1, PropertyId.EFX, PropertyId.BAL):
        witness = {PropertyId.EF1: is_ef1, PropertyId.EFX: is_efx, PropertyId.BAL: is_balanced}[prop](inst, alloc)
    else:
        raise UsageError(f"check supports ef1, efx, bal and po, not {args.property}")
    doc = {"property": prop.value, "allocation": _owners(alloc), **witness.to_dict()}
    return EXIT_OK, doc


def cmd_solve(args) -> tuple[int, dict]:
    inst = _instance(args)
    objective = args.objective.lower()
    if objective == "opt":
        value, alloc = optimal_welfare(inst)
        count = math.prod(
            sum(1 for i in range(inst.n) if inst.utilities[i][g] == max(r[g] for r in inst.utilities))
            for g in range(inst.m)
        )
        doc = {"value": _fr(value), "witness": _owners(alloc), "set_size": count}
    elif objective in ("mnw", "mew", "leximin", "lex"):
        prop = {"mnw": PropertyId.MNW, "mew": PropertyId.MEW}.get(objective, PropertyId.LEX)
        space = allocation_space(inst, _budget(args), args.workers)
        mask = space.mask(prop)
        members = space.allocations(mask)
        alloc = members[0]
        utilities = utility_vector(inst, alloc)
        if prop is PropertyId.MNW:
            nash = NashValue.of(utilities)
            value = {"positive_count": nash.positive_count, "product": _fr(nash.product)}
        elif prop is PropertyId.MEW:
            value = _fr(min(utilities))
        else:
            value = [_fr(u) for u in sorted(utilities)]
        doc = {"value": value, "witness": _owners(alloc), "set_size": len(members)}
    else:
        raise UsageError(f"unknown objective {args.objective!r}")
    doc["objective"] = objective
    doc["social_welfare"] = _fr(social_welfare(inst, alloc))
    return EXIT_OK, doc


def _parse_order(text: str | None, n: int):
    if text is None:
        return None
    try:
        order = [int(t) - 1 for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --order {text!r}") from None
    if sorted(order) != list(range(n)):
        raise UsageError(f"--order must be a permutation of 1..{n}")
    return order


def cmd_construct(args) -> tuple[int, dict]:
    inst = _instance(args)
    alg = args.alg
    opt, _ = optimal_welfare(inst)
    extra = {}
    if alg == "rr":
        order = _parse_order(args.order, inst.n)
        alloc = round_robin(inst, order, _ties(args), _budget(args))
        sw = social_welfare(inst, alloc)
        guarantee = ("n * SW >= 1", inst.n * sw >= 1)
    elif alg == "ef1-2":
        alloc = ef1_two_agents(inst)
        sw = social_welfare(inst, alloc)
        guarantee = ("4 * SW^2 >= 3 * OPT^2", 4 * sw * sw >= 3 * opt * opt)
    elif alg == "efx-2":
        alloc = efx_two_agents(inst, _budget(args))
        sw = social_welfare(inst, alloc)
        guarantee = ("SW >= 1", sw >= 1)
    elif alg == "bal-2":
        alloc = balanced_two_agents(inst)
        sw = social_welfare(inst, alloc)
        guarantee = ("4 * SW >= 3 * OPT", 4 * sw >= 3 * opt)
    elif alg == "bal-n":
        alloc = balanced_high_welfare(inst, _budget(args))
        sw = social_welfare(inst, alloc)
        guarantee = ("16 * n * SW^2 >= OPT^2", 16 * inst.n * sw * sw >= opt * opt)
    elif alg == "bucketed-rr":
        order, alloc = bucketed_rr_ordering(inst, _budget(args))
        sw = social_welfare(inst, alloc)
        guarantee = ("65 * sqrt(n) * log2(mn) * SW >= OPT", bucketed_guarantee_holds(inst, alloc))
        extra["order"] = [i + 1 for i in order]
    else:
        raise UsageError(f"unknown algorithm {alg!r}")
    doc = {
        "alg": alg,
        "allocation": allocation_to_dict(alloc),
        **extra,
        "social_welfare": _fr(sw),
        "opt": _fr(opt),
        "certificates": {
            "EF1": is_ef1(inst, alloc).to_dict(),
            "EFX": is_efx(inst, alloc).to_dict(),
            "BAL": is_balanced(inst, alloc).to_dict(),
        },
        "guarantee": {"inequality": guarantee[0], "holds": guarantee[1]},
    }
    return (EXIT_OK if guarantee[1] else EXIT_FAILED), doc


def cmd_price(args) -> tuple[int, dict]:
    inst = _instance(args)
    prop = PropertyId.parse(args.property)
    report = price_of(inst, prop, _budget(args), args.workers, _ties(args))
    return EXIT_OK, report.to_dict()


def _spec(args, family=None) -> FixtureSpec:
    return FixtureSpec(family or args.family, n=args.n, m=args.m, x=args.x, eps=args.eps)


def cmd_generate(args) -> tuple[int, dict]:
    if not args.family:
        raise UsageError("--family is required")
    inst = generate_fixture(_spec(args), _budget(args))
    return EXIT_OK, instance_to_dict(inst)


def cmd_search(args) -> tuple[int, dict]:
    if args.n is None or args.m is None:
        raise UsageError("search needs --n and --m")
    prop = PropertyId.parse(args.property)
    inst, report = adversarial_search(
        prop,
        args.n,
        args.m,
        seed=args.seed,
        iterations=args.iters,
        budget=_budget(args),
        strong=args.strong,
        restarts=args.restarts,
        workers=args.workers,
        ties=_ties(args),
    )
    return EXIT_OK, {"instance": instance_to_dict(inst), "report": report.to_dict()}


# --- reproduce -----------------------------------------------------------------------------------


def _row(prop, bound, fixture, report, expected, checks, note=None) -> dict:
    row = {
        "property": prop.value,
        "bound": bound,
        "fixture": fixture,
        "opt": _fr(report.opt),
        "price": format_price(report.price),
        "strong_price": format_price(report.strong_price),
    }
    if expected is not None:
        row["expected"] = {k: format_price(v) for k, v in expected.items()}
    row["checks"] = [c for c, _ in checks]
    row["pass"] = all(ok for _, ok in checks)
    if note:
        row["note"] = note
    return row


def _expected(spec: FixtureSpec, prop: PropertyId):
    return next(e for e in fixture_expected_prices(spec) if e.property is prop)


def _fixture_rows(budget: int, eps: Fraction, sizes: list[int], workers: int) -> list[dict]:
    P = PropertyId
    rows = []

    def price(spec, prop):
        return price_of(generate_fixture(spec, budget), prop, budget, workers)

    def closed(spec, prop, report, bound, bound_checks, note=None):
        exp = _expected(spec, prop)
        expected, checks = {}, []
        if exp.price is not None:
            expected["price"] = exp.price
            checks.append(("price equals closed form", report.price == exp.price))
        if exp.strong_price is not None:
            expected["strong_price"] = exp.strong_price
            checks.append(("strong price equals closed form", report.strong_price == exp.strong_price))
        rows.append(_row(prop, bound, spec.to_dict(), report, expected, checks + bound_checks, note))

    spec = FixtureSpec("ef1-2", eps=eps)
    r = price(spec, P.EF1)
    closed(spec, P.EF1, r, "2/sqrt(3) for n = 2", [("3 opt^2 <= 4 best^2", 3 * r.opt**2 <= 4 * r.best_fair**2)])
    for n in sizes:
        if math.isqrt(n) >= 2 and n**n <= budget:
            spec = FixtureSpec("thm1-sqrt", n=n)
            for prop in (P.EF1, P.BAL):
                r = price(spec, prop)
                exp = _expected(spec, prop)
                checks = [
                    ("opt equals floor(sqrt(n))", r.opt == exp.opt),
                    ("best fair welfare < 2", r.best_fair < exp.best_fair_below),
                ]
                rows.append(_row(prop, "Omega(sqrt(n))", spec.to_dict(), r, None, checks, ASYMPTOTIC))
    for n in sizes:
        if n**n > budget:
            continue
        spec = FixtureSpec("identity-match", n=n)
        props = (P.EF1, P.EFX, P.BAL) if n == 2 else (P.EF1, P.BAL)
        for prop in props:
            closed(spec, prop, price(spec, prop), "strong price infinite", [])

    spec = FixtureSpec("efx-2", eps=eps)
    r = price(spec, P.EFX)
    closed(spec, P.EFX, r, "3/2 for n = 2", [("price <= 3/2", r.price <= Fraction(3, 2))])

    for n in sizes:
        spec = FixtureSpec("rr-price", n=n, x=2 * n)
        r = price(spec, P.RR)
        closed(spec, P.RR, r, "n", [("price <= n", r.price <= n)])
    for n in sizes:
        spec = FixtureSpec("rr-strong", n=n, m=2 * n)
        r = price(spec, P.RR)
        closed(spec, P.RR, r, "strong price n^2", [("strong price <= n^2", r.strong_price <= n * n)])

    spec = FixtureSpec("bal-2", m=4)
    r = price(spec, P.BAL)
    closed(spec, P.BAL, r, "4/3 for n = 2", [("price <= 4/3", r.price <= Fraction(4, 3))])

    spec = FixtureSpec("mnw-2", eps=eps)
    r = price(spec, P.MNW)
    closed(spec, P.MNW, r, "[27/23, 5/4] for n = 2", [("strong price <= 5/4", r.strong_price <= Fraction(5, 4))])

    for n in sizes:
        if n**n > budget:
            continue
        spec = FixtureSpec("welfare-linear", n=n, eps=eps)
        for prop in (P.MNW, P.MEW, P.LEX):
            r = price(spec, prop)
            closed(spec, prop, r, "Theta(n)", [("price <= n", r.price <= n)], ASYMPTOTIC)

    spec = FixtureSpec("mew-2", eps=eps)
    for prop in (P.MEW, P.LEX):
        r = price(spec, prop)
        checks = [("strong price <= 3/2", r.strong_price <= Fraction(3, 2))]
        if prop is P.MEW:
            closed(spec, prop, r, "3/2 for n = 2", checks)
        else:
            rows.append(_row(prop, "3/2 for n = 2", spec.to_dict(), r, None, checks))

    for n in sizes:
        if n < 3 or n**n > budget:
            continue
        spec = FixtureSpec("mew-infinite", n=n)
        r = price(spec, P.MEW)
        closed(spec, P.MEW, r, "strong price infinite for n > 2", [("price finite", r.price != INF)])

    for n in sizes:
        if n**n > budget:
            continue
        spec = FixtureSpec("po-quadratic", n=n, eps=eps)
        r = price(spec, P.PO)
        bound = "3 for n = 2" if n == 2 else "Theta(n^2)"
        limit = 3 if n == 2 else n * n
        closed(spec, P.PO, r, bound, [(f"strong price <= {limit}", r.strong_price <= limit)])
    return rows


def _sweep_checks():
    P = PropertyId
    F = Fraction
    two = lambda n: n == 2  # noqa: E731
    every = lambda n: True  # noqa: E731
    return [
        (P.EF1, "price <= 2/sqrt(3)", two, lambda r, n: 3 * r.opt**2 <= 4 * r.best_fair**2),
        (P.EFX, "price <= 3/2", two, lambda r, n: r.price <= F(3, 2)),
        (P.BAL, "price <= 4/3", two, lambda r, n: r.price <= F(4, 3)),
        (P.MNW, "strong price <= 5/4", two, lambda r, n: r.strong_price <= F(5, 4)),
        (P.MEW, "strong price <= 3/2", two, lambda r, n: r.strong_price <= F(3, 2)),
        (P.LEX, "strong price <= 3/2", two, lambda r, n: r.strong_price <= F(3, 2)),
        (P.PO, "strong price <= 3", two, lambda r, n: r.strong_price <= 3),
        (P.RR, "price <= n", every, lambda r, n: r.price <= n),
        (P.RR, "strong price <= n^2", every, lambda r, n: r.strong_price <= n * n),
        (P.BAL, "price <= 4 sqrt(n)", every, lambda r, n: r.opt**2 <= 16 * n * r.best_fair**2),
        (P.PO, "price = 1", every, lambda r, n: r.price == 1),
        (P.PO, "worst PO welfare >= 1/n", every, lambda r, n: n * r.worst_fair >= 1),
        (P.MNW, "worst MNW welfare >= 1", every, lambda r, n: r.worst_fair >= 1),
        (P.LEX, "worst leximin welfare >= 1", every, lambda r, n: r.worst_fair >= 1),
    ]


def sweep_instances(seed: int, count: int, budget: int) -> list[Instance]:
    """Seeded random instances: half with n = 2, m <= 6, half with n <= 4, m <= 5."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        if k % 2 == 0:
            n, m = 2, rng.randint(1, 6)
        else:
            n, m = rng.randint(2, 4), rng.randint(1, 5)
        if n**m <= budget:
            out.append(random_instance(n, m, rng))
    return out


def _sweep_rows(budget: int, seed: int, count: int, workers: int) -> list[dict]:
    instances = sweep_instances(seed, count, budget)
    rows = []
    for prop, label, applies, holds in _sweep_checks():
        tested = failures = 0
        first_failure = None
        for inst in instances:
            if not applies(inst.n):
                continue
            tested += 1
            report = price_of(inst, prop, budget, workers)
            if not holds(report, inst.n):
                failures += 1
                if first_failure is None:
                    first_failure = instance_to_dict(inst)
        row = {
            "property": prop.value,
            "bound": label,
            "fixture": {"family": "random", "seed": seed, "instances": tested},
            "violations": failures,
            "pass": failures == 0,
        }
        if first_failure is not None:
            row["counterexample"] = first_failure
        rows.append(row)
    return rows


def reproduce(
    budget: int | None = None,
    eps: Fraction = DEFAULT_EPS,
    sizes: tuple[int, ...] = (2, 3, 4),
    seed: int = 0,
    count: int = 200,
    workers: int = 1,
) -> list[dict]:
    budget = default_budget() if budget is None else budget
    return _fixture_rows(budget, eps, list(sizes), workers) + _sweep_rows(budget, seed, count, workers)


def cmd_reproduce(args) -> tuple[int, dict]:
    sizes = tuple(int(s) for s in args.sizes.split(",")) if args.sizes else (2, 3, 4)
    eps = args.eps if args.eps is not None else DEFAULT_EPS
    rows = reproduce(_budget(args), eps, sizes, args.seed, args.count, args.workers)
    failed = [i for i, r in enumerate(rows) if not r["pass"]]
    doc = {"rows": rows, "failed_rows": failed}
    return (EXIT_FAILED if failed else EXIT_OK), doc


# --- output -------------------------------------------------------------------------------------


def _approx(value) -> str:
    if isinstance(value, str) and "/" in value:
        try:
            return f"{value} (~{float(Fraction(value)):.6g})"
        except ValueError:
            return value
    return str(value)


def _flatten(doc, prefix="") -> list[tuple[str, str]]:
    out = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            out += _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(doc, list) and doc and all(isinstance(v, (dict, list)) for v in doc):
        for i, v in enumerate(doc):
            out += _flatten(v, f"{prefix}[{i}]")
    elif isinstance(doc, list):
        out.append((prefix, "[" + ", ".join(_approx(v) for v in doc) + "]"))
    else:
        out.append((prefix, _approx(doc)))
    return out


def _table(doc: dict) -> str:
    if "rows" in doc:
        header = ["property", "bound", "fixture", "price", "strong_price", "pass"]
        lines = [header]
        for r in doc["rows"]:
            fixture = ",".join(f"{k}={v}" for k, v in r["fixture"].items())
            price = r.get("price", f"{r.get('violations', 0)} violations")
            lines.append(
                [r["property"], r["bound"], fixture, _approx(price), _approx(r.get("strong_price", "")),
                 ("ok" if r["pass"] else "FAIL") + (" *" if r.get("note") else "")]
            )
        widths = [max(len(str(l[c])) for l in lines) for c in range(len(header))]
        text = "\n".join("  ".join(str(v).ljust(w) for v, w in zip(l, widths)).rstrip() for l in lines)
        if any(r.get("note") for r in doc["rows"]):
            text += f"\n* {ASYMPTOTIC}"
        return text + "\n(decimals in parentheses are approximate)\n"
    pairs = [(k, v) for k, v in _flatten(doc) if not k.startswith("config.")]
    width = max((len(k) for k, _ in pairs), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in pairs) + "\n"


def _csv(doc: dict) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["property", "bound", "fixture", "opt", "price", "strong_price", "violations", "pass", "note"])
    for r in doc.get("rows", []):
        fixture = ";".join(f"{k}={v}" for k, v in r["fixture"].items())
        writer.writerow(
            [r["property"], r["bound"], fixture, r.get("opt", ""), r.get("price", ""), r.get("strong_price", ""),
             r.get("violations", ""), "pass" if r["pass"] else "fail", r.get("note", "")]
        )
    return buf.getvalue()


def render(doc: dict, fmt: str) -> str:
    if fmt == "table":
        return _table(doc)
    if fmt == "csv":
        if "rows" not in doc:
            raise UsageError("csv output is only available for reproduce")
        return _csv(doc)
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# --- parser ---------------------------------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except InstanceError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, help="enumeration cap (default $FAIRDIV_BUDGET or 10^6)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--format", choices=("json", "table", "csv"), default="json")
    common.add_argument("--out", help="write the output document here instead of stdout")

    parser = argparse.ArgumentParser(prog="fairdiv", description="Exact price-of-fairness toolkit for indivisible goods.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check a property of an allocation")
    p.add_argument("--property", required=True)
    p.add_argument("--instance")
    p.add_argument("--allocation")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", parents=[common], help="welfare maximizers")
    p.add_argument("--objective", required=True, choices=("opt", "mnw", "mew", "leximin"))
    p.add_argument("--instance")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("construct", parents=[common], help="run a constructive algorithm")
    p.add_argument("--alg", required=True, choices=("rr", "ef1-2", "efx-2", "bal-2", "bal-n", "bucketed-rr"))
    p.add_argument("--instance")
    p.add_argument("--order", help="1-based ordering for rr, e.g. 2,1")
    p.add_argument("--ties", choices=("lowest", "adversarial"), default="lowest")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("price", parents=[common], help="price and strong price of a property")
    p.add_argument("--property", required=True)
    p.add_argument("--instance")
    p.add_argument("--ties", choices=("lowest", "adversarial"), default="lowest")
    p.set_defaults(func=cmd_price)

    p = sub.add_parser("generate", parents=[common], help="emit a lower-bound fixture instance")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--x", type=int)
    p.add_argument("--eps", type=_rational)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("search", parents=[common], help="hill-climb for high-price instances")
    p.add_argument("--property", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--strong", action="store_true", help="maximize the strong price")
    p.add_argument("--ties", choices=("lowest", "adversarial"), default="lowest")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("reproduce", parents=[common], help="recompute the bound table at desk scale")
    p.add_argument("--eps", type=_rational)
    p.add_argument("--sizes", help="comma-separated agent counts (default 2,3,4)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200, help="random instances in the sweep")
    p.set_defaults(func=cmd_reproduce)
    return parser


def _error(kind: str, message: str) -> dict:
    return {"error": {"type": kind, "message": message}}


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Run one command; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_INPUT
        return code, "", ""
    try:
        code, doc = args.func(args)
        doc = {"command": args.command, "config": _config(args), **doc}
        text = render(doc, args.format)
    except BudgetExceeded as exc:
        return EXIT_BUDGET, "", json.dumps(_error("budget_exceeded", str(exc))) + "\n"
    except FileNotFoundError as exc:
        return EXIT_FILE, "", json.dumps(_error("file_error", str(exc))) + "\n"
    except InvariantViolation as exc:
        return EXIT_FAILED, "", json.dumps(_error("internal_error", str(exc))) + "\n"
    except (InstanceError, DimensionError, UsageError, ValueError) as exc:
        return EXIT_INPUT, "", json.dumps(_error("bad_input", str(exc))) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            return EXIT_FILE, "", json.dumps(_error("file_error", f"cannot write {args.out}: {exc}")) + "\n"
        return code, "", ""
    return code, text, ""


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
