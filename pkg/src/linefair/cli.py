"""Command-line interface.

Exit status: 0 success, 1 infeasible or undefined result (or a failed
verification), 2 argument or parse error, 3 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from linefair import algorithms, io
from linefair.core import as_fraction
from linefair.errors import ArgumentError, CapacityError
from linefair.fairness import WELFARE_KINDS, report
from linefair.oracle import CONTIGUOUS, GENERAL, Constraint, Notion, min_epsilon, optimal_welfare
from linefair.pof import DEFINED, FAMILIES, FamilySpec, generate, price_of_fairness, verify_family_bound

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

ALGORITHMS = ("proportional", "equitable", "ef2", "round-robin", "refine", "round")


def _fraction_arg(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except ArgumentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _fraction_list(text: str) -> list[Fraction]:
    return [_fraction_arg(x) for x in text.split(",") if x.strip()]


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ArgumentError(f"cannot read {path}: {exc.strerror}") from exc


def _ordering(values):
    if values is None:
        return None
    return [a - 1 for a in values]


def _family_args(p: argparse.ArgumentParser):
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--epsilon", type=_fraction_arg)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--denominator", type=int, default=100)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linefair", description="Contiguous fair allocation of items on a line.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=True):
        if instance:
            p.add_argument("--instance", "-i", default="-", help="instance JSON file, '-' for stdin")
        p.add_argument("--output", "-o", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("gen", help="generate an instance family")
    _family_args(p)
    common(p, instance=False)

    p = sub.add_parser("allocate", help="run an allocation algorithm")
    p.add_argument("--alg", required=True, choices=ALGORITHMS)
    p.add_argument("--ordering", type=_int_list, help="1-based agent order, e.g. 2,1,3")
    p.add_argument("--cuts", type=_fraction_list, help="n-1 cut points in [0, m] for --alg round")
    common(p)

    p = sub.add_parser("check", help="fairness measures of an allocation")
    p.add_argument("--allocation", "-a", required=True)
    common(p)

    p = sub.add_parser("oracle", help="exhaustive search")
    p.add_argument("--objective", choices=("min-eps", "max-welfare"), default="min-eps")
    p.add_argument("--notion", help="fairness notion (constraint for max-welfare)")
    p.add_argument("--space", choices=(CONTIGUOUS, GENERAL), default=CONTIGUOUS)
    p.add_argument("--welfare", choices=WELFARE_KINDS, default="utilitarian")
    p.add_argument("--epsilon", type=_fraction_arg, default=Fraction(0))
    p.add_argument("--ordering", type=_int_list)
    common(p)

    p = sub.add_parser("pof", help="price of fairness over contiguous allocations")
    p.add_argument("--notion", required=True)
    p.add_argument("--welfare", choices=WELFARE_KINDS, default="utilitarian")
    common(p)

    p = sub.add_parser("verify", help="check a family's claimed bounds against the oracle")
    _family_args(p)
    common(p, instance=False)
    return parser


def _spec(args) -> FamilySpec:
    return FamilySpec(args.family, n=args.n, m=args.m, epsilon=args.epsilon, seed=args.seed, denominator=args.denominator)


def _allocate(args, inst):
    order = _ordering(args.ordering)
    if args.alg == "proportional":
        return algorithms.allocate_proportional(inst)
    if args.alg == "equitable":
        return algorithms.allocate_equitable(inst, order)
    if args.alg == "ef2":
        return algorithms.allocate_envy_free_two(inst)
    if args.alg == "round-robin":
        return algorithms.allocate_round_robin(inst)
    if args.alg == "refine":
        return algorithms.equitable_refine(inst)
    if args.cuts is None:
        if inst.n != 2:
            raise ArgumentError("--alg round needs --cuts for more than 2 agents")
        division = algorithms.cut_and_choose(inst)
    else:
        division = algorithms.DivisibleAllocation(tuple(args.cuts), tuple(order or range(inst.n)))
    return algorithms.round_divisible(inst, division)


def _oracle(args, inst):
    order = _ordering(args.ordering)
    if args.objective == "min-eps":
        if args.notion is None:
            raise ArgumentError("--objective min-eps needs --notion")
        notion = Notion.parse(args.notion)
        res = min_epsilon(inst, notion, args.space, ordering=order)
        doc = {"objective": "min-eps", "notion": notion.value}
    else:
        constraint = Constraint(args.notion, args.epsilon) if args.notion else None
        res = optimal_welfare(inst, args.welfare, constraint, args.space, ordering=order)
        doc = {
            "objective": "max-welfare",
            "welfare": args.welfare,
            "constraint": None if constraint is None else {"notion": constraint.notion.value, "epsilon": str(constraint.epsilon)},
        }
    doc.update(
        space=args.space,
        value=None if res.value is None else str(res.value),
        witness=None if res.witness is None else io.allocation_to_json(res.witness),
        explored=res.explored,
        feasible=res.feasible,
    )
    return doc, EXIT_OK if res.feasible else EXIT_INFEASIBLE


def _text(doc, indent="") -> str:
    lines = []
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_text(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                lines.append(_text(item, indent + "  "))
                lines.append("")
        else:
            lines.append(f"{indent}{key:<16} {value}")
    return "\n".join(lines).rstrip("\n")


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = EXIT_OK
        if args.command in ("gen", "verify"):
            spec = _spec(args)
            if args.command == "gen":
                doc = io.instance_to_json(generate(spec))
            else:
                rep = verify_family_bound(spec)
                doc = rep.to_json()
                status = EXIT_OK if rep.holds else EXIT_INFEASIBLE
        else:
            inst = io.parse_instance(io.loads(_read(args.instance)))
            if args.command == "allocate":
                doc = io.allocation_to_json(_allocate(args, inst))
            elif args.command == "check":
                alloc = io.parse_allocation(io.loads(_read(args.allocation)), inst.n)
                doc = report(inst, alloc).to_json()
            elif args.command == "oracle":
                doc, status = _oracle(args, inst)
            else:
                res = price_of_fairness(inst, args.notion, args.welfare)
                doc = res.to_json()
                status = EXIT_OK if res.status == DEFINED else EXIT_INFEASIBLE
    except CapacityError as exc:
        print(f"linefair: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ArgumentError as exc:
        print(f"linefair: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = io.dumps(doc) if args.format == "json" else _text(doc) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
