"""Command-line interface.

Exit status: 0 when every check passes, 1 when some check fails, 2 for usage,
parse and input errors.
"""

from __future__ import annotations

import argparse
import sys

from . import catalog as catalog_mod
from .equations import (
    DEFAULT_SOLVE_BUDGET,
    EquationSystem,
    Exhausted,
    Solution,
    is_algebraically_closed_sample,
    is_verbally_closed,
    solve,
)
from .errors import BudgetExceeded, RetractKitError
from .groups import conjugacy_classes, sylow_subgroup
from .perm import Permutation
from .report import CheckResult, Report, assignment
from .retracts import RetractionNotFound, find_retraction_brute, find_retraction_lemma, variety_membership
from .structure import is_nilpotent, monolith, normal_subgroups
from .words import OPPOSITE, S4_LAWS, STANDARD, LawSet, holds_law, parse_law

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _gens(sub):
    return [str(sub.parent.elements[i]) for i in sub.generators]


def _primes(n):
    out, p = [], 2
    while n > 1:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    return out


def _group(args, ref):
    return catalog_mod.resolve(ref, args.catalog_obj)


def _subgroup(args, group, ref):
    """``H`` as a group reference (natural inclusion) or as ``<(1 2 3), (1 2)>``."""
    ref = ref.strip()
    if ref.startswith("<") and ref.endswith(">"):
        body = ref[1:-1].strip()
        gens = [Permutation.from_cycles(part.strip(), group.degree) for part in _split_gens(body)]
        return group.subgroup(gens)
    return group.subgroup_of(_group(args, ref))


def _split_gens(body):
    parts, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p for p in parts if p.strip()]


# -- commands --------------------------------------------------------------


def cmd_analyze(args):
    g = _group(args, args.group)
    normals = normal_subgroups(g)
    rep = monolith(g, normals)
    report = Report(f"analyze {args.group}")
    sylows = {}
    for p in _primes(g.order):
        s = sylow_subgroup(g, p)
        sylows[str(p)] = {"order": s.order, "generators": _gens(s)}
    info = {
        "order": g.order,
        "degree": g.degree,
        "abelian": g.is_abelian,
        "nilpotent": is_nilpotent(g),
        "exponent": g.exponent,
        "class_sizes": [len(c) for c in conjugacy_classes(g)],
        "normal_subgroup_orders": [n.order for n in normals],
        "simple": len(normals) == 2,
        "monolithic": rep.is_monolithic,
        "monolith_order": rep.monolith.order,
        "monolith_generators": _gens(rep.monolith),
        "monolith_abelian": rep.monolith_abelian,
        "sylow": sylows,
    }
    summary = (f"order {g.order}, {'abelian' if g.is_abelian else 'non-abelian'}, "
               f"{'nilpotent' if info['nilpotent'] else 'not nilpotent'}, {len(normals)} normal subgroup{'s' if len(normals) != 1 else ''}, ")
    summary += (f"monolith of order {rep.monolith.order}" if rep.is_monolithic else "not monolithic")
    report.add(CheckResult("analysis", True, summary, info))
    return report


def cmd_law(args):
    g = _group(args, args.group)
    law = parse_law(args.law)
    res = holds_law(g, law, budget=args.budget or 10**8, reduce=not args.no_reduce, convention=args.convention)
    report = Report(f"law check {args.group}")
    if res.holds:
        summary = f"{args.law} holds ({res.assignments_evaluated} of {res.assignments_total} assignments)"
    else:
        summary = f"{args.law} fails at " + ", ".join(f"{k} = {v}" for k, v in res.counterexample.items())
        summary += f" (value {res.value})"
    report.add(CheckResult("law", res.holds, summary, {
        "convention": args.convention, "assignments_total": res.assignments_total,
        "assignments_evaluated": res.assignments_evaluated,
        "witness": assignment(res.counterexample), "value": None if res.value is None else str(res.value)}))
    return report


def cmd_solve(args):
    g = _group(args, args.group)
    system = EquationSystem.parse(args.system, g, args.vars.split(",") if args.vars else None)
    res = solve(system, g, budget=args.budget or DEFAULT_SOLVE_BUDGET)
    report = Report(f"solve {args.group}")
    if isinstance(res, Solution):
        report.add(CheckResult("solve", True, str(res), {"solution": assignment(res.assignment)}))
    elif isinstance(res, Exhausted):
        report.add(CheckResult("solve", False, f"budget of {res.budget} assignments exhausted",
                               {"searched": res.searched}))
    else:
        report.add(CheckResult("solve", False, f"no solution among {res.searched} assignments",
                               {"searched": res.searched}))
    return report


def cmd_closedness(args):
    g = _group(args, args.group)
    sub = _subgroup(args, g, args.subgroup)
    report = Report(f"closedness {args.group} {args.subgroup}")
    budget = args.budget or DEFAULT_SOLVE_BUDGET
    audit = is_verbally_closed(sub, args.max_length, args.max_vars, budget=budget)
    report.add(CheckResult("verbal", audit.closed is True, audit.describe(), {
        "word": audit.word_text, "target": None if audit.target is None else str(audit.target),
        "words_checked": audit.words_checked, "exhausted": audit.exhausted}))
    if args.system:
        alg = is_algebraically_closed_sample(sub, [EquationSystem.parse(s, sub.as_group()) for s in args.system], budget)
        if alg.closed:
            summary = f"all {alg.systems_checked} systems solvable in H when solvable in G"
        elif alg.closed is None:
            summary = f"budget exhausted on {alg.exhausted}"
        else:
            summary = f"{alg.counterexample} is solvable in G but not in H"
        report.add(CheckResult("algebraic", alg.closed is True, summary,
                               {"systems_checked": alg.systems_checked,
                                "counterexample": None if alg.counterexample is None else str(alg.counterexample)}))
    return report


def cmd_retract(args):
    g = _group(args, args.group)
    sub = _subgroup(args, g, args.subgroup)
    report = Report(f"retract {args.group} {args.subgroup}")
    cert = None
    if args.method in ("lemma", "auto"):
        try:
            cert = find_retraction_lemma(g, sub)
        except RetractionNotFound as exc:
            if args.method == "lemma":
                report.add(CheckResult("retraction", False, "lemma construction failed", {"diagnostics": exc.diagnostics}))
                return report
        except RetractKitError as exc:
            if args.method == "lemma":
                report.add(CheckResult("retraction", False, str(exc)))
                return report
    if cert is None:
        try:
            cert = find_retraction_brute(g, sub, budget=args.budget or 10_000_000)
        except BudgetExceeded as exc:
            report.add(CheckResult("retraction", False, f"search budget exhausted: {exc}"))
            return report
        if cert is None:
            report.add(CheckResult("retraction", False, "no retraction exists (exhaustive search)"))
            return report
    checks = cert.verify()
    ok = all(checks.values())
    report.add(CheckResult("retraction", ok,
                           f"retraction found ({cert.method}), kernel order {cert.kernel.order}",
                           {"method": cert.method, "kernel_order": cert.kernel.order,
                            "kernel_generators": _gens(cert.kernel), "verify": checks,
                            "generator_images": {str(g.elements[i]): str(cert.rho(g.elements[i])) for i in g.gen_indices}}))
    return report


def cmd_variety(args):
    g = _group(args, args.group)
    gen = _group(args, args.generator)
    laws = S4_LAWS if not args.no_laws else LawSet("none", ())
    if args.law:
        laws = LawSet("custom", tuple(parse_law(t, name=t) for t in args.law))
    cert = variety_membership(g, gen, k_max=args.k_max, law_db=laws, budget=args.budget or 10_000_000)
    report = Report(f"variety {args.group} {args.generator}")
    details = {"verdict": cert.verdict, "verified": cert.verify(), "notes": cert.notes}
    if cert.verdict == "member":
        summary = f"member: section of order {cert.section.order} in {gen}^{cert.k}, kernel order {cert.kernel.order}"
        details.update(k=cert.k, section_generators=_gens(cert.section), kernel_order=cert.kernel.order)
    elif cert.verdict == "non_member":
        summary = f"non-member: {cert.law.name} holds in {gen} but fails at " + ", ".join(
            f"{k} = {v}" for k, v in cert.witness.items())
        details.update(law=cert.law.name, witness=assignment(cert.witness))
    else:
        summary = f"unknown within k <= {args.k_max}"
    report.add(CheckResult("variety", cert.verdict == "member", summary, details))
    return report


def cmd_verify_paper(args):
    from .suite import run_suite

    convention = OPPOSITE if args.flip_convention else STANDARD
    return run_suite(convention=convention, k_max=args.k_max, star_k=args.star_k)


# -- argument parsing --------------------------------------------------------


def _global_options(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=("text", "json"), default=default("text"))
    parser.add_argument("--threads", type=int, default=default(1),
                        help="worker cap; the current implementation runs serially")
    parser.add_argument("--budget", type=int, default=default(None), help="search budget for the command")
    parser.add_argument("--catalog", default=default(None), help="catalog file with named groups")
    parser.add_argument("--timings", action="store_true", default=default(False),
                        help="include timings (makes output run-dependent)")


def build_parser():
    parser = argparse.ArgumentParser(prog="retractkit", description=__doc__.splitlines()[0])
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="order, lattice, monolith, Sylow subgroups")
    p.add_argument("group")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("law", parents=[common], help="law checks")
    lsub = p.add_subparsers(dest="law_command", required=True)
    p = lsub.add_parser("check", parents=[common])
    p.add_argument("group")
    p.add_argument("law")
    p.add_argument("--convention", choices=(STANDARD, OPPOSITE), default=STANDARD)
    p.add_argument("--no-reduce", action="store_true", help="scan every assignment")
    p.set_defaults(func=cmd_law)

    p = sub.add_parser("solve", parents=[common], help="least solution of a system")
    p.add_argument("group")
    p.add_argument("system", help="equations separated by ';', constants as <(1 2 3)>")
    p.add_argument("--vars", help="comma separated variable order")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("closedness", parents=[common], help="bounded closedness audits")
    p.add_argument("group")
    p.add_argument("subgroup", help="group reference or <(1 2 3), (1 2)>")
    p.add_argument("--max-length", type=int, default=4)
    p.add_argument("--max-vars", type=int, default=2)
    p.add_argument("--system", action="append", help="system for the algebraic sample (repeatable)")
    p.set_defaults(func=cmd_closedness)

    p = sub.add_parser("retract", parents=[common], help="construct a retraction G -> H")
    p.add_argument("group")
    p.add_argument("subgroup")
    p.add_argument("--method", choices=("auto", "lemma", "brute"), default="auto")
    p.set_defaults(func=cmd_retract)

    p = sub.add_parser("variety", parents=[common], help="membership of G in var(generator)")
    p.add_argument("group")
    p.add_argument("generator")
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--no-laws", action="store_true", help="skip the law database")
    p.add_argument("--law", action="append", help="use these laws instead of the S4 database")
    p.set_defaults(func=cmd_variety)

    p = sub.add_parser("verify-paper", parents=[common], help="run the full reproduction suite")
    p.add_argument("--flip-convention", action="store_true", help="use [a,b] = a b a^-1 b^-1 as primary")
    p.add_argument("--k-max", type=int, default=2, help="power bound for variety sections")
    p.add_argument("--star-k", type=int, default=1, choices=(1, 2),
                   help="2 adds the S4^2 section sweep (up to conjugacy)")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        args.catalog_obj = (catalog_mod.Catalog.from_file(args.catalog) if args.catalog
                            else catalog_mod.shipped_catalog())
        report = args.func(args)
    except BudgetExceeded as exc:
        print(f"retractkit: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, ValueError, RetractKitError, OSError) as exc:
        print(f"retractkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = report.to_json(args.timings) if args.format == "json" else report.to_text(args.timings)
    sys.stdout.write(out)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
