"""Command-line driver: verification suites, expression expansion, and
cohomology dimension queries.

Exit codes: 0 all checks pass, 1 at least one check fails, 2 unknown suite
or bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import cohom, current, envelope, freequant
from .dsl import DSLError, evaluate, render_value
from .liealg import LieAlgebraData, build_sl
from .reports import Report

SUITES = ("gnw", "bialgebra", "min-presentation", "generation", "defects",
          "sl2-steps", "t-identities", "coproduct-wd", "whitehead", "cartier",
          "bicomplex", "solver")

SUITE_FAULTS = {
    "gnw": ("nu",),
    "bialgebra": ("omega",),
    "defects": ("cocycle-scale",),
    "coproduct-wd": ("cocycle-scale",),
    "sl2-steps": ("drop-step2-term",),
    "solver": ("noneq-theta",),
}

_ALGEBRAS: dict = {}


def _algebra(label: str) -> LieAlgebraData:
    if not (label.startswith("A") and label[1:].isdigit() and int(label[1:]) >= 1):
        raise UsageError(f"unsupported algebra type {label!r}; expected A<k> "
                         "with k >= 1 (A1 = sl_2, A2 = sl_3, ...)")
    if label not in _ALGEBRAS:
        _ALGEBRAS[label] = build_sl(int(label[1:]) + 1)
    return _ALGEBRAS[label]


class UsageError(Exception):
    pass


def _default_bialgebra_degree(g: LieAlgebraData) -> int:
    return 3 if g.n == 2 else 2


def _default_generation_degree(g: LieAlgebraData) -> int:
    return 4 if g.n == 2 else 3


def run_suite(name: str, g: LieAlgebraData, args) -> Report:
    fault = args.inject_fault
    jobs = args.jobs
    if name == "gnw":
        return envelope.verify_gnw(g, fault=fault, jobs=jobs)
    if name == "bialgebra":
        degree = args.max_u_degree or _default_bialgebra_degree(g)
        return current.verify_bialgebra(g, degree, fault=fault, jobs=jobs)
    if name == "min-presentation":
        return current.verify_min_presentation(g, jobs=jobs)
    if name == "generation":
        degree = args.max_u_degree or _default_generation_degree(g)
        return current.verify_generation(g, degree, jobs=jobs)
    if name == "defects":
        return freequant.verify_primitive_defects(g, fault=fault, jobs=jobs)
    if name == "sl2-steps":
        if g.n != 2:
            raise UsageError("sl2-steps runs on --type A1 only")
        return freequant.verify_sl2_steps(g, fault=fault, jobs=jobs)
    if name == "t-identities":
        return freequant.verify_T_identities(g, jobs=jobs)
    if name == "coproduct-wd":
        report = freequant.verify_coproduct_well_defined(g, fault=fault, jobs=jobs)
        if fault is None:
            # the Hopf laws are part of the structural story; under the
            # cocycle-scale fault only relation preservation is the question
            report.checks.extend(freequant.verify_hopf_axioms(g, jobs=jobs).checks)
        return report
    if name == "whitehead":
        return cohom.whitehead_report(g, bound=args.degree or 2, jobs=jobs)
    if name == "cartier":
        report = Report(suite="cartier", algebra="Sym(V), dim V in {1,2,3}")
        for v_dim in (1, 2, 3):
            sub = cohom.cartier_check(v_dim, args.degree or 4, jobs=jobs)
            for c in sub.checks:
                c.id = f"V{v_dim}-{c.id}"
            report.checks.extend(sub.checks)
            report.elapsed_ms += sub.elapsed_ms
        return report
    if name == "bicomplex":
        return cohom.bicomplex_report(g, bound=args.degree or 2, samples=100,
                                      seed=args.seed, jobs=jobs)
    if name == "solver":
        return cohom.solver_report(g, bound=args.degree or 2, runs=20,
                                   seed=args.seed, fault=fault, jobs=jobs)
    raise UsageError(f"unknown suite {name!r}")


def _verify(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; choose from: {', '.join(SUITES)}",
              file=sys.stderr)
        return 2
    if args.inject_fault is not None:
        allowed = SUITE_FAULTS.get(args.suite, ())
        if args.inject_fault not in allowed:
            print(f"suite {args.suite!r} supports faults: "
                  f"{', '.join(allowed) or '(none)'}", file=sys.stderr)
            return 2
    labels = [t.strip() for t in args.type.split(",") if t.strip()]
    reports = []
    try:
        for label in labels:
            g = _algebra(label)
            report = run_suite(args.suite, g, args)
            reports.append(report)
            print(report.render())
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    if args.json:
        payload = (reports[0].to_json_dict() if len(reports) == 1
                   else [r.to_json_dict() for r in reports])
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
        if args.json == "-":
            sys.stdout.write(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
    return 0 if all(r.passed for r in reports) else 1


def _expand(args) -> int:
    try:
        g = _algebra(args.type)
        value = evaluate(args.expression, g)
    except (DSLError, UsageError) as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(render_value(value))
    return 0


def _parse_module_ctor(text: str, g: LieAlgebraData) -> cohom.GModule:
    text = text.strip()

    def parse_at(s: str) -> tuple:
        s = s.lstrip()
        for name in ("trivial", "adjoint", "dual", "tensor", "u_slice"):
            if s.startswith(name):
                rest = s[len(name):].lstrip()
                if name == "trivial":
                    if rest.startswith("("):
                        arg, rest2 = rest[1:].split(")", 1)
                        return cohom.trivial_module(g, int(arg)), rest2
                    return cohom.trivial_module(g), rest
                if name == "adjoint":
                    return cohom.adjoint_module(g), rest
                if name == "u_slice":
                    if not rest.startswith("("):
                        raise UsageError("u_slice needs a degree, e.g. u_slice(2)")
                    arg, rest2 = rest[1:].split(")", 1)
                    return cohom.u_slice_module(g, int(arg)), rest2
                if name == "dual":
                    if not rest.startswith("("):
                        raise UsageError("dual needs an argument")
                    inner, rest2 = parse_at(rest[1:])
                    rest2 = rest2.lstrip()
                    if not rest2.startswith(")"):
                        raise UsageError("expected ')' after dual argument")
                    return cohom.dual_module(inner), rest2[1:]
                if name == "tensor":
                    if not rest.startswith("("):
                        raise UsageError("tensor needs two arguments")
                    left, rest2 = parse_at(rest[1:])
                    rest2 = rest2.lstrip()
                    if not rest2.startswith(","):
                        raise UsageError("expected ',' between tensor arguments")
                    right, rest3 = parse_at(rest2[1:])
                    rest3 = rest3.lstrip()
                    if not rest3.startswith(")"):
                        raise UsageError("expected ')' after tensor arguments")
                    return cohom.tensor_module(left, right), rest3[1:]
        raise UsageError(f"unknown module constructor near {s[:20]!r}; "
                         "use trivial, adjoint, dual(M), tensor(M,M), u_slice(D)")

    module, rest = parse_at(text)
    if rest.strip():
        raise UsageError(f"trailing input in module expression: {rest!r}")
    return module


def _cohomology(args) -> int:
    try:
        g = _algebra(args.type)
        module = _parse_module_ctor(args.module, g)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    dims = cohom.ce_cohomology_dims(module, args.up_to)
    for m, d in enumerate(dims):
        print(f"H^{m}(g, {module.label}) = {d}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qcurrent",
        description="Exact verification of current-algebra quantization "
                    "identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    p_verify.add_argument("--type", default="A1",
                          help="algebra type A<k> (sl_{k+1}); comma-separated "
                               "for several, e.g. A1,A2")
    p_verify.add_argument("--degree", type=int, default=None,
                          help="PBW filtration bound (default 2) / max "
                               "symmetric degree for cartier (default 4)")
    p_verify.add_argument("--max-u-degree", type=int, default=None,
                          help="largest current degree for bialgebra/generation")
    p_verify.add_argument("--seed", type=int, default=0,
                          help="seed for randomized property checks")
    p_verify.add_argument("--json", default=None,
                          help="write the JSON report here ('-' for stdout)")
    p_verify.add_argument("--inject-fault", default=None,
                          help="named perturbation; the suite must then fail")
    p_verify.add_argument("--jobs", type=int, default=1,
                          help="run checks concurrently up to this bound")
    p_verify.set_defaults(func=_verify)

    p_expand = sub.add_parser("expand", help="evaluate an expression to "
                                             "canonical form")
    p_expand.add_argument("expression")
    p_expand.add_argument("--type", default="A1")
    p_expand.set_defaults(func=_expand)

    p_cohom = sub.add_parser("cohomology", help="Lie-algebra cohomology "
                                                "dimensions")
    p_cohom.add_argument("--module", required=True,
                         help="constructor expression, e.g. "
                              "tensor(dual(adjoint), u_slice(2))")
    p_cohom.add_argument("--up-to", type=int, default=2)
    p_cohom.add_argument("--type", default="A1")
    p_cohom.set_defaults(func=_cohomology)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
