"""Command-line front door.

Subcommands: ``lift`` (apply the configured lifting to a named element),
``bisim`` (greatest fixed point on a named coalgebra), ``check``
(c-injectivity, fiberedness, stability, or the full theorem battery),
``compare`` (engine against a closed-form oracle), and ``catalog`` (list the
built-in liftings).

Exit codes: 0 pass, 1 property failure with a witness, 2 invalid input.
Machine-readable output (``--format json``) is canonical and timestamp-free.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import oracles
from .bisim import check_stability, gfp, indistinguishability
from .catalog import entry_by_name, omega_by_name, standard_catalog
from .checkers import check_cinjective, check_fibered, check_theorem_battery
from .errors import InputError
from .fibration import FiberElement
from .instances import PMet, fibration_by_name, pmet_dist, pmet_top_value
from .serialize import (
    canonical_json,
    element_to_json,
    load_document,
    report_to_json,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codense",
        description="codensity liftings and the bisimilarities they induce",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", help="JSON input document")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("lift", help="lift a named fiber element")
    common(p)
    p.add_argument("--element", required=True)

    p = sub.add_parser("bisim", help="greatest fixed point on a named coalgebra")
    common(p)
    p.add_argument("--coalgebra", required=True)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--max-iter", type=int, default=None)

    p = sub.add_parser("check", help="run a structural check")
    common(p)
    p.add_argument(
        "--which",
        required=True,
        choices=("cinjective", "fibered", "stability", "battery"),
    )
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--instance", help="fibration name for cinjective checks")
    p.add_argument("--omega", help="observation object name")
    p.add_argument("--functor", help="unused placeholder for catalog entries")
    p.add_argument("--param", help="catalog entry name for fibered checks")
    p.add_argument("--morphism", help="restrict stability to one morphism")
    p.add_argument("--epsilon", default="1/2", help="grid step P/Q")
    p.add_argument("--top-value", default="1", help="distance bound P/Q")
    p.add_argument("--denominator", type=int, default=2)
    p.add_argument("--alphabet", default="a", help="comma-separated symbols")

    p = sub.add_parser("compare", help="engine versus closed-form oracle")
    common(p)
    p.add_argument("--oracle", required=True, choices=sorted(oracles.ORACLES))
    p.add_argument("--element")
    p.add_argument("--coalgebra")

    p = sub.add_parser("catalog", help="list the built-in liftings")
    common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return {
            "lift": cmd_lift,
            "bisim": cmd_bisim,
            "check": cmd_check,
            "compare": cmd_compare,
            "catalog": cmd_catalog,
        }[args.command](args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _need_doc(args):
    if not args.input:
        raise InputError("this command needs --input FILE")
    return load_document(args.input)


def _emit(args, text_lines, json_payload) -> None:
    if args.format == "json":
        sys.stdout.write(canonical_json(json_payload))
    else:
        for line in text_lines:
            print(line)


def _describe_element(elem: FiberElement) -> list[str]:
    kind = elem.fibration
    lines = [f"{kind} element over {{{','.join(elem.base.elements)}}}"]
    if kind in ("erel", "pre"):
        lines.append("pairs: " + " ".join(f"({x},{y})" for x, y in elem.payload))
    elif kind == "eqrel":
        lines.append("blocks: " + " ".join("{" + ",".join(b) + "}" for b in elem.payload))
    elif kind == "top":
        lines.append("opens: " + " ".join("{" + ",".join(o) + "}" for o in elem.payload))
    elif kind == "pmet":
        lines.append(f"bound: {pmet_top_value(elem)}")
        es = elem.base.elements
        for i, x in enumerate(es):
            for y in es[i + 1 :]:
                lines.append(f"d({x},{y}) = {pmet_dist(elem, x, y)}")
    return lines


def cmd_lift(args) -> int:
    doc = _need_doc(args)
    if args.element not in doc.elements:
        raise InputError(f"no element named {args.element!r} in the document")
    lifted = doc.lifting().lift(doc.elements[args.element])
    _emit(args, _describe_element(lifted), {"lift": element_to_json(lifted)})
    return 0


def cmd_bisim(args) -> int:
    doc = _need_doc(args)
    if args.coalgebra not in doc.coalgebras:
        raise InputError(f"no coalgebra named {args.coalgebra!r} in the document")
    trace = gfp(doc.lifting(), doc.coalgebras[args.coalgebra], args.max_iter)
    result = trace.result
    lines = [f"converged after {trace.converged_at} steps"]
    lines += _describe_element(result)
    if result.fibration == "top":
        classes = indistinguishability(result)
        lines.append(
            "indistinguishability classes: "
            + " ".join("{" + ",".join(b) + "}" for b in classes.payload)
        )
    payload = {
        "bisimilarity": element_to_json(result),
        "iterations": trace.converged_at,
    }
    if args.trace:
        for i, it in enumerate(trace.iterates):
            lines.append(f"-- iterate {i} --")
            lines += _describe_element(it)
        payload["trace"] = [element_to_json(it) for it in trace.iterates]
    _emit(args, lines, payload)
    return 0


def _report_lines(name, report):
    lines = [f"{name}: {report.verdict}" + (" (advisory)" if report.advisory else "")]
    if report.witness is not None:
        for key, value in report.witness.items():
            lines.append(f"  {key} = {value!r}")
    return lines


def cmd_check(args) -> int:
    if args.which == "cinjective":
        bound = args.bound if args.bound is not None else 3
        if args.input:
            doc = _need_doc(args)
            fib = doc.fibration
            if args.omega:
                omega = omega_by_name(
                    args.omega, Fraction(args.top_value), Fraction(args.epsilon)
                )
            elif doc.params:
                omega = doc.params[0].omega_hat
            else:
                raise InputError("no observation object to check")
        else:
            if not args.instance or not args.omega:
                raise InputError("cinjective checks need --instance and --omega")
            fib = fibration_by_name(
                args.instance, Fraction(args.top_value), Fraction(args.epsilon)
            )
            omega = omega_by_name(
                args.omega, Fraction(args.top_value), Fraction(args.epsilon)
            )
            if omega.fibration != fib.name:
                omega = FiberElement(fib.name, omega.base, omega.payload)
                fib.validate(omega)
        report = check_cinjective(fib, omega, bound)
        _emit(args, _report_lines("cinjective", report), report_to_json(report))
        return 0 if report else 1

    if args.which == "fibered":
        if args.input:
            lifting = _need_doc(args).lifting()
            bound = args.bound if args.bound is not None else 2
        elif args.param:
            entry = entry_by_name(
                args.param,
                epsilon=Fraction(args.epsilon),
                denominator=args.denominator,
                alphabet=tuple(args.alphabet.split(",")),
            )
            lifting = entry.lifting()
            bound = args.bound if args.bound is not None else entry.fibered_bound
        else:
            raise InputError("fibered checks need --input or --param")
        report = check_fibered(lifting, bound)
        _emit(args, _report_lines("fibered", report), report_to_json(report))
        return 0 if report else 1

    if args.which == "stability":
        doc = _need_doc(args)
        names = [args.morphism] if args.morphism else sorted(doc.morphisms)
        if not names:
            raise InputError("the document declares no morphisms")
        lifting = doc.lifting()
        lines, payload, ok = [], {}, True
        for name in names:
            if name not in doc.morphisms:
                raise InputError(f"no morphism named {name!r} in the document")
            report = check_stability(lifting, doc.morphisms[name], doc.certified)
            lines += _report_lines(f"stability[{name}]", report)
            payload[name] = report_to_json(report)
            ok &= bool(report)
        _emit(args, lines, payload)
        return 0 if ok else 1

    # battery
    entries = standard_catalog(
        top_value=Fraction(args.top_value),
        epsilon=Fraction(args.epsilon),
        denominator=args.denominator,
        alphabet=tuple(args.alphabet.split(",")),
    )
    results = check_theorem_battery(entries, args.bound)
    lines, payload, ok = [], [], True
    for res in results:
        cinj = all(r.verdict == "pass" for r in res["cinjective"])
        fib_ok = res["fibered"].verdict == "pass"
        ok &= cinj and fib_ok and res["implication_holds"]
        lines.append(
            f"{res['name']}: cinjective={'pass' if cinj else 'fail'} "
            f"fibered={res['fibered'].verdict} "
            f"implication={'ok' if res['implication_holds'] else 'VIOLATED'}"
        )
        payload.append(
            {
                "name": res["name"],
                "cinjective": [report_to_json(r) for r in res["cinjective"]],
                "fibered": report_to_json(res["fibered"]),
                "implication_checked": res["implication_checked"],
                "implication_holds": res["implication_holds"],
            }
        )
    _emit(args, lines, payload)
    return 0 if ok else 1


def cmd_compare(args) -> int:
    doc = _need_doc(args)
    lifting = doc.lifting()
    name = args.oracle

    if name in ("kripke-bisimilarity", "markov-bisimilarity"):
        if not args.coalgebra:
            raise InputError(f"{name} comparison needs --coalgebra")
        coalg = doc.coalgebras.get(args.coalgebra)
        if coalg is None:
            raise InputError(f"no coalgebra named {args.coalgebra!r}")
        engine = gfp(lifting, coalg).result
        oracle_fn = (
            oracles.kripke_bisimilarity
            if name == "kripke-bisimilarity"
            else oracles.prob_bisimilarity
        )
        expected = oracle_fn(coalg)
        agree = engine == expected
        _emit(
            args,
            [f"{name}: {'agree' if agree else 'DISAGREE'}"],
            {
                "agree": agree,
                "engine": element_to_json(engine),
                "oracle": element_to_json(expected),
            },
        )
        return 0 if agree else 1

    if not args.element:
        raise InputError(f"{name} comparison needs --element")
    elem = doc.elements.get(args.element)
    if elem is None:
        raise InputError(f"no element named {args.element!r}")
    engine = lifting.lift(elem)

    if name == "hausdorff":
        expected = oracles.hausdorff(elem)
        eps = lifting.fibration.epsilon
        tolerance = 2 * eps
        dev = _max_metric_deviation(engine, expected)
        agree = dev <= tolerance
        _emit(
            args,
            [
                f"hausdorff: max deviation {dev} against tolerance {tolerance}: "
                + ("agree" if agree else "DISAGREE")
            ],
            {"agree": agree, "max_deviation": str(dev), "tolerance": str(tolerance)},
        )
        return 0 if agree else 1

    if name == "kantorovich":
        functor = lifting.functor
        X = elem.base
        FX = functor.obj(X)
        eps = lifting.fibration.epsilon
        dev = Fraction(0)
        for i, p in enumerate(FX.elements):
            for q in FX.elements[i + 1 :]:
                expected_value = oracles.kantorovich_grid(
                    elem, functor.weights(X, p), functor.weights(X, q), eps
                )
                dev = max(dev, abs(pmet_dist(engine, p, q) - expected_value))
        agree = dev == 0
        _emit(
            args,
            [f"kantorovich: max deviation {dev}: " + ("agree" if agree else "DISAGREE")],
            {"agree": agree, "max_deviation": str(dev), "tolerance": "0"},
        )
        return 0 if agree else 1

    oracle_fn = oracles.ORACLES[name]
    expected = oracle_fn(elem)
    agree = engine == expected
    _emit(
        args,
        [f"{name}: {'agree' if agree else 'DISAGREE'}"],
        {
            "agree": agree,
            "engine": element_to_json(engine),
            "oracle": element_to_json(expected),
        },
    )
    return 0 if agree else 1


def _max_metric_deviation(P: FiberElement, Q: FiberElement) -> Fraction:
    if P.base != Q.base:
        raise InputError("comparing pseudometrics over different carriers")
    dev = Fraction(0)
    es = P.base.elements
    for i, x in enumerate(es):
        for y in es[i + 1 :]:
            dev = max(dev, abs(pmet_dist(P, x, y) - pmet_dist(Q, x, y)))
    return dev


def cmd_catalog(args) -> int:
    entries = standard_catalog()
    lines = []
    payload = []
    for e in entries:
        params = ", ".join(p.name for p in e.params)
        lines.append(
            f"{e.name}: {e.fibration.name} fiber, {e.functor.name} functor, "
            f"parameters [{params}], {e.strategy} tests"
        )
        lines.append(f"    induces: {e.induces}")
        payload.append(
            {
                "name": e.name,
                "fibration": e.fibration.name,
                "functor": e.functor.name,
                "parameters": [p.name for p in e.params],
                "strategy": e.strategy,
                "induces": e.induces,
            }
        )
    _emit(args, lines, payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
