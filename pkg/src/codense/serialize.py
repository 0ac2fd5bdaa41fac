"""The structured-text (JSON) input document and canonical serialization.

One document configures a fibration, a functor, a parameter family, and any
named fiber elements, coalgebras, and coalgebra morphisms the command needs.
Rationals travel as "p/q" strings.  Semantic errors name the document path
of the offending entry; syntax errors keep the parser's line and column.

The canonical output form is sorted-key, two-space-indented JSON with a
trailing newline: serializing a parsed canonical document is byte-identical
to the input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional

from . import catalog as cat
from . import functors as fn
from .bisim import Coalgebra, CoalgebraMorphism, dfa, det_lts, kripke, markov_chain
from .errors import InputError
from .fibration import Fibration, FiberElement
from .instances import (
    EqRel,
    PMet,
    Pre,
    Top,
    ERel,
    eqrel,
    erel,
    pmet,
    pmet_dist,
    pmet_top_value,
    preorder,
    topology,
)
from .lifting import EXHAUSTIVE, GRID, Lifting, LiftingParameter
from .sets import FinFun, FinSet

FORMAT_VERSION = 1


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _fraction(value, path: str) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{path}: {value!r} is not a rational p/q")


@dataclass
class InputDocument:
    raw: dict
    fibration: Fibration
    functor: fn.Functor
    params: tuple[LiftingParameter, ...]
    strategy: str
    elements: dict[str, FiberElement]
    coalgebras: dict[str, Coalgebra]
    morphisms: dict[str, CoalgebraMorphism]
    options: dict
    certified: bool = True  # all parameters built from the certified catalog

    def lifting(self) -> Lifting:
        return Lifting(self.fibration, self.functor, self.params, self.strategy)


def parse_document(text: str) -> InputDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(raw, dict):
        raise InputError("top level: expected an object")
    if raw.get("codense") != FORMAT_VERSION:
        raise InputError(
            f'top level: expected "codense": {FORMAT_VERSION} version key'
        )
    fib = _parse_fibration(raw.get("fibration"), "fibration")
    functor = _parse_functor(raw.get("functor"), "functor")
    strategy = GRID if isinstance(fib, PMet) else EXHAUSTIVE
    params = tuple(
        _parse_parameter(p, fib, functor, f"parameters[{i}]")
        for i, p in enumerate(raw.get("parameters", []))
    )
    elements = {
        name: _parse_element(spec, fib, f"elements.{name}")
        for name, spec in raw.get("elements", {}).items()
    }
    coalgebras = {
        name: _parse_coalgebra(spec, functor, f"coalgebras.{name}")
        for name, spec in raw.get("coalgebras", {}).items()
    }
    morphisms = {
        name: _parse_morphism(spec, coalgebras, f"morphisms.{name}")
        for name, spec in raw.get("morphisms", {}).items()
    }
    certified = not any(
        isinstance(p, dict) and p.get("name") == "inline"
        for p in raw.get("parameters", [])
    )
    doc = InputDocument(
        raw,
        fib,
        functor,
        params,
        strategy,
        elements,
        coalgebras,
        morphisms,
        raw.get("options", {}),
        certified,
    )
    try:
        doc.lifting()
    except InputError as e:
        raise InputError(f"parameters: {e}")
    return doc


def load_document(path: str) -> InputDocument:
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    try:
        return parse_document(text)
    except InputError as e:
        raise InputError(f"{path}: {e}")


def serialize_document(doc: InputDocument) -> str:
    return canonical_json(doc.raw)


def _parse_fibration(spec, path) -> Fibration:
    if isinstance(spec, str):
        spec = {"name": spec}
    if not isinstance(spec, dict) or "name" not in spec:
        raise InputError(f"{path}: expected a name")
    name = spec["name"]
    if name == "pmet":
        top_value = _fraction(spec.get("bound", 1), f"{path}.bound")
        step = spec.get("step")
        eps = _fraction(step, f"{path}.step") if step is not None else None
        return PMet(top_value, eps)
    if name in ("erel", "pre", "eqrel", "top"):
        return {"erel": ERel, "pre": Pre, "eqrel": EqRel, "top": Top}[name]()
    raise InputError(f"{path}: unknown fibration {name!r}")


def _parse_functor(spec, path) -> fn.Functor:
    if isinstance(spec, str):
        spec = {"name": spec}
    if not isinstance(spec, dict) or "name" not in spec:
        raise InputError(f"{path}: expected a name")
    name = spec["name"]
    if name == "powerset":
        return fn.Powerset()
    if name == "identity":
        return fn.IdentityFunctor()
    if name == "subdist":
        d = spec.get("denominator")
        if not isinstance(d, int) or d < 1:
            raise InputError(f"{path}.denominator: expected a positive integer")
        return fn.Subdist(d)
    if name in ("machine", "detlts"):
        alphabet = spec.get("alphabet")
        if not isinstance(alphabet, list) or not all(
            isinstance(a, str) for a in alphabet
        ):
            raise InputError(f"{path}.alphabet: expected a list of symbols")
        return fn.Machine(tuple(alphabet)) if name == "machine" else fn.DetLTS(
            tuple(alphabet)
        )
    raise InputError(f"{path}: unknown functor {name!r}")


def _parse_parameter(spec, fib, functor, path) -> LiftingParameter:
    if isinstance(spec, str):
        spec = {"name": spec}
    if not isinstance(spec, dict) or "name" not in spec:
        raise InputError(f"{path}: expected a parameter name")
    name = spec["name"]
    omega_default = {
        "pre": cat.omega_pre,
        "eqrel": cat.omega_eqrel,
        "top": cat.omega_sierpinski,
    }
    try:
        if name == "diamond":
            return cat.diamond_param(omega_default[fib.name]())
        if name == "box":
            return cat.box_param(omega_default[fib.name]())
        if name == "inf":
            if not isinstance(fib, PMet) or fib.epsilon is None:
                raise InputError("needs the pmet fibration with a step")
            return cat.inf_param(fib.top_value, fib.epsilon)
        if name in ("expected", "expected-value", "e"):
            if not isinstance(fib, PMet) or fib.epsilon is None:
                raise InputError("needs the pmet fibration with a step")
            return cat.expected_param(fib.top_value, fib.epsilon)
        if name == "thr":
            if not isinstance(functor, fn.Subdist):
                raise InputError("threshold tests need the subdist functor")
            return cat.thr_param(
                _fraction(spec.get("r", "1/2"), f"{path}.r"), functor.denominator
            )
        if name == "thr-family":
            raise InputError('expand "thr-family" into explicit thr parameters')
        if name == "acc":
            if not isinstance(functor, fn.Machine):
                raise InputError("the accept observation needs the machine functor")
            omega = _parameter_omega(spec, fib, path)
            return LiftingParameter("acc", omega, fn.acc(functor.alphabet))
        if name == "next":
            if not isinstance(functor, fn.Machine):
                raise InputError("successor observations need the machine functor")
            a = spec.get("symbol")
            omega = _parameter_omega(spec, fib, path)
            return LiftingParameter(
                f"next:{a}", omega, fn.next_symbol(a, functor.alphabet)
            )
        if name == "inline":
            omega = _parameter_omega(spec, fib, path)
            graph = spec.get("algebra")
            if not isinstance(graph, dict):
                raise InputError("inline parameters need an algebra graph")
            dom = functor.obj(omega.base)
            tau = FinFun(dom, omega.base, graph)
            return LiftingParameter(spec.get("label", "inline"), omega, tau)
    except KeyError:
        raise InputError(f"{path}: {name!r} is not available over {fib.name}")
    except InputError as e:
        raise InputError(f"{path}: {e}")
    raise InputError(f"{path}: unknown parameter {name!r}")


def _parameter_omega(spec, fib, path) -> FiberElement:
    omega_spec = spec.get("omega")
    if omega_spec is None:
        if fib.name == "top":
            return cat.omega_sierpinski()
        if fib.name == "eqrel":
            return cat.omega_eqrel()
        if fib.name == "pre":
            return cat.omega_pre()
        raise InputError(f"{path}.omega: required for {fib.name}")
    if isinstance(omega_spec, str):
        return cat.omega_by_name(omega_spec)
    return _parse_element(omega_spec, fib, f"{path}.omega")


def _parse_element(spec, fib, path) -> FiberElement:
    if not isinstance(spec, dict) or "base" not in spec:
        raise InputError(f"{path}: expected an object with a base")
    base = FinSet(spec["base"])
    if fib.name in ("erel", "pre"):
        pairs = [(x, y) for x, y in spec.get("pairs", [])]
        elem = erel(base, pairs) if fib.name == "erel" else preorder(base, pairs)
    elif fib.name == "eqrel":
        elem = eqrel(base, spec.get("blocks", []))
    elif fib.name == "top":
        elem = topology(base, spec.get("opens", []))
    elif fib.name == "pmet":
        dist = {}
        for triple in spec.get("distances", []):
            if len(triple) != 3:
                raise InputError(f"{path}.distances: expected [x, y, value] triples")
            x, y, v = triple
            value = _fraction(v, f"{path}.distances")
            if fib.epsilon is not None and (value / fib.epsilon).denominator != 1:
                raise InputError(
                    f"{path}.distances: {value} is off the declared 1*{fib.epsilon} grid"
                )
            dist[(x, y)] = value
        elem = pmet(base, fib.top_value, dist)
    else:
        raise InputError(f"{path}: no element form for {fib.name}")
    try:
        fib.validate(elem)
    except InputError as e:
        raise InputError(f"{path}: {e}")
    return elem


def _parse_coalgebra(spec, functor, path) -> Coalgebra:
    if not isinstance(spec, dict) or "states" not in spec:
        raise InputError(f"{path}: expected an object with states")
    states = spec["states"]
    try:
        if isinstance(functor, fn.Powerset):
            return kripke(states, spec.get("successors", {}))
        if isinstance(functor, fn.Subdist):
            rows = {
                x: {y: _fraction(w, f"{path}.rows.{x}") for y, w in row.items()}
                for x, row in spec.get("rows", {}).items()
            }
            return markov_chain(states, rows, functor.denominator)
        if isinstance(functor, fn.Machine):
            return dfa(
                states,
                functor.alphabet,
                spec.get("accepting", []),
                spec.get("transitions", {}),
            )
        if isinstance(functor, fn.DetLTS):
            return det_lts(
                states, functor.alphabet, spec.get("output", {}), spec.get("next", {})
            )
    except InputError as e:
        raise InputError(f"{path}: {e}")
    raise InputError(f"{path}: no coalgebra form for functor {functor.name}")


def _parse_morphism(spec, coalgebras, path) -> CoalgebraMorphism:
    if not isinstance(spec, dict):
        raise InputError(f"{path}: expected an object")
    for key in ("source", "target", "map"):
        if key not in spec:
            raise InputError(f"{path}: missing {key!r}")
    for end in ("source", "target"):
        if spec[end] not in coalgebras:
            raise InputError(f"{path}.{end}: no coalgebra named {spec[end]!r}")
    src = coalgebras[spec["source"]]
    dst = coalgebras[spec["target"]]
    try:
        f = FinFun(src.carrier, dst.carrier, spec["map"])
        return CoalgebraMorphism(f, src, dst)
    except InputError as e:
        raise InputError(f"{path}: {e}")


# ---------------------------------------------------------------------------
# output forms


def element_to_json(elem: FiberElement) -> dict:
    out: dict[str, Any] = {
        "fibration": elem.fibration,
        "base": list(elem.base.elements),
    }
    if elem.fibration in ("erel", "pre"):
        out["pairs"] = [list(p) for p in elem.payload]
    elif elem.fibration == "eqrel":
        out["blocks"] = [list(b) for b in elem.payload]
    elif elem.fibration == "top":
        out["opens"] = [list(o) for o in elem.payload]
    elif elem.fibration == "pmet":
        out["bound"] = str(pmet_top_value(elem))
        out["distances"] = [
            [x, y, str(pmet_dist(elem, x, y))]
            for i, x in enumerate(elem.base.elements)
            for y in elem.base.elements[i + 1 :]
        ]
    return out


def function_to_json(f: FinFun) -> dict:
    return {x: y for x, y in f.graph}


def witness_to_json(witness: Optional[dict]) -> Optional[dict]:
    if witness is None:
        return None
    out = {}
    for key, value in witness.items():
        if isinstance(value, FiberElement):
            out[key] = element_to_json(value)
        elif isinstance(value, FinFun):
            out[key] = function_to_json(value)
        elif isinstance(value, FinSet):
            out[key] = list(value.elements)
        else:
            out[key] = value
    return out


def report_to_json(report) -> dict:
    return {
        "verdict": report.verdict,
        "witness": witness_to_json(report.witness),
        "search_bound": report.search_bound,
        "advisory": report.advisory,
    }
