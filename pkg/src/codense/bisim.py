"""Coalgebras and the bisimilarity-like notions induced by a lifting.

Given a lifting and a coalgebra ``c : X -> F(X)``, the one-step predicate
transformer sends a structure P over X to the pullback of the lifted
structure along c.  Its greatest fixed point, computed by iterating
``next = transform(current) meet current`` from the fiber top, is the
codensity bisimilarity: bisimilarity proper over equivalence relations,
simulation preorder over preorders, behavioral pseudometric over metrics,
and an observational topology over topologies.

The meet with the previous iterate makes the sequence antitone by
construction, so on finite fibers termination is unconditional; convergence
is detected by exact payload equality (never by tolerance).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Optional

from .checkers import CheckReport
from .errors import InputError, NonConvergenceError
from .fibration import FiberElement
from .functors import DetLTS, Functor, Machine, Powerset, Subdist
from .instances import BOT, TOP, Top, eqrel
from .lifting import GRID, Lifting
from .sets import FinFun, FinSet


@dataclass(frozen=True)
class Coalgebra:
    """A carrier together with a structure map into the functor image."""

    carrier: FinSet
    functor: Functor
    structure: FinFun

    def __post_init__(self):
        if self.structure.dom != self.carrier:
            raise InputError("structure map must be defined on the carrier")
        if self.structure.cod != self.functor.obj(self.carrier):
            raise InputError(
                f"structure map must land in {self.functor.name}(carrier)"
            )


@dataclass(frozen=True)
class CoalgebraMorphism:
    """A carrier map commuting with the structure maps of two coalgebras."""

    f: FinFun
    src: Coalgebra
    dst: Coalgebra

    def __post_init__(self):
        if self.src.functor != self.dst.functor:
            raise InputError("morphisms only exist between coalgebras of one functor")
        if self.f.dom != self.src.carrier or self.f.cod != self.dst.carrier:
            raise InputError("morphism endpoints do not match the carriers")
        functor = self.src.functor
        lifted = functor.map(self.f)
        for x in self.src.carrier:
            if self.dst.structure(self.f(x)) != lifted(self.src.structure(x)):
                raise InputError(
                    f"not a coalgebra morphism: squares differ at state {x!r}"
                )


@dataclass(frozen=True)
class FixedPointTrace:
    """The antitone iterate sequence of a greatest-fixed-point run.

    Strictly decreasing until the last two entries coincide; the last entry
    is the greatest fixed point.
    """

    iterates: tuple[FiberElement, ...]
    converged_at: int

    @property
    def result(self) -> FiberElement:
        return self.iterates[-1]


def phi(lifting: Lifting, coalg: Coalgebra, P: FiberElement) -> FiberElement:
    """One observation step: pull the lifted structure back along the
    structure map."""
    if P.base != coalg.carrier:
        raise InputError("the structure must live over the coalgebra carrier")
    if lifting.functor != coalg.functor:
        raise InputError("lifting and coalgebra use different functors")
    fib = lifting.fibration
    if isinstance(fib, Top):
        # preimage of a generated topology = topology generated by the
        # preimages, so the (possibly huge) lifted topology over F(X) need
        # not be materialized
        c = coalg.structure
        subbasis = []
        for contrib in lifting.contributions(P):
            for o in contrib.payload:
                members = set(o)
                subbasis.append(tuple(x for x in coalg.carrier if c(x) in members))
        return fib.generate(coalg.carrier, subbasis)
    return fib.pullback(coalg.structure, lifting.lift(P))


def gfp(
    lifting: Lifting, coalg: Coalgebra, max_iter: Optional[int] = None
) -> FixedPointTrace:
    """Greatest fixed point of the one-step transformer, from the fiber top.

    ``max_iter`` defaults to a generous multiple of the fiber height; hitting
    it raises, since finite fibers must stabilize.
    """
    fib = lifting.fibration
    X = coalg.carrier
    if max_iter is None:
        max_iter = 8 * fib.fiber_height(X) + 32
    iterates = [fib.top(X)]
    for _ in range(max_iter):
        cur = iterates[-1]
        nxt = fib.meet(X, [phi(lifting, coalg, cur), cur])
        iterates.append(nxt)
        if nxt == cur:
            return FixedPointTrace(tuple(iterates), len(iterates) - 2)
    raise NonConvergenceError(
        f"no fixed point within {max_iter} steps; this breaks the finite-fiber "
        "contract"
    )


def check_stability(
    lifting: Lifting,
    morphism: CoalgebraMorphism,
    certified_injective: bool = True,
) -> CheckReport:
    """Whether the bisimilarity on the source is the pullback of the one on
    the target along the morphism.

    With parameters whose observations are certified c-injective this is a
    theorem-backed check; otherwise the report is advisory.
    """
    fib = lifting.fibration
    nu_src = gfp(lifting, morphism.src).result
    nu_dst = gfp(lifting, morphism.dst).result
    pulled = fib.pullback(morphism.f, nu_dst)
    advisory = (not certified_injective) or lifting.strategy == GRID
    if nu_src == pulled:
        return CheckReport("pass", None, {"states": len(morphism.src.carrier)}, advisory)
    return CheckReport(
        "fail",
        {
            "source_bisimilarity": nu_src,
            "pulled_back_target": pulled,
        },
        {"states": len(morphism.src.carrier)},
        advisory,
    )


# ---------------------------------------------------------------------------
# coalgebra constructors


def kripke(states: Iterable[str], successors: Mapping[str, Iterable[str]]) -> Coalgebra:
    X = FinSet(states)
    functor = Powerset()
    FX = functor.obj(X)
    mapping = {
        x: functor.encode(X, frozenset(successors.get(x, ()))) for x in X
    }
    return Coalgebra(X, functor, FinFun(X, FX, mapping))


def markov_chain(
    states: Iterable[str],
    rows: Mapping[str, Mapping[str, Fraction | int | str]],
    denominator: int,
) -> Coalgebra:
    """A subdistribution coalgebra; every transition weight must be a
    multiple of 1/denominator and each row must have mass at most one."""
    X = FinSet(states)
    functor = Subdist(denominator)
    FX = functor.obj(X)
    mapping = {}
    for x in X:
        row = {y: Fraction(w) for y, w in rows.get(x, {}).items()}
        for y, w in row.items():
            if y not in X:
                raise InputError(f"transition {x}->{y} leaves the carrier")
            if w < 0 or (w * denominator).denominator != 1:
                raise InputError(
                    f"weight {w} of {x}->{y} is not on the 1/{denominator} grid"
                )
        if sum(row.values(), Fraction(0)) > 1:
            raise InputError(f"row of {x} has mass above one")
        structure = tuple((y, row.get(y, Fraction(0))) for y in X)
        mapping[x] = functor.encode(X, structure)
    return Coalgebra(X, functor, FinFun(X, FX, mapping))


def dfa(
    states: Iterable[str],
    alphabet: Iterable[str],
    accepting: Iterable[str],
    transitions: Mapping[str, Mapping[str, str]],
) -> Coalgebra:
    X = FinSet(states)
    functor = Machine(tuple(alphabet))
    FX = functor.obj(X)
    acc_set = set(accepting)
    mapping = {}
    for x in X:
        nxt = []
        for a in functor.alphabet:
            try:
                nxt.append(transitions[x][a])
            except KeyError:
                raise InputError(f"missing transition from {x!r} on {a!r}")
        flag = TOP if x in acc_set else BOT
        mapping[x] = functor.encode(X, (flag, tuple(nxt)))
    return Coalgebra(X, functor, FinFun(X, FX, mapping))


def det_lts(
    states: Iterable[str],
    alphabet: Iterable[str],
    output: Mapping[str, str],
    step: Mapping[str, str],
) -> Coalgebra:
    X = FinSet(states)
    functor = DetLTS(tuple(alphabet))
    FX = functor.obj(X)
    mapping = {
        x: functor.encode(X, (output[x], step[x])) for x in X
    }
    return Coalgebra(X, functor, FinFun(X, FX, mapping))


# ---------------------------------------------------------------------------
# language-level views of machine coalgebras


def language_map(
    coalg: Coalgebra, depth: int
) -> dict[str, frozenset[tuple[str, ...]]]:
    """Per-state accepted words of length at most ``depth``."""
    if not isinstance(coalg.functor, Machine):
        raise InputError("language tables only exist for machine coalgebras")
    if depth < 0:
        raise InputError("depth must be nonnegative")
    functor = coalg.functor
    X = coalg.carrier
    decoded = {x: functor.decode(X, coalg.structure(x)) for x in X}

    def accepts(x: str, word: tuple[str, ...]) -> bool:
        for a in word:
            x = decoded[x][1][functor.alphabet.index(a)]
        return decoded[x][0] == TOP

    words: list[tuple[str, ...]] = []
    for k in range(depth + 1):
        words.extend(product(functor.alphabet, repeat=k))
    return {
        x: frozenset(w for w in words if accepts(x, w)) for x in X
    }


def indistinguishability(P: FiberElement) -> FiberElement:
    """The equivalence relating points no open of a topology separates."""
    if P.fibration != "top":
        raise InputError("indistinguishability is defined for topologies")
    blocks: dict[tuple[bool, ...], list[str]] = {}
    for x in P.base:
        key = tuple(x in o for o in P.payload)
        blocks.setdefault(key, []).append(x)
    return eqrel(P.base, blocks.values())
