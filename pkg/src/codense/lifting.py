"""The codensity lifting engine.

A lifting parameter is an observation object (a fiber element over a carrier
of truth values or grid values) together with an algebra map turning functor
output over that carrier back into the carrier.  The lift of a structure P
over X is computed in three steps:

1. enumerate the test maps: base functions u from X into the observation
   carrier that carry P into the observation structure (membership is decided
   uniformly by ``P <= u*(observation)``, never by per-instance predicates);
2. for each test map, pull the observation structure back along the
   composite ``algebra . F(u) : F(X) -> carrier``;
3. take the fiber meet of all the pulled-back structures over F(X).

An empty test set yields the fiber top, by the empty-meet convention.  With
several parameters the meet ranges over all tests of all parameters, which
coincides with the meet of the single-parameter lifts.

Strategies: relational and topological instances enumerate the *whole* test
set ("exhaustive"); the pseudometric instance quantizes test codomains to a
value grid ("grid"), which under-approximates the test set and therefore
over-approximates the lift by a bounded, one-sided error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import InputError
from .fibration import Fibration, FiberElement, FiberOrderResult, arrow_exists
from .functors import ExpectedValue, Functor, Subdist
from .instances import PMet, _offdiag_pairs, pmet, truncated_distance
from .sets import FinFun, FinSet, compose, enumerate_functions

EXHAUSTIVE = "exhaustive"
GRID = "grid"


@dataclass(frozen=True)
class LiftingParameter:
    """An observation object above a carrier plus an algebra map into it."""

    name: str
    omega_hat: FiberElement
    tau: Union[FinFun, ExpectedValue]

    def __post_init__(self):
        if isinstance(self.tau, FinFun):
            if self.tau.cod != self.omega_hat.base:
                raise InputError(
                    f"algebra of {self.name!r} must land in the observation carrier"
                )


@dataclass(frozen=True)
class Lifting:
    """A fibration, a functor, a parameter family, and a test strategy.

    The family may be empty, in which case every structure lifts to the
    fiber top.
    """

    fibration: Fibration
    functor: Functor
    params: tuple[LiftingParameter, ...]
    strategy: str = EXHAUSTIVE

    def __post_init__(self):
        if self.strategy not in (EXHAUSTIVE, GRID):
            raise InputError(f"unknown strategy {self.strategy!r}")
        needs_grid = isinstance(self.fibration, PMet)
        if needs_grid and self.strategy != GRID:
            raise InputError(
                "the pseudometric instance only supports the grid strategy"
            )
        if not needs_grid and self.strategy != EXHAUSTIVE:
            raise InputError(
                f"{self.fibration.name} supports only the exhaustive strategy"
            )
        for p in self.params:
            if p.omega_hat.fibration != self.fibration.name:
                raise InputError(
                    f"observation of {p.name!r} lives in {p.omega_hat.fibration}, "
                    f"not {self.fibration.name}"
                )
            self.fibration.validate(p.omega_hat)
            if isinstance(p.tau, ExpectedValue):
                if not isinstance(self.functor, Subdist) or not isinstance(
                    self.fibration, PMet
                ):
                    raise InputError(
                        "the expected-value algebra needs the subdistribution "
                        "functor over the pseudometric instance"
                    )
            else:
                if p.tau.dom != self.functor.obj(p.omega_hat.base):
                    raise InputError(
                        f"algebra of {p.name!r} is not defined on "
                        f"{self.functor.name}(observation carrier)"
                    )

    # -- engine ----------------------------------------------------------------
    def hom_set(self, P: FiberElement, omega_hat: FiberElement) -> list[FinFun]:
        return hom_set(self.fibration, P, omega_hat, self.strategy)

    def contributions(self, P: FiberElement) -> list[FiberElement]:
        """One pulled-back observation per (parameter, test map), unmeeted."""
        self.fibration.validate(P)
        out = []
        for param in self.params:
            for u in self.hom_set(P, param.omega_hat):
                out.append(_contribution(self, param, u))
        return out

    def lift(self, P: FiberElement) -> FiberElement:
        return _lift_cached(self, P)

    def lift_arrow_ok(
        self, f: FinFun, P: FiberElement, Q: FiberElement
    ) -> FiberOrderResult:
        """Whether the lift acts on the arrow over f: lift(P) must sit below
        the pullback of lift(Q) along F(f)."""
        if not arrow_exists(self.fibration, f, P, Q):
            raise InputError("f does not carry P into Q, nothing to lift")
        lifted_f = self.functor.map(f)
        return self.fibration.leq(
            self.lift(P), self.fibration.pullback(lifted_f, self.lift(Q))
        )


def hom_set(
    fibration: Fibration,
    P: FiberElement,
    omega_hat: FiberElement,
    strategy: str = EXHAUSTIVE,
) -> list[FinFun]:
    """All test maps from P into the observation object.

    A base function u qualifies iff ``P <= u*(observation)``.  With the
    exhaustive strategy this is the full hom-set; with the grid strategy it
    is its restriction to grid-valued functions.
    """
    if strategy not in (EXHAUSTIVE, GRID):
        raise InputError(f"unknown strategy {strategy!r}")
    fibration.validate(P)
    out = []
    for u in enumerate_functions(P.base, omega_hat.base):
        if fibration.leq(P, fibration.pullback(u, omega_hat)):
            out.append(u)
    return out


def _contribution(
    lifting: Lifting, param: LiftingParameter, u: FinFun
) -> FiberElement:
    fib, functor = lifting.fibration, lifting.functor
    FX = functor.obj(u.dom)
    if isinstance(param.tau, ExpectedValue):
        # exact evaluation: distance between expected values of u, truncated
        assert isinstance(fib, PMet) and isinstance(functor, Subdist)
        top_value = fib.top_value
        uval = {x: Fraction(u(x)) for x in u.dom}
        expect = {}
        for lbl in FX:
            w = functor.weights(u.dom, lbl)
            expect[lbl] = sum((uval[x] * w[x] for x in u.dom), Fraction(0))
        return pmet(
            FX,
            top_value,
            {
                (p, q): truncated_distance(expect[p], expect[q], top_value)
                for (p, q) in _offdiag_pairs(FX)
            },
        )
    w = compose(param.tau, functor.map(u))
    return fib.pullback(w, param.omega_hat)


@lru_cache(maxsize=None)
def _lift_cached(lifting: Lifting, P: FiberElement) -> FiberElement:
    FX = lifting.functor.obj(P.base)
    return lifting.fibration.meet(FX, lifting.contributions(P))


# -- spec-level entry points -------------------------------------------------


def codensity_lift(
    fibration: Fibration,
    param: LiftingParameter,
    functor: Functor,
    P: FiberElement,
    strategy: str = EXHAUSTIVE,
) -> FiberElement:
    """Lift of a single-parameter codensity lifting at P."""
    return Lifting(fibration, functor, (param,), strategy).lift(P)


def codensity_lift_multi(
    fibration: Fibration,
    family: Sequence[LiftingParameter],
    functor: Functor,
    P: FiberElement,
    strategy: str = EXHAUSTIVE,
) -> FiberElement:
    """Lift of a multi-parameter codensity lifting at P; the empty family
    gives the fiber top over F(base of P)."""
    return Lifting(fibration, functor, tuple(family), strategy).lift(P)


def lift_arrow(
    fibration: Fibration,
    params: Union[LiftingParameter, Sequence[LiftingParameter]],
    functor: Functor,
    f: FinFun,
    P: FiberElement,
    Q: FiberElement,
    strategy: str = EXHAUSTIVE,
) -> FiberOrderResult:
    fam = (params,) if isinstance(params, LiftingParameter) else tuple(params)
    return Lifting(fibration, functor, fam, strategy).lift_arrow_ok(f, P, Q)
