"""The built-in liftings: named parameters and the standard entry list.

Each entry bundles a fibration, a functor, a parameter family, and the test
strategy, together with the closed-form construction the lifting is known to
induce.  Observation objects in this catalog are certified c-injective
(re-checked by the theorem battery at small bounds).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import functors as fn
from .errors import InputError
from .fibration import Fibration
from .instances import (
    EqRel,
    PMet,
    Pre,
    Top,
    omega_eqrel,
    omega_pmet,
    omega_pre,
    omega_sierpinski,
)
from .lifting import EXHAUSTIVE, GRID, Lifting, LiftingParameter


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    fibration: Fibration
    functor: fn.Functor
    params: tuple[LiftingParameter, ...]
    strategy: str
    induces: str
    cinjective_bound: int = 3
    fibered_bound: int = 3

    def lifting(self) -> Lifting:
        return Lifting(self.fibration, self.functor, self.params, self.strategy)


def diamond_param(omega) -> LiftingParameter:
    return LiftingParameter("diamond", omega, fn.diamond())


def box_param(omega) -> LiftingParameter:
    return LiftingParameter("box", omega, fn.box())


def inf_param(top_value, epsilon) -> LiftingParameter:
    omega = omega_pmet(top_value, epsilon)
    return LiftingParameter("inf", omega, fn.inf_map(omega.base))


def expected_param(top_value, epsilon) -> LiftingParameter:
    return LiftingParameter(
        "expected-value", omega_pmet(top_value, epsilon), fn.ExpectedValue()
    )


def thr_param(r, denominator: int) -> LiftingParameter:
    return LiftingParameter(
        f"thr:{Fraction(r)}", omega_eqrel(), fn.thr(r, denominator)
    )


def thr_family(denominator: int) -> tuple[LiftingParameter, ...]:
    """All distinct threshold tests on 1/denominator-gridded masses.

    Any threshold r in (k/D, (k+1)/D] acts like (k+1)/D on grid masses, so
    the full unit-interval family collapses to the grid thresholds.
    """
    return tuple(
        thr_param(Fraction(k, denominator), denominator)
        for k in range(denominator + 1)
    )


def acc_param(alphabet) -> LiftingParameter:
    return LiftingParameter("acc", omega_sierpinski(), fn.acc(alphabet))


def next_param(a: str, alphabet) -> LiftingParameter:
    return LiftingParameter(f"next:{a}", omega_sierpinski(), fn.next_symbol(a, alphabet))


def machine_family(alphabet, omega=None) -> tuple[LiftingParameter, ...]:
    """Accept-flag plus one successor observation per symbol.

    The observation object defaults to the two-point space with {top} open;
    passing the two-point equality relation instead yields the language
    equivalence rather than the language topology.
    """
    alphabet = tuple(sorted(alphabet))
    if omega is None:
        omega = omega_sierpinski()
    out = [LiftingParameter("acc", omega, fn.acc(alphabet))]
    for a in alphabet:
        out.append(LiftingParameter(f"next:{a}", omega, fn.next_symbol(a, alphabet)))
    return tuple(out)


def standard_catalog(
    top_value=1,
    epsilon=Fraction(1, 2),
    denominator: int = 2,
    alphabet=("a",),
) -> list[CatalogEntry]:
    pre, eq, top = Pre(), EqRel(), Top()
    pm = PMet(top_value, epsilon)
    sp = omega_sierpinski()
    entries = [
        CatalogEntry(
            "lower-preorder", pre, fn.Powerset(),
            (diamond_param(omega_pre()),), EXHAUSTIVE,
            "S below T iff every member of S sits below some member of T",
        ),
        CatalogEntry(
            "upper-preorder", pre, fn.Powerset(),
            (box_param(omega_pre()),), EXHAUSTIVE,
            "S below T iff every member of T sits above some member of S",
        ),
        CatalogEntry(
            "convex-preorder", pre, fn.Powerset(),
            (diamond_param(omega_pre()), box_param(omega_pre())), EXHAUSTIVE,
            "the meet of the lower and upper preorders",
        ),
        CatalogEntry(
            "kripke-bisimilarity", eq, fn.Powerset(),
            (diamond_param(omega_eqrel()),), EXHAUSTIVE,
            "S and T equivalent iff they hit the same equivalence classes",
        ),
        CatalogEntry(
            "markov-bisimilarity", eq, fn.Subdist(denominator),
            thr_family(denominator), EXHAUSTIVE,
            "distributions equivalent iff they give each class equal mass",
        ),
        CatalogEntry(
            "hausdorff", pm, fn.Powerset(),
            (inf_param(top_value, epsilon),), GRID,
            "the symmetric sup-of-inf distance between subsets",
        ),
        CatalogEntry(
            "kantorovich", pm, fn.Subdist(denominator),
            (expected_param(top_value, epsilon),), GRID,
            "largest difference of expected values over nonexpansive tests",
        ),
        CatalogEntry(
            "lower-vietoris", top, fn.Powerset(),
            (diamond_param(sp),), EXHAUSTIVE,
            "generated by the sets of subsets hitting each open",
            fibered_bound=2,
        ),
        CatalogEntry(
            "upper-vietoris", top, fn.Powerset(),
            (box_param(sp),), EXHAUSTIVE,
            "generated by the sets of subsets contained in each open",
            fibered_bound=2,
        ),
        CatalogEntry(
            "vietoris", top, fn.Powerset(),
            (diamond_param(sp), box_param(sp)), EXHAUSTIVE,
            "generated by both hit-sets and containment-sets of opens",
            fibered_bound=2,
        ),
        CatalogEntry(
            "bisimulation-topology", top, fn.Machine(tuple(alphabet)),
            machine_family(alphabet), EXHAUSTIVE,
            "the observational topology on automaton states",
            fibered_bound=2,
        ),
    ]
    return entries


def entry_by_name(name: str, **options) -> CatalogEntry:
    for e in standard_catalog(**options):
        if e.name == name:
            return e
    raise InputError(f"no catalog entry named {name!r}")


_OMEGA_BUILDERS = {
    "pre2": omega_pre,
    "eqrel2": omega_eqrel,
    "sierpinski": omega_sierpinski,
}


def omega_by_name(name: str, top_value=None, epsilon=None):
    if name in _OMEGA_BUILDERS:
        return _OMEGA_BUILDERS[name]()
    if name == "pmet-grid":
        if top_value is None or epsilon is None:
            raise InputError("the grid observation needs a bound and a step")
        return omega_pmet(top_value, epsilon)
    raise InputError(f"unknown observation object {name!r}")
