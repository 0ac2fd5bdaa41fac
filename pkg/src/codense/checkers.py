"""Brute-force verifiers for the structural claims behind the engine:
c-injectivity of observation objects, fiberedness of liftings, and the
implication from the first to the second.

All searches are exhaustive over canonical carriers up to a size bound.
Domain carriers use atoms a,b,c,... and codomain carriers x,y,z,... so that
reported witnesses read naturally.  A failed check always carries a witness
bundle that replays: re-evaluating the defining condition on the bundle
reproduces the violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Optional, Sequence

from .errors import InputError
from .fibration import Fibration, FiberElement
from .instances import PMet
from .lifting import EXHAUSTIVE, GRID, Lifting, hom_set
from .sets import FinFun, FinSet, enumerate_functions

DOMAIN_ATOMS = ("a", "b", "c", "d", "e")
CODOMAIN_ATOMS = ("x", "y", "z", "w", "v")


def domain_carrier(n: int) -> FinSet:
    if n > len(DOMAIN_ATOMS):
        raise InputError(f"domain carriers are capped at size {len(DOMAIN_ATOMS)}")
    return FinSet(DOMAIN_ATOMS[:n])


def codomain_carrier(n: int) -> FinSet:
    if n > len(CODOMAIN_ATOMS):
        raise InputError(f"codomain carriers are capped at size {len(CODOMAIN_ATOMS)}")
    return FinSet(CODOMAIN_ATOMS[:n])


@dataclass(frozen=True)
class CheckReport:
    """Pass, or fail with a minimal re-checkable counterexample."""

    verdict: str
    witness: Optional[dict]
    search_bound: dict
    advisory: bool = False

    def __post_init__(self):
        if self.verdict not in ("pass", "fail"):
            raise InputError(f"verdict must be pass or fail, got {self.verdict!r}")
        if self.verdict == "fail" and self.witness is None:
            raise InputError("a failing report must carry a witness")
        if self.verdict == "pass" and self.witness is not None:
            raise InputError("a passing report must not carry a witness")

    def __bool__(self) -> bool:
        return self.verdict == "pass"


def _strategy_for(fib: Fibration) -> str:
    return GRID if isinstance(fib, PMet) else EXHAUSTIVE


def check_cinjective(
    fib: Fibration, omega_hat: FiberElement, bound: int
) -> CheckReport:
    """Exhaustively test whether maps into the observation object extend
    along every Cartesian arrow between carriers of size <= bound.

    Cartesian arrows are enumerated as pairs (f, Q) with source structure
    f*(Q), which covers them all.  Injective f are searched first: their
    witnesses exhibit failures of extension along embeddings, which is the
    informative case; non-injective f are covered in a second pass for
    completeness (some fibrations admit degenerate counterexamples there
    that shadow the instructive ones).
    """
    fib.validate(omega_hat)
    strategy = _strategy_for(fib)
    fibers: dict[FinSet, list[FiberElement]] = {}

    def fiber_of(Y: FinSet) -> list[FiberElement]:
        if Y not in fibers:
            fibers[Y] = list(fib.enumerate_fiber(Y))
        return fibers[Y]

    def find_witness(want_injective: bool) -> Optional[dict]:
        for nx in range(bound + 1):
            X = domain_carrier(nx)
            for ny in range(bound + 1):
                Y = codomain_carrier(ny)
                for f in enumerate_functions(X, Y):
                    if f.is_injective() != want_injective:
                        continue
                    image = f.image()
                    free_ys = [y for y in Y if y not in image]
                    for Q in fiber_of(Y):
                        P = fib.pullback(f, Q)
                        for g in hom_set(fib, P, omega_hat, strategy):
                            if not _extends(
                                fib, omega_hat, f, Q, g, free_ys
                            ):
                                return {
                                    "X": X,
                                    "Y": Y,
                                    "f": f,
                                    "P": P,
                                    "Q": Q,
                                    "g": g,
                                }
        return None

    witness = find_witness(want_injective=True)
    if witness is None:
        witness = find_witness(want_injective=False)
    if witness is None:
        return CheckReport("pass", None, {"bound": bound})
    return CheckReport("fail", witness, {"bound": bound})


def _extends(
    fib: Fibration,
    omega_hat: FiberElement,
    f: FinFun,
    Q: FiberElement,
    g: FinFun,
    free_ys: list[str],
) -> bool:
    """Is there an arrow h from Q into the observation with h . f = g?"""
    required: dict[str, str] = {}
    for x in f.dom:
        y = f(x)
        v = g(x)
        if required.setdefault(y, v) != v:
            return False  # f merges points that g separates: no h can exist
    omega = omega_hat.base
    for completion in product(omega.elements, repeat=len(free_ys)):
        h = FinFun(f.cod, omega, {**required, **dict(zip(free_ys, completion))})
        if fib.leq(Q, fib.pullback(h, omega_hat)):
            return True
    return False


def check_fibered(lifting: Lifting, bound: int) -> CheckReport:
    """Exhaustively test that lifting commutes with pullback: the lift of
    f*(P) must equal the pullback of the lift of P along F(f), for every
    base map f and every P over carriers of size <= bound.

    Grid-strategy liftings yield an advisory report (their test sets are
    quantized), though the comparison itself stays exact.
    """
    fib = lifting.fibration
    functor = lifting.functor
    advisory = lifting.strategy == GRID
    for ny in range(bound + 1):
        Y = codomain_carrier(ny)
        for P in fib.enumerate_fiber(Y):
            lift_P = lifting.lift(P)
            for nx in range(bound + 1):
                X = domain_carrier(nx)
                for f in enumerate_functions(X, Y):
                    left = lifting.lift(fib.pullback(f, P))
                    right = fib.pullback(functor.map(f), lift_P)
                    if left != right:
                        return CheckReport(
                            "fail",
                            {"f": f, "P": P, "lift_of_pullback": left,
                             "pullback_of_lift": right},
                            {"bound": bound},
                            advisory,
                        )
    return CheckReport("pass", None, {"bound": bound}, advisory)


def check_theorem_battery(entries: Sequence, bound: Optional[int] = None) -> list[dict]:
    """For each catalog entry, check c-injectivity of every observation and
    fiberedness of the lifting, and assert that the first implies the second.

    When some observation fails c-injectivity the fiberedness verdict is
    still reported but nothing is asserted either way; the implication is
    one-directional.
    """
    results = []
    for entry in entries:
        cb = entry.cinjective_bound if bound is None else min(entry.cinjective_bound, bound)
        fb = entry.fibered_bound if bound is None else min(entry.fibered_bound, bound)
        lifting = entry.lifting()
        seen: list[FiberElement] = []
        cinj_reports = []
        for p in lifting.params:
            if p.omega_hat in seen:
                continue
            seen.append(p.omega_hat)
            cinj_reports.append(check_cinjective(lifting.fibration, p.omega_hat, cb))
        fibered_report = check_fibered(lifting, fb)
        all_cinjective = all(r.verdict == "pass" for r in cinj_reports)
        results.append(
            {
                "name": entry.name,
                "cinjective": cinj_reports,
                "fibered": fibered_report,
                "implication_checked": all_cinjective,
                "implication_holds": (not all_cinjective)
                or fibered_report.verdict == "pass",
            }
        )
    return results
