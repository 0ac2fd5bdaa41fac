"""Shared exhaustive law checks, used by the per-module tests at small sizes
and by the acceptance gate at the full bounds."""

from __future__ import annotations

from itertools import product

from codense.fibration import Fibration
from codense.sets import FinFun, FinSet, compose, enumerate_functions, identity

DOMAIN = ("a", "b", "c", "d")
MIDDLE = ("x", "y", "z", "w")
TARGET = ("p", "q", "r", "s")


def carrier(atoms, n: int) -> FinSet:
    return FinSet(atoms[:n])


def check_order_laws(fib: Fibration, X: FinSet, sample_step: int = 1) -> None:
    """Reflexivity, transitivity, antisymmetry on the enumerated fiber.

    ``sample_step`` thins the quadratic/cubic scans on large fibers; the
    linear scans stay exhaustive.
    """
    fiber = list(fib.enumerate_fiber(X))
    for P in fiber:
        fib.validate(P)
        assert fib.leq(P, P), f"not reflexive at {P}"
    thinned = fiber[::sample_step]
    for P in thinned:
        for Q in thinned:
            pq, qp = bool(fib.leq(P, Q)), bool(fib.leq(Q, P))
            if pq and qp:
                assert P == Q, f"antisymmetry fails: {P} vs {Q}"
            for R in thinned:
                if pq and fib.leq(Q, R):
                    assert fib.leq(P, R), f"transitivity fails: {P},{Q},{R}"


def check_meet_is_glb(fib: Fibration, X: FinSet, sample_step: int = 1) -> None:
    """The meet of a pair is a lower bound and above every lower bound;
    the empty meet is the top, which dominates the fiber."""
    fiber = list(fib.enumerate_fiber(X))
    top = fib.meet(X, [])
    assert top == fib.top(X)
    for P in fiber:
        assert fib.leq(P, top), f"top not above {P}"
    thinned = fiber[::sample_step]
    for P in thinned:
        for Q in thinned:
            m = fib.meet(X, [P, Q])
            fib.validate(m)
            assert fib.leq(m, P) and fib.leq(m, Q), f"meet not a bound: {P},{Q}"
            for R in fiber:
                if fib.leq(R, P) and fib.leq(R, Q):
                    assert fib.leq(R, m), f"meet not greatest: {R} vs {m}"


def check_pullback_functorial(
    fib: Fibration, X: FinSet, Y: FinSet, Z: FinSet
) -> None:
    """identity pullback is the identity; composed pullback composes."""
    for Q in fib.enumerate_fiber(Y):
        assert fib.pullback(identity(Y), Q) == Q
    fiber_z = list(fib.enumerate_fiber(Z))
    for g in enumerate_functions(Y, Z):
        pulled = {Q: fib.pullback(g, Q) for Q in fiber_z}
        for f in enumerate_functions(X, Y):
            gf = compose(g, f)
            for Q in fiber_z:
                assert fib.pullback(f, pulled[Q]) == fib.pullback(gf, Q), (
                    f"functoriality fails at {f}, {g}, {Q}"
                )


def check_meet_preserved(fib: Fibration, X: FinSet, Y: FinSet) -> None:
    """Pullback preserves the empty meet and binary meets; by the fold
    structure of meets this covers every finite family."""
    fiber = list(fib.enumerate_fiber(Y))
    for f in enumerate_functions(X, Y):
        assert fib.pullback(f, fib.top(Y)) == fib.top(X), f"top not preserved by {f}"
        pulled = {P: fib.pullback(f, P) for P in fiber}
        for i, P in enumerate(fiber):
            for Q in fiber[i + 1 :]:
                m = fib.meet(Y, [P, Q])
                lhs = pulled[m] if m in pulled else fib.pullback(f, m)
                rhs = fib.meet(X, [pulled[P], pulled[Q]])
                assert lhs == rhs, f"meet not preserved by {f} at {P}, {Q}"


def check_cartesian_contract(fib: Fibration, X: FinSet, Y: FinSet) -> None:
    """Arrows over f exist exactly below the pullback, and the Cartesian
    ones recover the pullback bit for bit."""
    from codense.fibration import arrow_exists, is_cartesian

    fiber_y = list(fib.enumerate_fiber(Y))
    fiber_x = list(fib.enumerate_fiber(X))
    for f in enumerate_functions(X, Y):
        for Q in fiber_y:
            pq = fib.pullback(f, Q)
            for P in fiber_x:
                exists = arrow_exists(fib, f, P, Q)
                assert exists == bool(fib.leq(P, pq))
                if exists:
                    assert is_cartesian(fib, f, P, Q) == (P == pq)
