"""The fibration abstraction: finite complete-lattice fibers over finite sets.

Each concrete fibration (endorelations, preorders, equivalence relations,
pseudometrics, topologies) assigns to every finite carrier ``X`` a finite
complete lattice of "structures on X" (the fiber), and to every function
``f: X -> Y`` a monotone pullback ``f*`` from structures on Y to structures
on X.  The fiber order is the one induced by structure-preserving maps over
the identity: ``P <= Q`` iff the identity carries ``P`` to ``Q``.  Meets are
greatest lower bounds in that order, pullbacks preserve them, and the empty
meet is the fiber's top element.

Vertical arrows carry no data (fibers are posets), so the order is reified
by :meth:`Fibration.leq` rather than by arrow objects.  All payloads use a
canonical representation so that fiber elements are equal exactly when they
denote the same structure; fixed-point detection downstream relies on this.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Optional, Sequence

from .errors import InputError
from .sets import FinFun, FinSet


@dataclass(frozen=True)
class FiberElement:
    """A structure living over a finite carrier, tagged with its fibration."""

    fibration: str
    base: FinSet
    payload: Any  # canonical, hashable; the owning Fibration interprets it

    def __repr__(self) -> str:
        return f"<{self.fibration} over {self.base}: {self.payload!r}>"


@dataclass(frozen=True)
class FiberOrderResult:
    """Verdict of a fiber-order comparison, with a violation witness on failure."""

    holds: bool
    witness: Optional[Any] = None

    def __post_init__(self):
        if not self.holds and self.witness is None:
            raise InputError("a failed comparison must carry a witness")

    def __bool__(self) -> bool:
        return self.holds


class Fibration:
    """Interface of one concrete fibration instance.

    ``enumerable`` and ``exact`` are capability flags: whether bounded fiber
    enumeration is available and whether payload values are represented
    exactly.  Every advertised capability is exercised by the law suite in
    the test corpus.
    """

    name: str = "?"
    enumerable: bool = True
    exact: bool = True

    # instances are stateless apart from configuration, so equality is by
    # type; configured instances (the pseudometric one) override this
    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(type(self).__qualname__)

    # -- payload contract ---------------------------------------------------
    def validate(self, elem: FiberElement) -> None:
        """Raise InputError unless ``elem`` is a well-formed element of this fibration."""
        raise NotImplementedError

    def is_well_formed(self, elem: FiberElement) -> bool:
        try:
            self.validate(elem)
            return True
        except InputError:
            return False

    # -- lattice structure ---------------------------------------------------
    def leq(self, P: FiberElement, Q: FiberElement) -> FiberOrderResult:
        raise NotImplementedError

    def top(self, X: FinSet) -> FiberElement:
        """The greatest element of the fiber over X (the empty meet)."""
        raise NotImplementedError

    def meet(self, X: FinSet, family: Sequence[FiberElement]) -> FiberElement:
        """Greatest lower bound of ``family`` in the fiber over X; top if empty."""
        raise NotImplementedError

    def pullback(self, f: FinFun, Q: FiberElement) -> FiberElement:
        """Reindex Q along f: the structure on dom(f) induced by f."""
        raise NotImplementedError

    def enumerate_fiber(self, X: FinSet) -> Iterator[FiberElement]:
        """Every well-formed element over X exactly once, deterministically."""
        raise NotImplementedError

    def fiber_height(self, X: FinSet) -> int:
        """An upper bound on the length of strictly decreasing chains."""
        raise NotImplementedError

    # -- shared helpers -------------------------------------------------------
    def _check_mine(self, elem: FiberElement) -> None:
        if elem.fibration != self.name:
            raise InputError(
                f"element belongs to {elem.fibration!r}, not {self.name!r}"
            )

    def _check_same_base(self, P: FiberElement, Q: FiberElement) -> None:
        self._check_mine(P)
        self._check_mine(Q)
        if P.base != Q.base:
            raise InputError(f"base mismatch: {P.base} vs {Q.base}")


def arrow_exists(
    fib: Fibration, f: FinFun, P: FiberElement, Q: FiberElement
) -> bool:
    """Whether f underlies a structure-preserving map P -> Q.

    Decided through the pullback: such a map exists iff P <= f*(Q).
    """
    if f.dom != P.base or f.cod != Q.base:
        raise InputError("function endpoints do not match the fiber elements")
    return bool(fib.leq(P, fib.pullback(f, Q)))


def is_cartesian(
    fib: Fibration, f: FinFun, P: FiberElement, Q: FiberElement
) -> bool:
    """Whether the arrow over f from P to Q reflects structure exactly.

    Requires that the arrow exists at all; it is Cartesian iff P = f*(Q)
    on the nose (isometries, relation-reflecting maps, embeddings).
    """
    if not arrow_exists(fib, f, P, Q):
        raise InputError("no arrow over f from P to Q; Cartesian-ness undefined")
    return P == fib.pullback(f, Q)
