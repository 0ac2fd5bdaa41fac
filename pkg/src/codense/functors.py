"""Set endofunctors: powerset, discretized subdistributions, deterministic
labelled transition, and the automaton functor 2 x X^Sigma.

Each functor materializes F(X) as a finite carrier with a canonical label per
element, plus codecs between labels and structured values, so arrow maps and
coalgebra structure maps are ordinary :class:`FinFun` values.  The algebra
maps ("modalities") used as lifting parameters live at the bottom of this
module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable

from .errors import InputError, SizeCapError
from .instances import BOT, TOP, TWO
from .sets import FinFun, FinSet

MAX_IMAGE = 4096


class Functor:
    name: str = "?"

    def _elements(self, X: FinSet) -> list:
        """Structured values of F(X), in enumeration order."""
        raise NotImplementedError

    def label(self, structure) -> str:
        raise NotImplementedError

    def apply_map(self, f: FinFun, structure):
        """Structured arrow action of F on one element."""
        raise NotImplementedError

    # -- derived interface ----------------------------------------------------
    def obj(self, X: FinSet) -> FinSet:
        return _table(self, X)[0]

    def decode(self, X: FinSet, label: str):
        return _table(self, X)[1][label]

    def encode(self, X: FinSet, structure) -> str:
        lbl = self.label(structure)
        table = _table(self, X)[1]
        if lbl not in table:
            raise InputError(f"{lbl!r} is not an element of {self.name}({X})")
        return lbl

    def map(self, f: FinFun) -> FinFun:
        FX, dec_x, _ = _table(self, f.dom)
        FY = self.obj(f.cod)
        return FinFun(
            FX, FY, {lbl: self.label(self.apply_map(f, s)) for lbl, s in dec_x.items()}
        )


@lru_cache(maxsize=None)
def _table(functor: Functor, X: FinSet):
    elems = functor._elements(X)
    if len(elems) > MAX_IMAGE:
        raise SizeCapError(
            f"{functor.name}({X}) has {len(elems)} elements, over the cap {MAX_IMAGE}"
        )
    dec = {functor.label(s): s for s in elems}
    if len(dec) != len(elems):
        raise InputError(f"non-unique labels in {functor.name}({X})")
    return FinSet(dec.keys()), dec, {v: k for k, v in dec.items()}


@dataclass(frozen=True)
class IdentityFunctor(Functor):
    name: str = "identity"

    def _elements(self, X):
        return list(X.elements)

    def label(self, structure):
        return structure

    def apply_map(self, f, structure):
        return f(structure)


@dataclass(frozen=True)
class Powerset(Functor):
    """Covariant powerset; arrows act by direct image."""

    name: str = "powerset"

    def _elements(self, X):
        out = [frozenset()]
        for x in X:
            out.extend(s | {x} for s in list(out))
        return out

    def label(self, structure):
        return "{" + ",".join(sorted(structure)) + "}"

    def apply_map(self, f, structure):
        return frozenset(f(x) for x in structure)


@dataclass(frozen=True)
class Subdist(Functor):
    """Subdistributions with weights in {0, 1/D, ..., D/D} and mass <= 1.

    Structured values are tuples of (element, weight) pairs covering the
    whole carrier in order; arrows act by pushforward (summing weights over
    preimages).
    """

    denominator: int
    name: str = "subdist"

    def __post_init__(self):
        if self.denominator < 1:
            raise InputError("the weight denominator must be at least 1")

    def _elements(self, X):
        D = self.denominator
        out = []
        for ks in product(range(D + 1), repeat=len(X)):
            if sum(ks) <= D:
                out.append(
                    tuple((x, Fraction(k, D)) for x, k in zip(X.elements, ks))
                )
        return out

    def label(self, structure):
        parts = [f"{x}:{w}" for x, w in structure if w]
        return "{" + ",".join(parts) + "}"

    def apply_map(self, f, structure):
        acc = {y: Fraction(0) for y in f.cod.elements}
        for x, w in structure:
            acc[f(x)] += w
        return tuple((y, acc[y]) for y in f.cod.elements)

    def weights(self, X: FinSet, label: str) -> dict[str, Fraction]:
        return dict(self.decode(X, label))


@dataclass(frozen=True)
class DetLTS(Functor):
    """F(X) = Sigma x X: one output symbol and one successor per state."""

    alphabet: tuple[str, ...]
    name: str = "detlts"

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(self.alphabet)))

    def _elements(self, X):
        return [(s, x) for s in self.alphabet for x in X]

    def label(self, structure):
        return f"({structure[0]},{structure[1]})"

    def apply_map(self, f, structure):
        return (structure[0], f(structure[1]))


@dataclass(frozen=True)
class Machine(Functor):
    """F(X) = 2 x X^Sigma: an accept flag plus one successor per symbol."""

    alphabet: tuple[str, ...]
    name: str = "machine"

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(self.alphabet)))

    def _elements(self, X):
        out = []
        for t in (BOT, TOP):
            for nxt in product(X.elements, repeat=len(self.alphabet)):
                out.append((t, nxt))
        return out

    def label(self, structure):
        t, nxt = structure
        moves = ",".join(f"{a}>{x}" for a, x in zip(self.alphabet, nxt))
        return f"({t};{moves})"

    def apply_map(self, f, structure):
        t, nxt = structure
        return (t, tuple(f(x) for x in nxt))


# ---------------------------------------------------------------------------
# algebra maps (the "modalities" pairing with observation objects)


@dataclass(frozen=True)
class ExpectedValue:
    """Marker for the expected-value algebra on subdistributions.

    Expectations of grid-valued functions under rational weights need not
    land back on the grid, so this algebra is never materialized as a
    carrier-to-carrier map; the lifting engine evaluates it exactly instead.
    """


def diamond() -> FinFun:
    """Possibility on subsets of 2: top iff top is a member."""
    P = Powerset()
    dom = P.obj(TWO)
    return FinFun(
        dom, TWO, {lbl: TOP if TOP in P.decode(TWO, lbl) else BOT for lbl in dom}
    )


def box() -> FinFun:
    """Necessity on subsets of 2: top iff bot is absent (vacuously on the empty set)."""
    P = Powerset()
    dom = P.obj(TWO)
    return FinFun(
        dom, TWO, {lbl: BOT if BOT in P.decode(TWO, lbl) else TOP for lbl in dom}
    )


def inf_map(carrier: FinSet) -> FinFun:
    """Infimum on subsets of a numeric-label carrier; the empty set goes to
    the largest value."""
    values = {lbl: Fraction(lbl) for lbl in carrier}
    top_label = max(carrier, key=values.get)
    P = Powerset()
    dom = P.obj(carrier)
    out = {}
    for lbl in dom:
        s = P.decode(carrier, lbl)
        out[lbl] = min(s, key=values.get) if s else top_label
    return FinFun(dom, carrier, out)


def thr(r, denominator: int) -> FinFun:
    """Threshold test on subdistributions over 2: top iff the mass on top
    is at least r."""
    r = Fraction(r)
    if r < 0 or r > 1:
        raise InputError(f"threshold {r} outside [0,1]")
    F = Subdist(denominator)
    dom = F.obj(TWO)
    out = {}
    for lbl in dom:
        w = F.weights(TWO, lbl)
        out[lbl] = TOP if w[TOP] >= r else BOT
    return FinFun(dom, TWO, out)


def acc(alphabet: Iterable[str]) -> FinFun:
    """Accept-flag observation on machine elements over 2."""
    F = Machine(tuple(alphabet))
    dom = F.obj(TWO)
    return FinFun(dom, TWO, {lbl: F.decode(TWO, lbl)[0] for lbl in dom})


def next_symbol(a: str, alphabet: Iterable[str]) -> FinFun:
    """Successor-under-a observation on machine elements over 2."""
    F = Machine(tuple(alphabet))
    if a not in F.alphabet:
        raise InputError(f"symbol {a!r} not in alphabet {F.alphabet}")
    i = F.alphabet.index(a)
    dom = F.obj(TWO)
    return FinFun(dom, TWO, {lbl: F.decode(TWO, lbl)[1][i] for lbl in dom})
