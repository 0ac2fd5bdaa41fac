"""Closed-form and classical-algorithm ground truth for the built-in
liftings, kept independent of the codensity engine.

Each function evaluates an explicit characterization directly: the
sup-of-inf formula for the subset distance, brute-force maximization over
grid-valued nonexpansive functions for the distribution distance, the
quantifier formulas for powerset preorders, partition refinement for the two
bisimilarity notions, and subbasis closures for the hyperspace topologies.
The test corpus plays these against the generic engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping

from .bisim import Coalgebra
from .errors import InputError
from .fibration import FiberElement
from .functors import Machine, Powerset, Subdist
from .instances import (
    Top,
    _offdiag_pairs,
    eqrel,
    grid_values,
    pmet,
    pmet_dist,
    pmet_top_value,
    preorder,
    relation_pairs,
    topology,
    truncated_distance,
)
from .sets import FinSet


@dataclass(frozen=True)
class OracleResult:
    value: object
    method: str


# ---------------------------------------------------------------------------
# metric oracles


def hausdorff(d: FiberElement) -> FiberElement:
    """The subset pseudometric max(sup-inf, sup-inf), evaluated exactly.

    Empty-set conventions: an empty supremum is 0 and an empty infimum is
    the distance bound, so the empty set sits at full distance from every
    nonempty set and at distance 0 from itself.
    """
    if d.fibration != "pmet":
        raise InputError("the subset distance needs a pseudometric input")
    X = d.base
    top_value = pmet_top_value(d)
    pw = Powerset()
    PX = pw.obj(X)
    subsets = {lbl: pw.decode(X, lbl) for lbl in PX}

    def sup_inf(S, T):
        best = Fraction(0)  # empty supremum
        for x in S:
            inf = top_value  # empty infimum
            for y in T:
                v = pmet_dist(d, x, y)
                if v < inf:
                    inf = v
            if inf > best:
                best = inf
        return best

    dist = {}
    for (sl, tl) in _offdiag_pairs(PX):
        S, T = subsets[sl], subsets[tl]
        dist[(sl, tl)] = max(sup_inf(S, T), sup_inf(T, S))
    return pmet(PX, top_value, dist)


def kantorovich_grid(
    d: FiberElement,
    p: Mapping[str, Fraction],
    q: Mapping[str, Fraction],
    epsilon,
) -> Fraction:
    """Largest difference of expectations over grid-valued nonexpansive
    functions, by brute force."""
    if d.fibration != "pmet":
        raise InputError("the distribution distance needs a pseudometric input")
    X = d.base
    top_value = pmet_top_value(d)
    grid = grid_values(top_value, epsilon)
    if len(grid) ** len(X) > 1 << 20:
        raise InputError(
            f"grid of {len(grid)} values over {len(X)} points is too large "
            "to search exhaustively"
        )
    pairs = _offdiag_pairs(X)
    best = Fraction(0)
    for values in product(grid, repeat=len(X)):
        val = dict(zip(X.elements, values))
        if any(
            abs(val[x] - val[y]) > pmet_dist(d, x, y) for (x, y) in pairs
        ):
            continue
        gap = abs(
            sum((val[x] * p.get(x, Fraction(0)) for x in X), Fraction(0))
            - sum((val[x] * q.get(x, Fraction(0)) for x in X), Fraction(0))
        )
        gap = min(gap, top_value)
        if gap > best:
            best = gap
    return best


# ---------------------------------------------------------------------------
# powerset preorder oracles


def lower_preorder(P: FiberElement) -> FiberElement:
    """S below T iff every x in S has some y in T with x below y."""
    return _powerset_preorder(P, lambda S, T, rel: all(
        any((x, y) in rel for y in T) for x in S
    ))


def upper_preorder(P: FiberElement) -> FiberElement:
    """S below T iff every y in T has some x in S with x below y."""
    return _powerset_preorder(P, lambda S, T, rel: all(
        any((x, y) in rel for x in S) for y in T
    ))


def convex_preorder(P: FiberElement) -> FiberElement:
    """The intersection of the lower and upper preorders."""
    lo, up = lower_preorder(P), upper_preorder(P)
    return preorder(lo.base, set(lo.payload) & set(up.payload))


def _powerset_preorder(P: FiberElement, holds) -> FiberElement:
    if P.fibration != "pre":
        raise InputError("powerset preorders need a preorder input")
    X = P.base
    rel = relation_pairs(P)
    pw = Powerset()
    PX = pw.obj(X)
    subsets = {lbl: sorted(pw.decode(X, lbl)) for lbl in PX}
    pairs = [
        (sl, tl)
        for sl in PX
        for tl in PX
        if holds(subsets[sl], subsets[tl], rel)
    ]
    return preorder(PX, pairs)


# ---------------------------------------------------------------------------
# bisimilarity oracles by partition refinement


def kripke_bisimilarity(coalg: Coalgebra) -> FiberElement:
    """Coarsest equivalence where related states hit the same classes."""
    if not isinstance(coalg.functor, Powerset):
        raise InputError("frame bisimilarity needs a powerset coalgebra")
    X = coalg.carrier
    succ = {x: coalg.functor.decode(X, coalg.structure(x)) for x in X}
    return _refine(X, lambda cls, x: frozenset(cls[s] for s in succ[x]))


def prob_bisimilarity(coalg: Coalgebra) -> FiberElement:
    """Coarsest equivalence where related states give each class equal mass."""
    if not isinstance(coalg.functor, Subdist):
        raise InputError("probabilistic bisimilarity needs a subdistribution coalgebra")
    X = coalg.carrier
    rows = {
        x: coalg.functor.weights(X, coalg.structure(x)) for x in X
    }

    def signature(cls, x):
        mass: dict[int, Fraction] = {}
        for y, w in rows[x].items():
            if w:
                mass[cls[y]] = mass.get(cls[y], Fraction(0)) + w
        return tuple(sorted(mass.items()))

    return _refine(X, signature)


def _refine(X: FinSet, signature) -> FiberElement:
    classes = {x: 0 for x in X}
    while True:
        keys = {x: (classes[x], signature(classes, x)) for x in X}
        renum: dict[tuple, int] = {}
        new = {}
        for x in X:  # canonical class ids in carrier order
            new[x] = renum.setdefault(keys[x], len(renum))
        if new == classes:
            break
        classes = new
    blocks: dict[int, list[str]] = {}
    for x in X:
        blocks.setdefault(classes[x], []).append(x)
    return eqrel(X, blocks.values())


# ---------------------------------------------------------------------------
# hyperspace topology oracles


def vietoris_lower(O: FiberElement) -> FiberElement:
    """Coarsest topology on subsets where "hits U" is open for each open U."""
    return _vietoris(O, hit=True, contained=False)


def vietoris_upper(O: FiberElement) -> FiberElement:
    """Coarsest topology on subsets where "contained in U" is open for each open U."""
    return _vietoris(O, hit=False, contained=True)


def vietoris_full(O: FiberElement) -> FiberElement:
    """Generated by both the hit-sets and the containment-sets."""
    return _vietoris(O, hit=True, contained=True)


def _vietoris(O: FiberElement, hit: bool, contained: bool) -> FiberElement:
    if O.fibration != "top":
        raise InputError("hyperspace topologies need a topology input")
    X = O.base
    pw = Powerset()
    PX = pw.obj(X)
    subsets = {lbl: pw.decode(X, lbl) for lbl in PX}
    subbasis = []
    for o in O.payload:
        U = set(o)
        if hit:
            subbasis.append([lbl for lbl in PX if subsets[lbl] & U])
        if contained:
            subbasis.append([lbl for lbl in PX if subsets[lbl] <= U])
    return Top().generate(PX, subbasis)


# ---------------------------------------------------------------------------
# machine-coalgebra language view (used as ground truth for the
# observational topology)


def language_classes(coalg: Coalgebra, depth: int) -> FiberElement:
    """States grouped by their accepted words of length at most depth."""
    from .bisim import language_map

    table = language_map(coalg, depth)
    groups: dict[frozenset, list[str]] = {}
    for x in coalg.carrier:
        groups.setdefault(table[x], []).append(x)
    return eqrel(coalg.carrier, groups.values())


ORACLES = {
    "hausdorff": hausdorff,
    "kantorovich": kantorovich_grid,
    "lower-preorder": lower_preorder,
    "upper-preorder": upper_preorder,
    "convex-preorder": convex_preorder,
    "kripke-bisimilarity": kripke_bisimilarity,
    "markov-bisimilarity": prob_bisimilarity,
    "lower-vietoris": vietoris_lower,
    "upper-vietoris": vietoris_upper,
    "vietoris": vietoris_full,
}
