"""The concrete fibrations: endorelations, preorders, equivalence relations,
bounded rational pseudometrics, and finite topologies.

Conventions that everything downstream depends on:

* The fiber order is always "there is a structure-preserving identity map".
  For relations this is pair inclusion; for pseudometrics it is *reversed*
  (larger distances sit lower); for topologies finer sits below coarser,
  because the identity is continuous from a finer space to a coarser one.
* Tops (empty meets) are therefore: the full relation, the full preorder,
  the single-block partition, the all-zero pseudometric, and the indiscrete
  topology.
* All pseudometric values are exact rationals.  No floats anywhere: meets
  and fixed points are detected by payload equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .errors import InputError, SizeCapError
from .fibration import Fibration, FiberElement, FiberOrderResult
from .sets import FinFun, FinSet

BOT = "bot"
TOP = "top"
TWO = FinSet((BOT, TOP))

# Guard for generated open-set families; nothing legitimate gets near it.
MAX_OPEN_FAMILY = 1 << 15


# ---------------------------------------------------------------------------
# payload constructors


def erel(base: FinSet, pairs: Iterable[tuple[str, str]]) -> FiberElement:
    payload = tuple(sorted(set((x, y) for x, y in pairs)))
    return FiberElement("erel", base, payload)


def preorder(base: FinSet, pairs: Iterable[tuple[str, str]]) -> FiberElement:
    payload = tuple(sorted(set((x, y) for x, y in pairs)))
    return FiberElement("pre", base, payload)


def eqrel(base: FinSet, blocks: Iterable[Iterable[str]]) -> FiberElement:
    canon = tuple(sorted(tuple(sorted(b)) for b in blocks))
    return FiberElement("eqrel", base, canon)


def eqrel_from_pairs(base: FinSet, pairs: Iterable[tuple[str, str]]) -> FiberElement:
    """Build an equivalence element from a set of pairs assumed to be an
    equivalence relation on the base (used by pullback-style computations)."""
    related = set(pairs)
    seen: dict[str, int] = {}
    blocks: list[list[str]] = []
    for x in base:
        for i, b in enumerate(blocks):
            if (b[0], x) in related:
                blocks[i].append(x)
                seen[x] = i
                break
        else:
            seen[x] = len(blocks)
            blocks.append([x])
    return eqrel(base, blocks)


def pmet(
    base: FinSet,
    top_value: Fraction | int | str,
    dist: Mapping[tuple[str, str], Fraction | int | str],
) -> FiberElement:
    t = Fraction(top_value)
    vals = []
    for x, y in _offdiag_pairs(base):
        if (x, y) in dist:
            v = Fraction(dist[(x, y)])
        elif (y, x) in dist:
            v = Fraction(dist[(y, x)])
        else:
            raise InputError(f"missing distance for pair ({x},{y})")
        vals.append(v)
    return FiberElement("pmet", base, (t, tuple(vals)))


def topology(base: FinSet, opens: Iterable[Iterable[str]]) -> FiberElement:
    fam = set(tuple(sorted(set(o))) for o in opens)
    return FiberElement("top", base, tuple(sorted(fam)))


def _offdiag_pairs(base: FinSet) -> list[tuple[str, str]]:
    es = base.elements
    return [(es[i], es[j]) for i in range(len(es)) for j in range(i + 1, len(es))]


def pmet_top_value(P: FiberElement) -> Fraction:
    return P.payload[0]


def pmet_dist(P: FiberElement, x: str, y: str) -> Fraction:
    if x == y:
        return Fraction(0)
    es = P.base.elements
    i, j = es.index(x), es.index(y)
    if i > j:
        i, j = j, i
    k = 0
    for a in range(len(es)):
        for b in range(a + 1, len(es)):
            if a == i and b == j:
                return P.payload[1][k]
            k += 1
    raise InputError(f"({x},{y}) not a pair over {P.base}")


def eqrel_blocks(P: FiberElement) -> tuple[tuple[str, ...], ...]:
    return P.payload


def eqrel_class_of(P: FiberElement) -> dict[str, int]:
    out = {}
    for i, b in enumerate(P.payload):
        for x in b:
            out[x] = i
    return out


def relation_pairs(P: FiberElement) -> frozenset[tuple[str, str]]:
    """The pair set of a relational element (erel, pre, or eqrel)."""
    if P.fibration in ("erel", "pre"):
        return frozenset(P.payload)
    if P.fibration == "eqrel":
        out = set()
        for b in P.payload:
            for x in b:
                for y in b:
                    out.add((x, y))
        return frozenset(out)
    raise InputError(f"{P.fibration} elements have no pair set")


def topology_opens(P: FiberElement) -> tuple[tuple[str, ...], ...]:
    return P.payload


def as_erel(P: FiberElement) -> FiberElement:
    """View a preorder or equivalence element as a bare endorelation."""
    return erel(P.base, relation_pairs(P))


# ---------------------------------------------------------------------------
# endorelations


class ERel(Fibration):
    name = "erel"

    def validate(self, elem):
        self._check_mine(elem)
        base = set(elem.base.elements)
        if elem.payload != tuple(sorted(set(elem.payload))):
            raise InputError("relation payload is not canonical")
        for x, y in elem.payload:
            if x not in base or y not in base:
                raise InputError(f"pair ({x},{y}) not over base {elem.base}")

    def leq(self, P, Q):
        self._check_same_base(P, Q)
        qs = set(Q.payload)
        for pair in P.payload:
            if pair not in qs:
                return FiberOrderResult(False, pair)
        return FiberOrderResult(True)

    def top(self, X):
        return erel(X, ((x, y) for x in X for y in X))

    def meet(self, X, family):
        if not family:
            return self.top(X)
        for P in family:
            self._check_mine(P)
            if P.base != X:
                raise InputError("meet over mismatched bases")
        pairs = set(family[0].payload)
        for P in family[1:]:
            pairs &= set(P.payload)
        return erel(X, pairs)

    def pullback(self, f, Q):
        self._check_mine(Q)
        if f.cod != Q.base:
            raise InputError("pullback: function does not land in the base of Q")
        qs = set(Q.payload)
        return erel(
            f.dom,
            ((x, y) for x in f.dom for y in f.dom if (f(x), f(y)) in qs),
        )

    def enumerate_fiber(self, X):
        _check_enum_size(self, X, 4)
        pairs = [(x, y) for x in X for y in X]
        for size in range(len(pairs) + 1):
            for combo in combinations(pairs, size):
                yield FiberElement(self.name, X, tuple(combo))

    def fiber_height(self, X):
        return len(X) ** 2 + 1


class Pre(ERel):
    """Preorders, as the reflexive-transitive part of the endorelation fiber."""

    name = "pre"

    def validate(self, elem):
        self._check_mine(elem)
        base = set(elem.base.elements)
        pairs = set(elem.payload)
        for x, y in pairs:
            if x not in base or y not in base:
                raise InputError(f"pair ({x},{y}) not over base {elem.base}")
        for x in base:
            if (x, x) not in pairs:
                raise InputError(f"not reflexive: missing ({x},{x})")
        for (x, y) in pairs:
            for (y2, z) in pairs:
                if y2 == y and (x, z) not in pairs:
                    raise InputError(f"not transitive: ({x},{y}),({y},{z})")

    def top(self, X):
        return preorder(X, ((x, y) for x in X for y in X))

    def meet(self, X, family):
        underlying = super().meet(X, family)
        return preorder(X, underlying.payload)

    def pullback(self, f, Q):
        underlying = super().pullback(f, Q)
        return preorder(f.dom, underlying.payload)

    def enumerate_fiber(self, X):
        _check_enum_size(self, X, 4)
        for R in ERel.enumerate_fiber(ERel(), X):
            cand = FiberElement(self.name, X, R.payload)
            if self.is_well_formed(cand):
                yield cand


class EqRel(Fibration):
    name = "eqrel"

    def validate(self, elem):
        self._check_mine(elem)
        seen: set[str] = set()
        for b in elem.payload:
            if not b:
                raise InputError("empty block in partition")
            if b != tuple(sorted(b)):
                raise InputError("block not canonical")
            for x in b:
                if x in seen:
                    raise InputError(f"element {x} in two blocks")
                if x not in elem.base:
                    raise InputError(f"element {x} not in base")
                seen.add(x)
        if seen != set(elem.base.elements):
            raise InputError("partition does not cover the base")
        if elem.payload != tuple(sorted(elem.payload)):
            raise InputError("blocks not canonically ordered")

    def leq(self, P, Q):
        self._check_same_base(P, Q)
        cls_q = eqrel_class_of(Q)
        for b in P.payload:
            for x in b[1:]:
                if cls_q[b[0]] != cls_q[x]:
                    return FiberOrderResult(False, (b[0], x))
        return FiberOrderResult(True)

    def top(self, X):
        return eqrel(X, [X.elements] if len(X) else [])

    def meet(self, X, family):
        if not family:
            return self.top(X)
        for P in family:
            self._check_mine(P)
            if P.base != X:
                raise InputError("meet over mismatched bases")
        maps = [eqrel_class_of(P) for P in family]
        sig: dict[tuple[int, ...], list[str]] = {}
        for x in X:
            key = tuple(m[x] for m in maps)
            sig.setdefault(key, []).append(x)
        return eqrel(X, sig.values())

    def pullback(self, f, Q):
        self._check_mine(Q)
        if f.cod != Q.base:
            raise InputError("pullback: function does not land in the base of Q")
        cls_q = eqrel_class_of(Q)
        groups: dict[int, list[str]] = {}
        for x in f.dom:
            groups.setdefault(cls_q[f(x)], []).append(x)
        return eqrel(f.dom, groups.values())

    def enumerate_fiber(self, X):
        _check_enum_size(self, X, 6)
        n = len(X)
        if n == 0:
            yield eqrel(X, [])
            return
        # restricted growth strings: assignment[i] <= 1 + max(assignment[:i])
        def rec(i, assignment, nblocks):
            if i == n:
                blocks: list[list[str]] = [[] for _ in range(nblocks)]
                for j, a in enumerate(assignment):
                    blocks[a].append(X.elements[j])
                yield eqrel(X, blocks)
                return
            for a in range(nblocks + 1):
                yield from rec(i + 1, assignment + [a], max(nblocks, a + 1))

        yield from rec(0, [], 0)

    def fiber_height(self, X):
        return max(len(X), 1)


class PMet(Fibration):
    """Pseudometrics with rational values in [0, top_value].

    The order is reversed relative to pointwise comparison of values: a
    pseudometric with larger distances lies *below* one with smaller
    distances, since the identity is nonexpansive in that direction.
    ``epsilon`` configures the value grid used by fiber enumeration only;
    the lattice operations themselves are grid-free and exact.
    """

    name = "pmet"

    def __init__(self, top_value: Fraction | int | str, epsilon=None):
        self.top_value = Fraction(top_value)
        if self.top_value <= 0:
            raise InputError("the distance bound must be positive")
        self.epsilon = Fraction(epsilon) if epsilon is not None else None
        if self.epsilon is not None:
            if self.epsilon <= 0 or (self.top_value / self.epsilon).denominator != 1:
                raise InputError(
                    f"grid step {self.epsilon} does not evenly divide {self.top_value}"
                )

    def __eq__(self, other):
        return (
            isinstance(other, PMet)
            and other.top_value == self.top_value
            and other.epsilon == self.epsilon
        )

    def __hash__(self):
        return hash(("pmet", self.top_value, self.epsilon))

    def validate(self, elem):
        self._check_mine(elem)
        t, vals = elem.payload
        if t != self.top_value:
            raise InputError(f"distance bound {t} does not match instance {self.top_value}")
        pairs = _offdiag_pairs(elem.base)
        if len(vals) != len(pairs):
            raise InputError("distance vector has the wrong length")
        for v in vals:
            if not isinstance(v, Fraction):
                raise InputError("distances must be exact rationals")
            if v < 0 or v > t:
                raise InputError(f"distance {v} outside [0,{t}]")
        es = elem.base.elements
        d = {}
        for (x, y), v in zip(pairs, vals):
            d[(x, y)] = v
            d[(y, x)] = v
        for x in es:
            d[(x, x)] = Fraction(0)
        for x in es:
            for y in es:
                for z in es:
                    if d[(x, z)] > d[(x, y)] + d[(y, z)]:
                        raise InputError(
                            f"triangle inequality fails on ({x},{y},{z})"
                        )

    def leq(self, P, Q):
        self._check_same_base(P, Q)
        if P.payload[0] != Q.payload[0]:
            raise InputError("comparing pseudometrics with different bounds")
        for (x, y), vp, vq in zip(
            _offdiag_pairs(P.base), P.payload[1], Q.payload[1]
        ):
            if vp < vq:
                return FiberOrderResult(False, (x, y, vp, vq))
        return FiberOrderResult(True)

    def top(self, X):
        return pmet(X, self.top_value, {p: 0 for p in _offdiag_pairs(X)})

    def meet(self, X, family):
        if not family:
            return self.top(X)
        for P in family:
            self._check_mine(P)
            if P.base != X:
                raise InputError("meet over mismatched bases")
            if P.payload[0] != self.top_value:
                raise InputError("meet across different distance bounds")
        vals = tuple(
            max(P.payload[1][k] for P in family)
            for k in range(len(family[0].payload[1]))
        )
        return FiberElement(self.name, X, (self.top_value, vals))

    def pullback(self, f, Q):
        self._check_mine(Q)
        if f.cod != Q.base:
            raise InputError("pullback: function does not land in the base of Q")
        return pmet(
            f.dom,
            Q.payload[0],
            {(x, y): pmet_dist(Q, f(x), f(y)) for (x, y) in _offdiag_pairs(f.dom)},
        )

    def grid(self) -> list[Fraction]:
        if self.epsilon is None:
            raise InputError("this pseudometric instance has no value grid configured")
        steps = int(self.top_value / self.epsilon)
        return [self.epsilon * k for k in range(steps + 1)]

    def enumerate_fiber(self, X):
        _check_enum_size(self, X, 4)
        grid = self.grid()
        pairs = _offdiag_pairs(X)
        for vals in product(grid, repeat=len(pairs)):
            cand = FiberElement(self.name, X, (self.top_value, tuple(vals)))
            if self.is_well_formed(cand):
                yield cand

    def fiber_height(self, X):
        gridsize = (
            int(self.top_value / self.epsilon) + 1 if self.epsilon is not None else 16
        )
        return gridsize * len(X) ** 2 + 2


class Top(Fibration):
    """Finite topologies.  Finer topologies sit below coarser ones, so the
    top of each fiber is the indiscrete topology and meets are generated by
    unions of open-set families."""

    name = "top"

    def validate(self, elem):
        self._check_mine(elem)
        base = tuple(elem.base.elements)
        fam = elem.payload
        if fam != tuple(sorted(set(fam))):
            raise InputError("open family is not canonical")
        sets = [frozenset(o) for o in fam]
        universe = frozenset(base)
        for o, s in zip(fam, sets):
            if o != tuple(sorted(o)):
                raise InputError(f"open {o} not canonical")
            if not s <= universe:
                raise InputError(f"open {o} not a subset of the base")
        if frozenset() not in sets or universe not in sets:
            raise InputError("a topology must contain the empty set and the base")
        have = set(sets)
        for a in sets:
            for b in sets:
                if a | b not in have or a & b not in have:
                    raise InputError("family not closed under union/intersection")

    def leq(self, P, Q):
        # identity continuous from P to Q: every Q-open must be P-open
        self._check_same_base(P, Q)
        popens = set(P.payload)
        for o in Q.payload:
            if o not in popens:
                return FiberOrderResult(False, o)
        return FiberOrderResult(True)

    def top(self, X):
        return topology(X, [(), X.elements])

    def generate(self, X: FinSet, subbasis: Iterable[Iterable[str]]) -> FiberElement:
        """The coarsest topology in which every given set is open: close the
        family under pairwise unions and intersections."""
        fam: set[frozenset[str]] = {frozenset(), frozenset(X.elements)}
        for s in subbasis:
            fam.add(frozenset(s))
        while True:
            new = set()
            fam_list = list(fam)
            for i, a in enumerate(fam_list):
                for b in fam_list[i + 1 :]:
                    u = a | b
                    if u not in fam:
                        new.add(u)
                    v = a & b
                    if v not in fam:
                        new.add(v)
            if not new:
                break
            fam |= new
            if len(fam) > MAX_OPEN_FAMILY:
                raise SizeCapError(
                    f"generated open family exceeds cap {MAX_OPEN_FAMILY}"
                )
        return topology(X, fam)

    def meet(self, X, family):
        for P in family:
            self._check_mine(P)
            if P.base != X:
                raise InputError("meet over mismatched bases")
        subbasis: list[tuple[str, ...]] = []
        for P in family:
            subbasis.extend(P.payload)
        return self.generate(X, subbasis)

    def pullback(self, f, Q):
        self._check_mine(Q)
        if f.cod != Q.base:
            raise InputError("pullback: function does not land in the base of Q")
        opens = set()
        for o in Q.payload:
            s = set(o)
            opens.add(tuple(sorted(x for x in f.dom if f(x) in s)))
        return topology(f.dom, opens)

    def enumerate_fiber(self, X):
        _check_enum_size(self, X, 4)
        universe = frozenset(X.elements)
        middles = []
        for size in range(1, len(X)):
            middles.extend(
                frozenset(c) for c in combinations(X.elements, size)
            )
        for size in range(len(middles) + 1):
            for combo in combinations(range(len(middles)), size):
                fam = {frozenset(), universe} | {middles[i] for i in combo}
                if _closed_family(fam):
                    yield topology(X, fam)

    def fiber_height(self, X):
        return 2 ** len(X) + 1


def _closed_family(fam: set[frozenset[str]]) -> bool:
    for a in fam:
        for b in fam:
            if a | b not in fam or a & b not in fam:
                return False
    return True


def _check_enum_size(fib: Fibration, X: FinSet, cap: int) -> None:
    if len(X) > cap:
        raise SizeCapError(
            f"{fib.name} fiber enumeration is capped at carriers of size {cap}, "
            f"got {len(X)}"
        )


# ---------------------------------------------------------------------------
# observation objects


def omega_eqrel() -> FiberElement:
    """The two-point set with the equality relation."""
    return eqrel(TWO, [[BOT], [TOP]])


def omega_pre() -> FiberElement:
    """The two-point chain: bot below top and not conversely."""
    return preorder(TWO, [(BOT, BOT), (TOP, TOP), (BOT, TOP)])


def omega_sierpinski() -> FiberElement:
    """The two-point space whose only nontrivial open is {top}."""
    return topology(TWO, [(), (TOP,), (BOT, TOP)])


def grid_values(top_value, epsilon) -> list[Fraction]:
    t, e = Fraction(top_value), Fraction(epsilon)
    if t <= 0 or e <= 0 or (t / e).denominator != 1:
        raise InputError(f"grid step {e} does not evenly divide {t}")
    return [e * k for k in range(int(t / e) + 1)]


def grid_carrier(top_value, epsilon) -> FinSet:
    return FinSet(str(v) for v in grid_values(top_value, epsilon))


def truncated_distance(u: Fraction, v: Fraction, top_value: Fraction) -> Fraction:
    return min(abs(u - v), top_value)


def omega_pmet(top_value, epsilon) -> FiberElement:
    """The value grid {0, eps, ..., top} with truncated absolute distance."""
    t = Fraction(top_value)
    carrier = grid_carrier(t, epsilon)
    return pmet(
        carrier,
        t,
        {
            (x, y): truncated_distance(Fraction(x), Fraction(y), t)
            for (x, y) in _offdiag_pairs(carrier)
        },
    )


def fibration_by_name(
    name: str, top_value=None, epsilon=None
) -> Fibration:
    if name == "erel":
        return ERel()
    if name == "pre":
        return Pre()
    if name == "eqrel":
        return EqRel()
    if name == "top":
        return Top()
    if name == "pmet":
        if top_value is None:
            raise InputError("the pmet fibration needs a distance bound")
        return PMet(top_value, epsilon)
    raise InputError(f"unknown fibration {name!r}")
