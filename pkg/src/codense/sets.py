"""Finite sets and total functions between them.

Carriers are immutable tuples of distinct string atoms kept in sorted order,
so two sets are equal exactly when they have the same atoms.  Everything else
in the package (fibers, functors, coalgebras) is built on these two types.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping

from .errors import InputError


@dataclass(frozen=True)
class FinSet:
    """A finite set of string atoms with a canonical (sorted) element order."""

    elements: tuple[str, ...]

    def __init__(self, elements: Iterable[str]):
        elems = tuple(sorted(elements))
        if len(set(elems)) != len(elems):
            raise InputError(f"duplicate atoms in carrier: {elems}")
        for e in elems:
            if not isinstance(e, str):
                raise InputError(f"atoms must be strings, got {e!r}")
        object.__setattr__(self, "elements", elems)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.elements

    def index(self, x: str) -> int:
        return self.elements.index(x)

    def __repr__(self) -> str:
        return "{" + ",".join(self.elements) + "}"


@dataclass(frozen=True)
class FinFun:
    """A total function between finite sets, stored as its graph.

    The graph is aligned with ``dom.elements``, which makes equality and
    hashing structural.
    """

    dom: FinSet
    cod: FinSet
    graph: tuple[tuple[str, str], ...]

    def __init__(self, dom: FinSet, cod: FinSet, mapping: Mapping[str, str]):
        if set(mapping) != set(dom.elements):
            raise InputError(
                f"graph is not total on {dom}: keys {sorted(mapping)}"
            )
        for x, y in mapping.items():
            if y not in cod:
                raise InputError(f"image {y!r} of {x!r} is not in codomain {cod}")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(
            self, "graph", tuple((x, mapping[x]) for x in dom.elements)
        )

    def __call__(self, x: str) -> str:
        i = self.dom.index(x)
        return self.graph[i][1]

    def as_dict(self) -> dict[str, str]:
        return dict(self.graph)

    def image(self) -> frozenset[str]:
        return frozenset(y for _, y in self.graph)

    def is_injective(self) -> bool:
        return len(self.image()) == len(self.dom)

    def __repr__(self) -> str:
        body = ",".join(f"{x}->{y}" for x, y in self.graph)
        return f"[{body}]"


def identity(X: FinSet) -> FinFun:
    return FinFun(X, X, {x: x for x in X})


def compose(g: FinFun, f: FinFun) -> FinFun:
    """g after f.  Requires cod(f) = dom(g)."""
    if f.cod != g.dom:
        raise InputError(f"cannot compose: cod {f.cod} != dom {g.dom}")
    return FinFun(f.dom, g.cod, {x: g(y) for x, y in f.graph})


def enumerate_functions(X: FinSet, Y: FinSet) -> Iterator[FinFun]:
    """All |Y|^|X| total functions X -> Y, in a fixed deterministic order.

    The order is the product order over ``Y.elements`` per domain atom.
    The empty domain yields exactly one (empty) function, even when Y is
    empty too; a nonempty domain with empty codomain yields none.
    """
    xs = X.elements
    for values in product(Y.elements, repeat=len(xs)):
        yield FinFun(X, Y, dict(zip(xs, values)))


def count_functions(X: FinSet, Y: FinSet) -> int:
    return len(Y) ** len(X) if len(X) > 0 else 1
