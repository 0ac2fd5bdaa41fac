from itertools import product

import pytest
from hypothesis import given, strategies as st

from codense.errors import InputError
from codense.sets import (
    FinFun,
    FinSet,
    compose,
    count_functions,
    enumerate_functions,
    identity,
)


def test_carrier_is_sorted_and_distinct():
    X = FinSet(["b", "a"])
    assert X.elements == ("a", "b")
    with pytest.raises(InputError):
        FinSet(["a", "a"])


def test_function_totality_and_codomain_checked():
    X, Y = FinSet(["a"]), FinSet(["u", "v"])
    with pytest.raises(InputError):
        FinFun(X, Y, {})
    with pytest.raises(InputError):
        FinFun(X, Y, {"a": "w"})


def test_singleton_composition():
    A, B, C = FinSet(["a"]), FinSet(["b"]), FinSet(["c"])
    f = FinFun(A, B, {"a": "b"})
    g = FinFun(B, C, {"b": "c"})
    assert compose(g, f)("a") == "c"


def test_compose_rejects_mismatch():
    A, B = FinSet(["a"]), FinSet(["b"])
    f = FinFun(A, B, {"a": "b"})
    with pytest.raises(InputError):
        compose(f, f)


def test_identity_laws():
    X, Y = FinSet(["a", "b"]), FinSet(["u", "v", "w"])
    for f in enumerate_functions(X, Y):
        assert compose(f, identity(X)) == f
        assert compose(identity(Y), f) == f


def test_enumeration_counts():
    a1, a2, a3 = FinSet(["a"]), FinSet(["a", "b"]), FinSet(["u", "v", "w"])
    empty = FinSet([])
    assert len(list(enumerate_functions(a1, a2))) == 2
    assert len(list(enumerate_functions(a2, a3))) == 9
    assert len(list(enumerate_functions(empty, a1))) == 1
    assert len(list(enumerate_functions(empty, empty))) == 1
    assert len(list(enumerate_functions(a2, empty))) == 0
    for X, Y in product((empty, a1, a2, a3), repeat=2):
        assert len(list(enumerate_functions(X, Y))) == count_functions(X, Y)


def test_enumeration_is_deterministic_and_duplicate_free():
    X, Y = FinSet(["a", "b"]), FinSet(["u", "v", "w"])
    first = list(enumerate_functions(X, Y))
    second = list(enumerate_functions(X, Y))
    assert first == second
    assert len(set(first)) == len(first)


def _all_sizes(limit):
    atoms = [("a", "b", "c"), ("x", "y", "z"), ("p", "q", "r"), ("s", "t", "u")]
    for sizes in product(range(limit + 1), repeat=4):
        yield tuple(FinSet(alpha[:n]) for alpha, n in zip(atoms, sizes))


def test_compose_associative_exhaustively_small():
    # all triples over carriers of size <= 2, plus the full size-3 cube
    cases = [c for c in _all_sizes(2)]
    cases.append(
        tuple(
            FinSet(alpha[:3])
            for alpha in (("a", "b", "c"), ("x", "y", "z"), ("p", "q", "r"), ("s", "t", "u"))
        )
    )
    for A, B, C, D in cases:
        for f in enumerate_functions(A, B):
            for g in enumerate_functions(B, C):
                gf = compose(g, f)
                for h in enumerate_functions(C, D):
                    assert compose(h, gf) == compose(compose(h, g), f)


@given(
    st.integers(1, 4),
    st.integers(1, 4),
    st.integers(1, 4),
    st.data(),
)
def test_composition_is_pointwise(nx, ny, nz, data):
    X = FinSet([f"x{i}" for i in range(nx)])
    Y = FinSet([f"y{i}" for i in range(ny)])
    Z = FinSet([f"z{i}" for i in range(nz)])
    f_map = {x: data.draw(st.sampled_from(Y.elements)) for x in X}
    g_map = {y: data.draw(st.sampled_from(Z.elements)) for y in Y}
    f, g = FinFun(X, Y, f_map), FinFun(Y, Z, g_map)
    gf = compose(g, f)
    for x in X:
        assert gf(x) == g(f(x))
