from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from codense.errors import InputError, SizeCapError
from codense.fibration import is_cartesian
from codense.instances import (
    BOT,
    TOP,
    TWO,
    EqRel,
    ERel,
    PMet,
    Pre,
    Top,
    as_erel,
    eqrel,
    erel,
    grid_values,
    omega_eqrel,
    omega_pmet,
    omega_pre,
    omega_sierpinski,
    pmet,
    pmet_dist,
    preorder,
    topology,
)
from codense.sets import FinFun, FinSet

AB = FinSet(["a", "b"])
ABC = FinSet(["a", "b", "c"])


# --- well-formedness -------------------------------------------------------


def test_preorder_validation():
    pre = Pre()
    pre.validate(preorder(AB, [("a", "a"), ("b", "b"), ("a", "b")]))
    with pytest.raises(InputError):
        pre.validate(preorder(AB, [("a", "b")]))  # not reflexive
    with pytest.raises(InputError):
        pre.validate(
            preorder(ABC, [(x, x) for x in ABC] + [("a", "b"), ("b", "c")])
        )  # not transitive


def test_partition_validation():
    eq = EqRel()
    eq.validate(eqrel(ABC, [["a", "b"], ["c"]]))
    with pytest.raises(InputError):
        eq.validate(eqrel(ABC, [["a", "b"]]))  # does not cover
    with pytest.raises(InputError):
        eq.validate(eqrel(ABC, [["a", "b"], ["b", "c"]]))  # overlapping


def test_pseudometric_validation():
    pm = PMet(1)
    pm.validate(pmet(ABC, 1, {("a", "b"): "1/2", ("a", "c"): "1/2", ("b", "c"): 1}))
    with pytest.raises(InputError):
        pm.validate(pmet(ABC, 1, {("a", "b"): 0, ("a", "c"): 0, ("b", "c"): 1}))
    with pytest.raises(InputError):
        pm.validate(pmet(AB, 1, {("a", "b"): 2}))  # above the bound


def test_topology_validation():
    top = Top()
    top.validate(topology(AB, [(), ("a",), ("a", "b")]))
    with pytest.raises(InputError):
        top.validate(topology(AB, [(), ("a",), ("b",)]))  # missing union? no: missing base
    with pytest.raises(InputError):
        top.validate(
            topology(ABC, [(), ("a",), ("b",), ("a", "b", "c")])
        )  # not closed under union


# --- fiber orders, tops, meets, pullbacks ----------------------------------


def test_erel_leq_is_inclusion():
    er = ERel()
    r1 = erel(AB, [("a", "a")])
    r2 = erel(AB, [("a", "a"), ("a", "b")])
    assert er.leq(r1, r2)
    res = er.leq(r2, r1)
    assert not res and res.witness == ("a", "b")


def test_pmet_order_is_reversed():
    pm = PMet(1)
    d1 = pmet(AB, 1, {("a", "b"): 2 - 1})  # distance 1
    d2 = pmet(AB, 1, {("a", "b"): "1/2"})
    assert pm.leq(d1, d2)
    assert not pm.leq(d2, d1)


def test_pmet_meet_is_pointwise_sup():
    pm = PMet(1)
    d1 = pmet(AB, 1, {("a", "b"): "1/2"})
    d2 = pmet(AB, 1, {("a", "b"): 1})
    assert pmet_dist(pm.meet(AB, [d1, d2]), "a", "b") == 1


def test_erel_meet_neutral_top():
    er = ERel()
    r = erel(AB, [("a", "b")])
    assert er.meet(AB, [r, er.top(AB)]) == r


def test_top_fiber_order_finer_below_coarser():
    top = Top()
    discrete = topology(AB, [(), ("a",), ("b",), ("a", "b")])
    indiscrete = top.top(AB)
    # continuity of the identity, checked directly over the open families
    assert set(indiscrete.payload) <= set(discrete.payload)
    assert top.leq(discrete, indiscrete)
    assert not top.leq(indiscrete, discrete)
    assert top.meet(AB, [discrete, indiscrete]) == discrete


def test_erel_pullback_constant_map():
    er = ERel()
    Y = FinSet(["y"])
    f = FinFun(AB, Y, {"a": "y", "b": "y"})
    pulled = er.pullback(f, erel(Y, [("y", "y")]))
    assert set(pulled.payload) == {("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")}


def test_pmet_pullback_is_composition_with_f():
    pm = PMet(1)
    d = pmet(ABC, 1, {("a", "b"): "1/4", ("a", "c"): "3/4", ("b", "c"): "1/2"})
    f = FinFun(AB, ABC, {"a": "b", "b": "c"})
    pulled = pm.pullback(f, d)
    assert pmet_dist(pulled, "a", "b") == pmet_dist(d, "b", "c")


def test_sierpinski_pullback_example():
    top = Top()
    f = FinFun(AB, TWO, {"a": TOP, "b": BOT})
    assert top.pullback(f, omega_sierpinski()).payload == ((), ("a",), ("a", "b"))


def test_cartesian_relation_reflection_example():
    er = ERel()
    X = FinSet(["a", "b"])
    Y = FinSet(["x", "y", "z"])
    P = erel(X, [])
    Q = erel(Y, [("x", "z"), ("z", "y")])
    f = FinFun(X, Y, {"a": "x", "b": "y"})
    assert is_cartesian(er, f, P, Q)
    pm = PMet(1)
    dX = pmet(AB, 1, {("a", "b"): 1})
    dY = pmet(ABC, 1, {("a", "b"): 1, ("a", "c"): 1, ("b", "c"): 1})
    iso = FinFun(AB, ABC, {"a": "a", "b": "b"})
    assert is_cartesian(pm, iso, dX, dY)
    strictly_below = pmet(AB, 1, {("a", "b"): 1})
    dY2 = pmet(ABC, 1, {("a", "b"): "1/2", ("a", "c"): 1, ("b", "c"): 1})
    assert not is_cartesian(pm, iso, strictly_below, dY2)


# --- enumeration -----------------------------------------------------------


def test_fiber_counts():
    assert sum(1 for _ in ERel().enumerate_fiber(AB)) == 16
    assert sum(1 for _ in ERel().enumerate_fiber(FinSet(["a", "b", "c", "d"]))) == 65536
    assert sum(1 for _ in EqRel().enumerate_fiber(ABC)) == 5
    assert sum(1 for _ in EqRel().enumerate_fiber(FinSet(["a", "b", "c", "d"]))) == 15
    assert sum(1 for _ in Pre().enumerate_fiber(ABC)) == 29
    assert sum(1 for _ in Top().enumerate_fiber(AB)) == 4
    assert sum(1 for _ in Top().enumerate_fiber(ABC)) == 29


def test_fiber_enumeration_unique_and_deterministic():
    for fib in (ERel(), Pre(), EqRel(), PMet(1, "1/2"), Top()):
        first = list(fib.enumerate_fiber(AB))
        assert first == list(fib.enumerate_fiber(AB))
        assert len(set(first)) == len(first)
        for elem in first:
            fib.validate(elem)


def test_enumeration_size_cap_names_limit():
    big = FinSet([f"s{i}" for i in range(9)])
    with pytest.raises(SizeCapError, match="capped"):
        next(ERel().enumerate_fiber(big))


def test_empty_carrier_fibers():
    empty = FinSet([])
    for fib in (ERel(), Pre(), EqRel(), PMet(1, "1/2"), Top()):
        fiber = list(fib.enumerate_fiber(empty))
        assert len(fiber) == 1
        assert fiber[0] == fib.top(empty)


# --- observation objects ----------------------------------------------------


def test_omega_eqrel_is_identity_partition():
    om = omega_eqrel()
    assert om.payload == ((BOT,), (TOP,))
    assert EqRel().leq(om, EqRel().top(TWO))
    assert om in list(EqRel().enumerate_fiber(TWO))


def test_omega_pre_is_the_two_chain():
    om = omega_pre()
    assert (BOT, TOP) in om.payload
    assert (TOP, BOT) not in om.payload
    Pre().validate(om)
    # it is a complete lattice: the fiber scan finds meets for every subset
    assert om in list(Pre().enumerate_fiber(TWO))


def test_omega_pmet_grid():
    om = omega_pmet(1, "1/2")
    assert om.base.elements == tuple(sorted(str(v) for v in grid_values(1, "1/2")))
    assert pmet_dist(om, "0", "1") == 1
    assert pmet_dist(om, "0", "1/2") == Fraction(1, 2)
    PMet(1, "1/2").validate(om)
    with pytest.raises(InputError):
        omega_pmet(1, "1/3")


def test_omega_sierpinski():
    om = omega_sierpinski()
    assert (TOP,) in om.payload
    assert (BOT,) not in om.payload
    Top().validate(om)
    assert om in list(Top().enumerate_fiber(TWO))


def test_as_erel_keeps_pairs():
    assert set(as_erel(omega_pre()).payload) == set(omega_pre().payload)
    assert as_erel(omega_eqrel()).payload == ((BOT, BOT), (TOP, TOP))


# --- randomized pseudometric properties -------------------------------------


@given(st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_pmet_meet_keeps_triangle(vals):
    # triangle-repair by truncation is not assumed: inputs are filtered
    pm = PMet(1, "1/4")
    d = {
        ("a", "b"): Fraction(vals[0], 4),
        ("a", "c"): Fraction(vals[1], 4),
        ("b", "c"): Fraction(vals[2], 4),
    }
    cand = pmet(ABC, 1, d)
    if not pm.is_well_formed(cand):
        return
    for other in pm.enumerate_fiber(ABC):
        pm.validate(pm.meet(ABC, [cand, other]))
