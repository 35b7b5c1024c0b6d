from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cohcheck.classifier import (
    QAdj,
    QAdjInv,
    QCompose,
    QFree,
    QId,
    QMor,
    QTensor,
    delta_eval,
    delta_obj,
    qmor_equal,
    theta_flat_component,
    zeta,
    zeta_flat,
    zeta_flat_obj,
    zeta_obj,
)
from cohcheck.errors import BoundaryError, FlavorError
from cohcheck.free_cat import concat_blocks, flatten_mu, fmor_compose, fmor_equal, fmor_id

from strategies import fmor2s, fmors, objects, partitions


@st.composite
def qmors(draw, flavor=None) -> QMor:
    """A random composable chain of classifier generators."""
    if flavor is None:
        flavor = draw(st.sampled_from(("M", "S", "B")))
    m = draw(st.integers(0, 3))
    blocks = tuple(draw(objects(max_len=3)) for _ in range(m))
    term: QMor = QId(flavor, blocks)
    for _ in range(draw(st.integers(0, 4))):
        t = term.target
        kind = draw(st.sampled_from(("free", "adj", "adjinv", "id")))
        if kind == "free":
            nxt: QMor = QFree(draw(fmor2s(flavor=flavor, source=t)))
        elif kind == "adjinv" and len(t) == 1:
            nxt = QAdjInv(flavor, draw(partitions(t[0])))
        elif kind == "adj":
            nxt = QAdj(flavor, t)
        else:
            nxt = QId(flavor, t)
        term = QCompose(nxt, term)
    return term


# -- units and boundaries -----------------------------------------------------


def test_unit_objects():
    assert zeta_obj(("a", "b")) == (("a", "b"),)
    assert zeta_flat_obj(("a", "b")) == (("a",), ("b",))
    assert zeta_flat_obj(()) == ()
    assert delta_obj((("a",), (), ("b", "a"))) == ("a", "b", "a")


def test_adjoined_boundary():
    q = QAdj("S", (("a",), ("b",)))
    assert q.source == (("a",), ("b",))
    assert q.target == (("a", "b"),)
    qi = QAdjInv("S", (("a",), ("b",)))
    assert qi.source == (("a", "b"),)
    assert qi.target == (("a",), ("b",))


def test_compose_validates_boundary():
    with pytest.raises(BoundaryError):
        QCompose(QId("S", (("a",),)), QId("S", (("b",),)))
    with pytest.raises(FlavorError):
        QCompose(QId("S", (("a",),)), QId("B", (("a",),)))


def test_equal_needs_parallel():
    with pytest.raises(BoundaryError):
        qmor_equal(QId("S", (("a",),)), QId("S", (("b",),)))
    with pytest.raises(FlavorError):
        qmor_equal(QId("S", ()), QId("B", ()))


# -- evaluation ---------------------------------------------------------------


def test_adjoined_evaluates_to_identity():
    q = QAdj("B", (("a", "a"), ("b",)))
    assert delta_eval(q) == fmor_id("B", ("a", "a", "b"))
    assert delta_eval(QAdjInv("B", (("a", "a"), ("b",)))) == fmor_id("B", ("a", "a", "b"))


@given(fmors())
def test_triangle_one_block(u):
    assert delta_eval(zeta(u)) == u


@given(fmors())
def test_triangle_singletons(u):
    assert delta_eval(zeta_flat(u)) == u


# -- defining relations -------------------------------------------------------


@given(st.data())
def test_adjoined_natural(data):
    # gluing commutes with free morphisms of the block algebra
    u2 = data.draw(fmor2s())
    fl = u2.flavor
    left = QCompose(QAdj(fl, u2.target), QFree(u2))
    right = QCompose(zeta(flatten_mu(u2)), QAdj(fl, u2.source))
    assert qmor_equal(left, right)


@given(st.data())
def test_adjoined_associative(data):
    # gluing twice equals gluing the combined grouping once
    fl = data.draw(st.sampled_from(("M", "S", "B")))
    w1 = data.draw(objects(max_len=4))
    w2 = data.draw(objects(max_len=4))
    b1 = data.draw(partitions(w1))
    b2 = data.draw(partitions(w2))
    left = QCompose(QAdj(fl, (w1, w2)), QTensor(QAdj(fl, b1), QAdj(fl, b2)))
    right = QAdj(fl, b1 + b2)
    assert qmor_equal(left, right)


def test_adjoined_normalized():
    # at a one-block tuple the adjoined isomorphism is an identity
    for fl in ("M", "S", "B"):
        w = ("a", "b", "a")
        assert qmor_equal(QAdj(fl, (w,)), QId(fl, (w,)))


@given(st.data())
def test_adjoined_invertible(data):
    fl = data.draw(st.sampled_from(("M", "S", "B")))
    blocks = data.draw(partitions(data.draw(objects())))
    q = QAdj(fl, blocks)
    qi = QAdjInv(fl, blocks)
    assert qmor_equal(QCompose(q, qi), QId(fl, (concat_blocks(blocks),)))
    assert qmor_equal(QCompose(qi, q), QId(fl, blocks))


# -- the singleton-regrouping map ---------------------------------------------


def test_regroup_at_singletons():
    th = theta_flat_component((("a",), ("b",)), "B")
    assert fmor_equal(delta_eval(th), fmor_id("B", ("a", "b")))


def test_regroup_at_merged_block():
    th = theta_flat_component((("a", "b"),), "S")
    assert delta_eval(th) == fmor_id("S", ("a", "b"))


def test_regroup_empty():
    th = theta_flat_component((), "M")
    assert delta_eval(th) == fmor_id("M", ())


@given(st.data())
def test_regroup_natural(data):
    u = data.draw(qmors())
    fl = u.flavor
    left = QCompose(u, theta_flat_component(u.source, fl))
    right = QCompose(theta_flat_component(u.target, fl), zeta_flat(delta_eval(u)))
    assert qmor_equal(left, right)


@given(st.data())
def test_evaluation_functorial(data):
    v = data.draw(qmors())
    u = QAdj(v.flavor, v.target)
    assert delta_eval(QCompose(u, v)) == fmor_compose(delta_eval(u), delta_eval(v))
