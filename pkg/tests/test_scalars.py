#!/usr/bin/env python
# -*- coding: utf-8 -*-

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distinction.scalars import (
    CongruenceClass,
    EllDividesQ,
    FiniteField,
    OrderNotEmbeddable,
    RootOfUnity,
    TooLarge,
    ell_part,
    ell_prime_part,
    minimal_degree,
    q_mod_ell_class,
)

roots = st.builds(RootOfUnity, st.integers(-50, 50), st.sampled_from([1, 2, 3, 4, 6, 8, 12, 24]))


def test_root_multiplication_examples():
    assert RootOfUnity(1, 2) * RootOfUnity(1, 2) == RootOfUnity(0, 1)
    assert RootOfUnity(1, 3) * RootOfUnity(1, 3) == RootOfUnity(2, 3)
    assert RootOfUnity(1, 2) * RootOfUnity(1, 4) == RootOfUnity(3, 4)


def test_root_normal_form():
    assert RootOfUnity(2, 4) == RootOfUnity(1, 2)
    assert RootOfUnity(-1, 4) == RootOfUnity(3, 4)
    assert RootOfUnity(4, 4).is_one()
    assert RootOfUnity.parse("3/6") == RootOfUnity(1, 2)
    with pytest.raises(ValueError):
        RootOfUnity(1, 0)


@given(roots, roots, roots)
def test_root_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert (a * a.inverse()).is_one()
    assert a ** 3 == a * a * a


@given(roots)
def test_root_order_divides_denominator(a):
    assert (a ** a.order).is_one()


@settings(deadline=None)
@given(st.integers(0, 23), st.integers(0, 23))
def test_embedding_is_multiplicative(i, j):
    sc = FiniteField(5, 2)
    a, b = RootOfUnity(i, 24), RootOfUnity(j, 24)
    assert sc.embed_root(a * b) == sc.embed_root(a) * sc.embed_root(b)


def test_embed_root_examples():
    assert FiniteField(5, 1).embed_root(RootOfUnity(1, 2)) == 4
    sc = FiniteField(3, 2)
    z = RootOfUnity(1, 8)
    assert sc.dlog(sc.embed_root(z)) == z
    assert sc.embed_root(RootOfUnity.one()) == sc.one
    assert sc.dlog(sc.one).is_one()
    assert sc.dlog(sc.generator) == RootOfUnity(1, sc.unit_order)


def test_embed_root_rejects_large_orders():
    with pytest.raises(OrderNotEmbeddable):
        FiniteField(5, 1).embed_root(RootOfUnity(1, 3))
    with pytest.raises(TooLarge):
        FiniteField(3, 13)


def test_ell_parts_and_degree():
    assert ell_prime_part(24, 2) == 3
    assert ell_part(24, 2) == 8
    assert ell_prime_part(45, 3) == 5
    assert minimal_degree(5, 24) == 2
    assert minimal_degree(3, 80) == 4
    assert minimal_degree(7, 48) == 2
    assert minimal_degree(5, 2) == 1


def test_congruence_classes():
    assert q_mod_ell_class(9, 5) is CongruenceClass.MINUS_ONE_MOD
    assert q_mod_ell_class(49, 3) is CongruenceClass.ONE_MOD
    assert q_mod_ell_class(9, 7) is CongruenceClass.BANAL
    with pytest.raises(EllDividesQ):
        q_mod_ell_class(9, 3)


def test_commutant_of_regular_diagonal():
    sc = FiniteField(5, 1)
    D = sc.diagonal(sc.scalar(1), sc.scalar(2))
    solutions = sc.solve_matrix_conditions([lambda X: D @ X - X @ D])
    assert len(solutions) == 2
    assert all(sc.is_zero(X @ D - D @ X) for X in solutions)


def test_has_invertible():
    sc = FiniteField(5, 1)
    assert not sc.has_invertible([sc.elementary(0, 1)])
    assert sc.has_invertible([sc.elementary(0, 1), sc.elementary(1, 0)])
    assert sc.has_invertible([sc.identity()])


def test_has_invertible_on_three_dimensional_spans():
    sc = FiniteField(3, 1)
    rank_one = [sc.elementary(0, 0), sc.elementary(0, 1), sc.elementary(1, 0)]
    assert all(int(sc.det(m)) == 0 for m in rank_one)
    assert sc.has_invertible(rank_one)
    # first row only: every combination is singular
    assert not sc.has_invertible([sc.elementary(0, 0), sc.elementary(0, 1)])


entries = st.lists(st.integers(0, 2), min_size=4, max_size=4)


@settings(deadline=None)
@given(st.lists(entries, min_size=1, max_size=3))
def test_has_invertible_matches_exhaustive_combinations(rows):
    sc = FiniteField(3, 1)
    span = [sc.matrix([r[:2], r[2:]]) for r in rows]
    exhaustive = False
    for coeffs in itertools.product(range(3), repeat=len(span)):
        N = sc.zeros()
        for c, m in zip(coeffs, span):
            N = N + sc.scalar(c) * m
        if int(sc.det(N)) != 0:
            exhaustive = True
            break
    assert sc.has_invertible(span) == exhaustive
