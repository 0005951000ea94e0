#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest

from distinction.characters import galois_twist, restrict_to_F
from distinction.weilrep import (
    ConjugateSign,
    Induced,
    ReducibleInput,
    Sum,
    conjugate_dual_sign,
    dihedral_centralizer_order,
    has_trivial_determinant,
    intertwiner_dimension,
    is_isomorphic,
    projective_centralizer_order,
    restrict_to_E,
)


def _non_invariant(setting, name="E"):
    tower = setting.tower
    return [chi for chi in setting.characters(name) if galois_twist(tower, chi) != chi]


def test_trivial_sum_is_identity(any_setting):
    group = any_setting.wq
    one = any_setting.trivial("E")
    rep = Sum(one, one, group)
    sc = group.scalars
    for w in group.generators("E"):
        assert sc.equal(rep.evaluate(w), sc.identity())
    assert conjugate_dual_sign(rep) is ConjugateSign.BOTH


def test_induced_at_sigma_lift(setting_A):
    group = setting_A.wq
    sc = group.scalars
    mu = _non_invariant(setting_A)[0]
    rep = Induced(mu, "F", group)
    s = group.sigma_lift()
    m = rep.evaluate(s)
    t = group.artin("E", group.mul(s, s))
    assert int(m[0, 0]) == 0 and int(m[1, 1]) == 0
    assert int(m[1, 0]) == 1
    assert m[0, 1] == sc.embed_root(mu(t))


def test_induced_rejects_invariant_character(setting_A):
    with pytest.raises(ReducibleInput):
        Induced(setting_A.trivial("E"), "F", setting_A.wq)


def test_sign_rule_for_conjugate_selfdual_characters(any_setting):
    tower = any_setting.tower
    group = any_setting.wq
    s = group.sigma_lift()
    t = group.artin("E", group.mul(s, s))
    omega = any_setting.omega
    checked = 0
    for mu in any_setting.characters("E"):
        conj = galois_twist(tower, mu)
        if not (mu * conj).is_trivial() or mu.is_quadratic():
            continue
        mu_F = restrict_to_F(tower, mu)
        sign = conjugate_dual_sign(Sum(mu, conj, group))
        expected = ConjugateSign.SYMPLECTIC if mu_F == omega else ConjugateSign.ORTHOGONAL
        assert sign is expected, mu.label()
        assert mu(t).is_one() == (mu_F != omega)
        checked += 1
    assert checked > 0


def test_isomorphism_and_intertwiners(setting_A):
    group = setting_A.wq
    chars = setting_A.characters("E")
    a, b = chars[1], chars[2]
    assert is_isomorphic(Sum(a, b, group), Sum(b, a, group))
    assert not is_isomorphic(Sum(a, b, group), Sum(a, a, group))
    assert intertwiner_dimension(Sum(a, b, group)) == 2
    assert intertwiner_dimension(Sum(a, a, group)) == 4
    mu = _non_invariant(setting_A)[0]
    assert intertwiner_dimension(Induced(mu, "F", group)) == 1


def test_restriction_of_induced_splits(setting_A):
    tower = setting_A.tower
    group = setting_A.wq
    mu = _non_invariant(setting_A)[0]
    restricted = restrict_to_E(Induced(mu, "F", group))
    assert is_isomorphic(restricted, Sum(mu, galois_twist(tower, mu), group))


def test_sum_of_inverse_pair_has_trivial_determinant(any_setting):
    group = any_setting.wq
    for eta in any_setting.characters("F")[:8]:
        assert has_trivial_determinant(Sum(eta, eta.inverse(), group))


def test_dihedral_centralizer_matches_twist_count(any_setting):
    tower = any_setting.tower
    group = any_setting.group_for("K")
    quadratic = any_setting.quadratic("E")
    seen = 0
    for theta in any_setting.characters("K"):
        if galois_twist(tower, theta) == theta:
            continue
        phi = Induced(theta, "E", group)
        order = dihedral_centralizer_order(phi)
        assert order in (2, 4)
        assert projective_centralizer_order(phi, quadratic) == order
        seen += 1
        if seen == 12:
            break
    assert seen > 0
