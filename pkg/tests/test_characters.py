#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest

from distinction.characters import (
    BoundTooLarge,
    CharacterFormatError,
    compose_norm,
    enumerate_characters,
    extend_to,
    from_json,
    galois_twist,
    is_galois_invariant,
    is_trivial_on_E1,
    norm_preimages,
    restrict_to_F,
)
from distinction.localfield import FieldSpec, Tower


def test_enumeration_counts():
    tower = Tower(FieldSpec(p=3, ell=5))
    assert len(enumerate_characters(tower.F, 5, 2)) == 4
    only = enumerate_characters(tower.F, 5, 1, 0)
    assert len(only) == 1 and only[0].is_trivial()


def test_enumeration_is_bounded():
    tower = Tower(FieldSpec(p=3, ell=5))
    with pytest.raises(BoundTooLarge):
        enumerate_characters(tower.E, 5, 3 ** 12)


def test_quadratic_characters(any_setting):
    quadratic = any_setting.quadratic("E")
    assert len(quadratic) == 4
    assert quadratic[0].is_trivial()
    assert all(chi.is_quadratic() for chi in quadratic)


def test_conjugate_selfdual_iff_restriction_in_norm_residue_group(any_setting):
    tower = any_setting.tower
    omega = any_setting.omega
    for chi in any_setting.characters("E"):
        selfdual = (chi * galois_twist(tower, chi)).is_trivial()
        chi_F = restrict_to_F(tower, chi)
        assert selfdual == (chi_F.is_trivial() or chi_F == omega)


def test_galois_invariant_iff_trivial_on_norm_one(any_setting):
    tower = any_setting.tower
    for chi in any_setting.characters("E"):
        assert is_galois_invariant(tower, chi) == is_trivial_on_E1(tower, chi)


def test_restriction_of_norm_composite_is_square(any_setting):
    tower = any_setting.tower
    for eta in any_setting.characters("F")[:16]:
        assert restrict_to_F(tower, compose_norm(tower, eta, "E")) == eta ** 2


def test_omega(any_setting):
    tower = any_setting.tower
    omega = any_setting.omega
    assert not omega.is_trivial() and omega.is_quadratic()
    assert compose_norm(tower, omega, "E").is_trivial()


def test_nu_half_squares_to_nu(any_setting):
    for name in ("F", "E"):
        for convention in ("even", "odd"):
            assert any_setting.nu_half(name, convention) ** 2 == any_setting.nu(name)


def test_extensions_and_preimages(setting_A):
    tower = setting_A.tower
    omega = setting_A.omega
    extensions = extend_to(tower, omega, setting_A.characters("E"))
    assert extensions
    assert all(restrict_to_F(tower, chi) == omega for chi in extensions)
    nu_E = setting_A.nu("E")
    preimages = norm_preimages(tower, nu_E, setting_A.characters("F"))
    assert preimages
    assert all(compose_norm(tower, eta, "E") == nu_E for eta in preimages)


def test_from_json_validates(setting_A):
    tower = setting_A.tower
    chi = setting_A.characters("E")[5]
    assert from_json(tower, chi.to_json()) == chi
    with pytest.raises(CharacterFormatError):
        from_json(tower, {"domain": "E", "unif_value": "1/4", "unit_values": []})
    with pytest.raises(CharacterFormatError):
        from_json(tower, {"domain": "E"})
