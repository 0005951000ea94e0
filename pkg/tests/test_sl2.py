#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest

from distinction.characters import restrict_to_F
from distinction.prasad import dihedral_representations
from distinction.sl2 import (
    MULTIPLICITY_TABLE,
    NotDistinguished,
    SL2PrincipalSeries,
    WrongRegime,
    X_set,
    norm_bijection,
    principal_exists,
    principal_is_irreducible,
    restriction_profile,
    sl2_principal_distinguished,
    sl2_supercuspidal_multiplicity,
)


def test_table_matches_formula():
    for (lg_plus, lg), value in MULTIPLICITY_TABLE.items():
        assert lg_plus ** 2 == value * lg


@pytest.fixture(scope="module")
def cusps_D(setting_D):
    return dihedral_representations(setting_D, trivial_central=False)[:12]


def test_restriction_profile(setting_D, cusps_D):
    assert cusps_D
    for pi in cusps_D:
        profile = restriction_profile(setting_D, pi)
        assert profile.S_phi_order == profile.lg
        assert profile.lg in (2, 4)
        assert 1 <= profile.lg_plus <= 2
        assert any(lam.is_trivial() for lam in profile.Y_plus)


def test_supercuspidal_multiplicity(setting_D, cusps_D):
    seen_distinguished = False
    for pi in cusps_D:
        profile = restriction_profile(setting_D, pi)
        if not X_set(setting_D, pi):
            with pytest.raises(NotDistinguished):
                sl2_supercuspidal_multiplicity(setting_D, pi)
            continue
        seen_distinguished = True
        m = sl2_supercuspidal_multiplicity(setting_D, pi)
        assert m == MULTIPLICITY_TABLE[(profile.lg_plus, profile.lg)]
        pairs = norm_bijection(setting_D, pi, profile)
        assert len(pairs) == profile.lg_plus
    if not seen_distinguished:
        pytest.skip("no SL2(F)-distinguished dihedral among the sampled ones")


def test_trivial_character_gives_two(setting_D):
    report = sl2_principal_distinguished(setting_D, SL2PrincipalSeries(setting_D.trivial("E")))
    assert report.multiplicity == 2


def test_trivial_on_F_gives_one(setting_D):
    tower = setting_D.tower
    chis = [chi for chi in setting_D.characters("E")
            if restrict_to_F(tower, chi).is_trivial() and not chi.is_quadratic()]
    assert chis
    I = SL2PrincipalSeries(chis[0])
    assert principal_is_irreducible(setting_D, I)
    assert sl2_principal_distinguished(setting_D, I).multiplicity == 1


def test_reducible_banal_norm_class_gives_three(setting_D):
    mults = []
    for chi in setting_D.quadratic("E"):
        if chi.is_trivial() or not principal_exists(setting_D, chi):
            continue
        I = SL2PrincipalSeries(chi)
        assert not principal_is_irreducible(setting_D, I)
        mults.append(sl2_principal_distinguished(setting_D, I).multiplicity)
    assert 3 in mults


def test_nu_in_banal_regime(setting_D):
    nu_E = setting_D.nu("E")
    generic = sl2_principal_distinguished(setting_D, SL2PrincipalSeries(nu_E))
    assert generic.multiplicity == 1
    trivial = sl2_principal_distinguished(setting_D, SL2PrincipalSeries(nu_E, "trivial"))
    assert trivial.multiplicity == 1


def test_trivial_constituent_needs_reducibility(setting_D):
    with pytest.raises(WrongRegime):
        sl2_principal_distinguished(setting_D, SL2PrincipalSeries(setting_D.trivial("E"), "trivial"))


def test_unknown_when_ell_divides_q_minus_one(setting_C):
    mults = [sl2_principal_distinguished(setting_C, SL2PrincipalSeries(chi)).multiplicity
             for chi in setting_C.quadratic("E")
             if not chi.is_trivial() and principal_exists(setting_C, chi)]
    assert None in mults


def test_not_distinguished_without_invariant_form(setting_D):
    tower = setting_D.tower
    for chi in setting_D.characters("E"):
        if not principal_exists(setting_D, chi):
            report = sl2_principal_distinguished(setting_D, SL2PrincipalSeries(chi))
            assert not report.distinguished
            assert not restrict_to_F(tower, chi).is_trivial()
            break
    else:
        pytest.fail("every character has an invariant form")
