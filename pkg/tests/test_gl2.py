#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest

from distinction import gl2
from distinction.characters import extend_to, restrict_to_F
from distinction.prasad import dihedral_representations
from distinction.scalars import InvariantViolation


def _with_restriction(setting, target, pool=None):
    pool = setting.quadratic("E") if pool is None else pool
    return [chi for chi in pool if restrict_to_F(setting.tower, chi) == target]


def test_report_multiplicity_must_match():
    with pytest.raises(InvariantViolation):
        gl2.DistinctionReport(True, 0, "bad")
    assert gl2.DistinctionReport(True, None, "unknown").multiplicity is None


def test_principal_series_multiplicity_two(setting_C):
    one = setting_C.trivial("E")
    report = gl2.gl2F_distinction(setting_C, gl2.PrincipalSeries(one, one))
    assert report.distinguished
    assert report.multiplicity == 2


def test_principal_series_multiplicity_one_when_banal(setting_D):
    one = setting_D.trivial("E")
    report = gl2.gl2F_distinction(setting_D, gl2.PrincipalSeries(one, one))
    assert report.multiplicity == 1


def test_unramified_special_is_not_distinguished(setting_A):
    sp = gl2.Special(setting_A.trivial("E"))
    assert not gl2.gl2F_distinction(setting_A, sp).distinguished
    assert not gl2.omega_distinction(setting_A, sp).distinguished


def test_steinberg_with_omega_restriction(setting_D):
    chis = _with_restriction(setting_D, setting_D.omega)
    assert chis
    report = gl2.gl2F_distinction(setting_D, gl2.Steinberg(chis[0]))
    assert report.distinguished
    assert report.multiplicity == 1


def test_ramified_special_with_omega_restriction(setting_B):
    chis = extend_to(setting_B.tower, setting_B.omega, setting_B.characters("E"))
    assert chis
    report = gl2.gl2F_distinction(setting_B, gl2.Special(chis[0]))
    assert report.distinguished


def test_steinberg_trivial_is_omega_distinguished_when_banal(setting_D):
    st_1 = gl2.Steinberg(setting_D.trivial("E"))
    assert not gl2.gl2F_distinction(setting_D, st_1).distinguished
    assert gl2.omega_distinction(setting_D, st_1).distinguished
    assert gl2.dichotomy_check(setting_D, st_1) is gl2.Dichotomy.OMEGA_DIST


def test_regime_rejects_wrong_variant(setting_A, setting_D):
    with pytest.raises(gl2.InvalidRepresentation):
        gl2.validate_rep(setting_A, gl2.Steinberg(setting_A.trivial("E")))
    with pytest.raises(gl2.InvalidRepresentation):
        gl2.validate_rep(setting_D, gl2.Special(setting_D.trivial("E")))


def test_central_characters(setting_D):
    chars = setting_D.characters("E")
    a, b = chars[1], chars[2]
    assert gl2.central_character(setting_D, gl2.PrincipalSeries(a, b)) == a * b
    assert gl2.central_character(setting_D, gl2.Steinberg(a)) == a ** 2


def test_reducible_principal_series(setting_D):
    nu_E = setting_D.nu("E")
    one = setting_D.trivial("E")
    assert not gl2.is_irreducible(setting_D, gl2.PrincipalSeries(nu_E, one))
    assert not gl2.is_irreducible(setting_D, gl2.PrincipalSeries(one, nu_E))
    assert gl2.is_irreducible(setting_D, gl2.PrincipalSeries(one, one))


def test_nu_half_restriction_is_convention_free(any_setting):
    half_F = gl2.nu_half_on_F(any_setting)
    assert half_F ** 2 == restrict_to_F(any_setting.tower, any_setting.nu("E"))


def test_chi_distinction_with_trivial_character(setting_D):
    st_1 = gl2.Steinberg(setting_D.trivial("E"))
    direct = gl2.gl2F_distinction(setting_D, st_1)
    assert gl2.chi_distinction(setting_D, st_1, setting_D.trivial("F")) == direct


@pytest.mark.parametrize("name", ["A", "D"])
def test_selfdual_supercuspidals_satisfy_the_dichotomy(settings, name):
    setting = settings[name]
    cusps = dihedral_representations(setting)[:10]
    assert cusps
    for pi in cusps:
        verdict = gl2.dichotomy_check(setting, pi)
        if gl2.is_sigma_selfdual(setting, pi):
            assert verdict in (gl2.Dichotomy.DIST, gl2.Dichotomy.OMEGA_DIST)
        else:
            assert verdict is gl2.Dichotomy.NOT_SELFDUAL


def test_unitary_distinction_of_dihedral(setting_D):
    pi = dihedral_representations(setting_D)[0]
    assert isinstance(gl2.unitary_distinguished(setting_D, pi), bool)
