#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest
from hypothesis import given, settings as hsettings
from hypothesis import strategies as st

from distinction.localfield import (
    DepthError,
    FieldSpec,
    FieldSpecError,
    NotPrincipalUnit,
    Tower,
    UnsupportedTower,
    norm_index,
    unit_power_level,
    uniformizer_power_witness,
)

DEEP_TOWER = Tower(FieldSpec(p=3, ell=5, depth=2))
DEEP_PRINCIPAL = [
    u for u in DEEP_TOWER.E.units()
    if DEEP_TOWER.E.ring.reduce(u, 1) == DEEP_TOWER.E.ring.reduce(DEEP_TOWER.E.ring.one, 1)
]


@pytest.mark.parametrize("kwargs", [
    dict(p=3, ell=3),
    dict(p=3, ell=2),
    dict(p=4, ell=5),
    dict(p=2, ell=3, base_char="p"),
    dict(p=2, ell=3, ext="ram_nonsq"),
    dict(p=3, ell=5, ext="split"),
])
def test_field_spec_rejects(kwargs):
    with pytest.raises(FieldSpecError):
        FieldSpec(**kwargs).validate()


def test_residue_sizes():
    assert FieldSpec(p=3, ell=5).q_E == 9
    assert FieldSpec(p=5, ell=3, ext="ram").q_E == 5
    assert FieldSpec(p=7, ell=3, f=2).q_F == 49


def test_unit_group_shapes():
    assert Tower(FieldSpec(p=3, ell=5)).F.unit_group().orders == [2]
    assert sorted(Tower(FieldSpec(p=5, ell=3, depth=2)).F.unit_group().orders) == [4, 5]
    assert sorted(DEEP_TOWER.E.unit_group().orders) == [3, 3, 8]
    assert DEEP_TOWER.E.unit_group().group_order == 72


def test_sigma_and_norm_on_F(any_setting):
    tower = any_setting.tower
    F, E = tower.F, tower.E
    for u in F.units():
        x = F.unit(u)
        y = tower.embed(x, "F", "E")
        assert E.equal(tower.sigma(y), y)
        assert F.equal(tower.norm(y, "E", "F"), F.pow(x, 2))


def test_sigma_is_an_involution(any_setting):
    tower = any_setting.tower
    E = tower.E
    for y in E.elements_mod_square_unif():
        assert E.equal(tower.sigma(tower.sigma(y)), y)


def test_sigma_negates_ramified_uniformizer(setting_B):
    tower = setting_B.tower
    E = tower.E
    assert E.equal(tower.sigma(E.uniformizer), (1, E.ring.from_int(-1)))


def test_norm_index_is_two(any_setting):
    assert norm_index(any_setting.tower) == 2


def test_uniformizer_power_witness(any_setting):
    tower = any_setting.tower
    m, s = uniformizer_power_witness(tower, "E", 1)
    assert m == tower.E.e * s
    with pytest.raises(DepthError):
        uniformizer_power_witness(tower, "E", tower.E.level + 1)


def test_unit_power_level_of_one():
    F = DEEP_TOWER.F
    assert unit_power_level(F, F.ring.one, 1) == F.level
    with pytest.raises(NotPrincipalUnit):
        unit_power_level(F, F.ring.one, 0)


@hsettings(max_examples=100, deadline=None)
@given(st.sampled_from(DEEP_PRINCIPAL))
def test_principal_units_climb_under_p_th_power(x):
    E = DEEP_TOWER.E
    assert unit_power_level(E, x, 1) >= min(2, E.level)


def test_biquadratic_closure_only_for_odd_p():
    tower = Tower(FieldSpec(p=2, ell=3))
    with pytest.raises(UnsupportedTower):
        tower.require_biquadratic()
    assert DEEP_TOWER.require_biquadratic() is DEEP_TOWER.K
