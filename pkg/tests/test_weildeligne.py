#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest
from hypothesis import given, settings, strategies as st

from distinction import gl2
from distinction.scalars import CongruenceClass
from distinction.weildeligne import (
    PV,
    CaseRow,
    NotNilpotent,
    P_inject,
    WeilDeligneRep,
    coefficient_combinations,
    equivalent,
    is_nilpotent,
    lift_exists_closed_form,
    lift_search,
    lift_witness,
    validate,
)
from distinction.weilrep import Sum

entries = st.integers(min_value=0, max_value=6)
units = st.integers(min_value=1, max_value=6)


def test_nilpotent_examples(setting_D):
    sc = setting_D.scalars
    assert is_nilpotent(sc.zeros())
    assert is_nilpotent(sc.elementary(0, 1))
    assert not is_nilpotent(sc.matrix([[0, 1], [1, 0]]))
    assert not is_nilpotent(sc.identity())


@settings(max_examples=60, deadline=None)
@given(st.lists(entries, min_size=4, max_size=4), units, st.booleans())
def test_rescaling_N_keeps_the_class(setting_D, values, c, same_line):
    # setting_D has ell = 7, so every integer 1..6 is a unit
    sc = setting_D.scalars
    chars = setting_D.characters("E")
    chi1 = chars[0]
    chi2 = chars[0] if same_line else chars[1]
    phi = Sum(chi1, chi2, setting_D.wq)
    N = sc.matrix([values[:2], values[2:]])
    a = WeilDeligneRep(phi, N)
    b = WeilDeligneRep(phi, sc.scalar(c) * N)
    assert equivalent(a, b)
    assert equivalent(b, a)


def test_zero_and_nonzero_N_are_not_equivalent(setting_D):
    sc = setting_D.scalars
    one = setting_D.trivial("E")
    phi = Sum(one, one, setting_D.wq)
    assert not equivalent(WeilDeligneRep(phi, sc.zeros()), WeilDeligneRep(phi, sc.elementary(0, 1)))
    assert not equivalent(WeilDeligneRep(phi, sc.elementary(0, 1)), WeilDeligneRep(phi, sc.identity()))


def test_steinberg_parameter_banal(setting_D):
    sc = setting_D.scalars
    half = setting_D.nu_half("E")
    psi = PV(setting_D, gl2.Steinberg(setting_D.trivial("E")))
    assert sc.equal(psi.N, sc.elementary(0, 1))
    assert psi.phi.characters() == (half, half.inverse())
    assert validate(psi)

    cls = P_inject(setting_D, psi)
    assert cls.rep is psi
    assert cls.row is CaseRow.STEINBERG
    assert cls.chi.is_trivial()
    exists, _ = lift_exists_closed_form(setting_D, cls)
    assert exists


def test_special_parameter_is_semisimple(setting_A):
    assert setting_A.regime_E is CongruenceClass.MINUS_ONE_MOD
    sc = setting_A.scalars
    psi = PV(setting_A, gl2.Special(setting_A.trivial("E")))
    assert sc.is_zero(psi.N)

    cls = P_inject(setting_A, psi)
    assert cls.row is CaseRow.SPECIAL_MOD
    assert cls.rep is not psi
    assert sc.equal(cls.rep.N, sc.matrix([[0, 1], [1, 0]]))
    assert not cls.is_nilpotent


def test_unramified_special_does_not_lift(setting_A):
    cls = P_inject(setting_A, PV(setting_A, gl2.Special(setting_A.trivial("E"))))
    exists, form = lift_exists_closed_form(setting_A, cls)
    assert not exists
    assert "-1 mod ell" in form
    assert lift_search(setting_A, cls) is None
    assert lift_witness(setting_A, cls) is None


def test_ramified_special_lifts_with_invertible_N(setting_B):
    assert setting_B.regime_F is CongruenceClass.MINUS_ONE_MOD
    cls = P_inject(setting_B, PV(setting_B, gl2.Special(setting_B.trivial("E"))))
    assert cls.row is CaseRow.SPECIAL_MOD
    exists, _ = lift_exists_closed_form(setting_B, cls)
    assert exists
    witness = lift_witness(setting_B, cls)
    assert witness is not None
    assert not is_nilpotent(witness.N)
    assert lift_search(setting_B, cls) is not None


def test_special_row_witnesses_are_never_nilpotent(setting_B):
    for chi in setting_B.quadratic("E"):
        cls = P_inject(setting_B, PV(setting_B, gl2.Special(chi)))
        witness = lift_witness(setting_B, cls)
        if witness is not None:
            assert not is_nilpotent(witness.N)


def test_P_inject_rejects_non_nilpotent(setting_D):
    sc = setting_D.scalars
    one = setting_D.trivial("E")
    psi = WeilDeligneRep(Sum(one, one, setting_D.wq), sc.matrix([[0, 1], [1, 0]]))
    with pytest.raises(NotNilpotent):
        P_inject(setting_D, psi)


@pytest.mark.parametrize("name", ["B", "D"])
def test_closed_form_matches_search(settings, name):
    setting = settings[name]
    reps = []
    for chi in setting.characters("E")[:8]:
        pi = gl2.PrincipalSeries(chi, chi.inverse())
        if gl2.is_irreducible(setting, pi):
            reps.append(pi)
    kind = gl2.Special if setting.regime_E is CongruenceClass.MINUS_ONE_MOD else gl2.Steinberg
    reps.extend(kind(chi) for chi in setting.quadratic("E"))
    for pi in reps:
        cls = P_inject(setting, PV(setting, pi))
        exists, form = lift_exists_closed_form(setting, cls)
        found = lift_search(setting, cls)
        assert exists == (found is not None), f"{pi.label()}: {form}"


def test_coefficient_combinations_cover_every_line(setting_D):
    sc = setting_D.scalars
    basis = [sc.elementary(0, 1), sc.elementary(1, 0)]
    combos = list(coefficient_combinations(sc, basis))
    assert sc.is_zero(combos[0])
    # 1 + (7^2 - 1) / (7 - 1)
    assert len(combos) == 9
    keys = {sc.key(N) for N in combos}
    assert len(keys) == 9
    assert sc.key(sc.elementary(0, 1) + sc.scalar(3) * sc.elementary(1, 0)) in keys
    assert sc.key(sc.scalar(2) * sc.elementary(0, 1)) not in keys
