#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest

from distinction import gl2
from distinction.characters import galois_twist
from distinction.prasad import (
    SCHEMA_VERSION,
    classical_counterexample,
    dihedral_representations,
    enumerate_representations,
    prasad_check,
    sweep,
)
from distinction.sl2 import WrongRegime
from distinction.weildeligne import CaseRow, is_nilpotent


def test_enumeration_is_large_enough(any_setting):
    reps = enumerate_representations(any_setting)
    assert len(reps) >= 50
    kinds = {pi.kind for pi in reps}
    assert "PS" in kinds
    assert kinds & {"St", "Sp"}
    labels = [pi.label() for pi in reps]
    assert len(labels) == len(set(labels))


# (theta, theta^rho) pairs with trivial central character at the K level
DIHEDRAL_COUNTS = {"A": 8, "B": 4, "C": 48, "D": 8}


@pytest.mark.parametrize("name", sorted(DIHEDRAL_COUNTS))
def test_every_config_has_dihedral_supercuspidals(settings, name):
    setting = settings[name]
    cusps = dihedral_representations(setting)
    assert len(cusps) == DIHEDRAL_COUNTS[name]
    for pi in cusps:
        assert pi.kind == "Cusp"
        assert gl2.central_character(setting, pi).is_trivial()
        assert galois_twist(setting.tower, pi.theta) != pi.theta


def test_enumerated_reps_have_trivial_central_character(setting_D):
    for pi in enumerate_representations(setting_D):
        assert gl2.central_character(setting_D, pi).is_trivial()


def test_special_one_agrees(setting_A):
    verdict = prasad_check(setting_A, gl2.Special(setting_A.trivial("E")))
    assert verdict.row is CaseRow.SPECIAL_MOD
    assert not verdict.lhs
    assert verdict.consistent
    assert verdict.witness is None


def test_steinberg_one_agrees_when_banal(setting_D):
    verdict = prasad_check(setting_D, gl2.Steinberg(setting_D.trivial("E")))
    assert verdict.lhs and verdict.rhs and verdict.rhs_oracle
    assert verdict.witness is not None
    assert verdict.to_json()["agree"]


def test_classical_counterexample(setting_A):
    witness = classical_counterexample(setting_A)
    assert witness.is_counterexample
    assert is_nilpotent(witness.naive_lift.N)
    assert witness.modified.consistent
    assert not witness.modified.rhs
    payload = witness.to_json()
    assert payload["schema"] == SCHEMA_VERSION
    assert payload["counterexample"] is True


@pytest.mark.parametrize("name", ["B", "D"])
def test_counterexample_needs_unramified_minus_one(settings, name):
    with pytest.raises(WrongRegime):
        classical_counterexample(settings[name])


@pytest.mark.slow
@pytest.mark.parametrize("name", ["A", "B", "C", "D"])
def test_full_sweep(settings, name):
    report = sweep(settings[name], workers=2)
    assert report.verdicts
    assert not report.failures
    assert not report.disagreements
    assert report.ok


@pytest.mark.slow
def test_fault_injection_is_detected(setting_D):
    report = sweep(setting_D, workers=2, fault=0)
    assert not report.ok
    assert len(report.disagreements) == 1
    assert report.to_json()["fault"] == 0
