#!/usr/bin/env python
# -*- coding: utf-8 -*-

import json

import pytest

from distinction import gl2, sl2
from distinction.cli import (
    EXIT_BAD_SPEC,
    EXIT_FAILURE,
    EXIT_IO,
    EXIT_OK,
    RepSpecError,
    main,
    parse_character,
    parse_rep_spec,
)

FIELD_D = "3,1,unram,7"
FIELD_C = "7,1,unram,3"


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_steinberg_banal(capsys):
    code = main(["distinguish", "--field", FIELD_D, "--format", "json", "--rep", "St(chi=triv)"])
    assert code == EXIT_OK
    payload = _json_out(capsys)
    assert payload["GL2(F)"]["distinguished"] is False
    assert payload["GL2(F), omega"]["distinguished"] is True


def test_steinberg_banal_text(capsys):
    assert main(["distinguish", "--field", FIELD_D, "--rep", "St(chi=triv)"]) == EXIT_OK
    out = capsys.readouterr().out
    gl2_line = next(line for line in out.splitlines() if line.startswith("GL2(F) "))
    assert gl2_line.split()[1] == "no"


def test_principal_series_multiplicity_two(capsys):
    code = main(["distinguish", "--field", FIELD_C, "--format", "json",
                 "--rep", "PS(chi1=triv, chi2=triv)"])
    assert code == EXIT_OK
    assert _json_out(capsys)["GL2(F)"]["multiplicity"] == 2


@pytest.mark.parametrize("spec", ["St(chi=", "Foo(chi=triv)", "St(chi=bogus)", "St(chi=char(-1))",
                                  "PS(chi1=triv)", "St(chi=triv) extra"])
def test_malformed_spec(capsys, spec):
    code = main(["distinguish", "--field", FIELD_D, "--rep", spec])
    assert code == EXIT_BAD_SPEC
    assert "^" in capsys.readouterr().err


def test_missing_output_directory(tmp_path):
    out = tmp_path / "missing" / "tables.txt"
    assert main(["tables", "--field", FIELD_D, "--out", str(out)]) == EXIT_IO


def test_missing_config(tmp_path):
    code = main(["distinguish", "--config", str(tmp_path / "nope.json"), "--rep", "St(chi=triv)"])
    assert code == EXIT_IO


def test_bad_field_flag():
    assert main(["distinguish", "--field", "4,1,unram,7", "--rep", "St(chi=triv)"]) == EXIT_IO


def test_counterexample_written_to_file(tmp_path):
    out = tmp_path / "counterexample.json"
    code = main(["counterexample", "--field", "3,1,unram,5", "--format", "json", "--out", str(out)])
    assert code == EXIT_OK
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["counterexample"] is True


def test_counterexample_in_wrong_regime():
    assert main(["counterexample", "--field", FIELD_D]) == EXIT_FAILURE


@pytest.mark.slow
def test_sweep_fault_flag(capsys):
    assert main(["sweep", "--field", FIELD_D, "-w", "2"]) == EXIT_OK
    assert main(["sweep", "--field", FIELD_D, "-w", "2", "--fault", "3"]) == EXIT_FAILURE


def test_parse_rep_spec(setting_D):
    pi = parse_rep_spec("PS(chi1=quad(1), chi2=quad(1)*triv)", setting_D)
    assert isinstance(pi, gl2.PrincipalSeries)
    assert pi.chi1 == pi.chi2 == setting_D.quadratic("E")[1]

    I = parse_rep_spec("I(chi=nu, constituent=trivial)", setting_D)
    assert isinstance(I, sl2.SL2PrincipalSeries)
    assert I.chi == setting_D.nu("E")
    assert I.constituent == "trivial"


def test_parse_error_column(setting_D):
    with pytest.raises(RepSpecError) as info:
        parse_rep_spec("St(chi=quad(99))", setting_D)
    assert info.value.column == len("St(chi=") + 1


def test_parse_character_domains(setting_D):
    assert parse_character("omega", setting_D) == setting_D.omega
    assert parse_character("nu_half*nu_half", setting_D, "E") == setting_D.nu("E")
    assert parse_character("unram(0/1)", setting_D).is_trivial()
    with pytest.raises(RepSpecError):
        parse_character("unram(1/7)", setting_D)
