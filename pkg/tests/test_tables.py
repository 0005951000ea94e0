#!/usr/bin/env python
# -*- coding: utf-8 -*-

import csv
import io
import json

import pytest

from distinction.config import ConfigError
from distinction.tables import (
    Table,
    gl2_principal_table,
    principal_series_table,
    render,
)

SAMPLE = Table("sample", ("rep", "distinguished"), (("St(E[0;])", "no"), ("PS(a, b)", "yes")))


def _tsv_rows(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    reader = csv.reader(io.StringIO("\n".join(lines)), delimiter="\t")
    header, *rows = list(reader)
    return header, [tuple(r) for r in rows]


def test_formats_carry_the_same_cells():
    header, rows = _tsv_rows(render(SAMPLE, "tsv"))
    assert tuple(header) == SAMPLE.columns
    assert rows == list(SAMPLE.rows)

    payload = json.loads(render(SAMPLE, "json"))
    assert payload["schema"] == 1
    [table] = payload["tables"]
    assert [tuple(r[c] for c in table["columns"]) for r in table["rows"]] == list(SAMPLE.rows)

    text = render(SAMPLE, "text")
    assert text.startswith("== sample ==")
    for row in SAMPLE.rows:
        assert any(line.split() == " ".join(row).split() for line in text.splitlines())


def test_unknown_format():
    with pytest.raises(ConfigError):
        render(SAMPLE, "xml")


def test_principal_tables_render(setting_C):
    tables = [gl2_principal_table(setting_C), principal_series_table(setting_C)]
    assert all(t.rows for t in tables)
    payload = json.loads(render(tables, "json"))
    assert len(payload["tables"]) == 2
    gl2_rows = payload["tables"][0]["rows"]
    assert "2" in {r["multiplicity"] for r in gl2_rows}
    assert "unknown" in {r["multiplicity"] for r in payload["tables"][1]["rows"]}
