#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Verdict tables over the enumerated representations, and their json, tsv
and text renderings. Rows are built in enumeration order, so the output is
stable for a fixed configuration.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from distinction import gl2, sl2
from distinction.characters import restrict_to_F
from distinction.config import OUTPUT_FORMATS, ConfigError, Setting
from distinction.prasad import SCHEMA_VERSION, SweepReport, dihedral_representations
from distinction.scalars import CongruenceClass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Table:
    title: str
    columns: Tuple[str, ...]
    rows: Tuple[Tuple[str, ...], ...]

    def to_json(self) -> Dict:
        return {
            "title": self.title,
            "columns": list(self.columns),
            "rows": [dict(zip(self.columns, row)) for row in self.rows],
        }


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _mult(value: Optional[int]) -> str:
    return "unknown" if value is None else str(value)


def _restriction_class(setting: Setting, chi) -> str:
    """1, omega or nu^1/2 when chi|F is one of them, else its label"""
    chi_F = restrict_to_F(setting.tower, chi)
    if chi_F.is_trivial():
        return "1"
    if chi_F == setting.omega:
        return "omega"
    if chi_F == gl2.nu_half_on_F(setting):
        return "nu^1/2"
    return chi_F.label()


def _regime(setting: Setting) -> str:
    return f"E:{setting.regime_E} F:{setting.regime_F}"


# --- builders ---

def cusp_distinction_table(setting: Setting) -> Table:
    """
    St/Sp and dihedral supercuspidal verdicts for GL2(F)- and
    omega-distinction, over every E-character whose restriction to F is
    quadratic.
    """
    tower = setting.tower
    special = setting.regime_E is CongruenceClass.MINUS_ONE_MOD
    rows: List[Tuple[str, ...]] = []
    for chi in setting.characters("E"):
        if not (restrict_to_F(tower, chi) ** 2).is_trivial():
            continue
        pi = gl2.Special(chi) if special else gl2.Steinberg(chi)
        dist = gl2.gl2F_distinction(setting, pi)
        omega_dist = gl2.omega_distinction(setting, pi)
        rows.append((pi.kind, pi.label(), _restriction_class(setting, chi), _regime(setting),
                     _yes(dist.distinguished), _yes(omega_dist.distinguished),
                     str(gl2.dichotomy_check(setting, pi)), dist.rationale))
    for pi in dihedral_representations(setting):
        dist = gl2.gl2F_distinction(setting, pi)
        omega_dist = gl2.omega_distinction(setting, pi)
        rows.append((pi.kind, pi.label(), "-", _regime(setting), _yes(dist.distinguished),
                     _yes(omega_dist.distinguished), str(gl2.dichotomy_check(setting, pi)), dist.rationale))
    logger.info(f"St/Sp/Cusp 表: {len(rows)} 行")
    return Table(
        "GL2(F)-distinction of St, Sp and dihedral supercuspidals",
        ("kind", "rep", "chi|F", "regime", "distinguished", "omega_distinguished", "dichotomy", "rationale"),
        tuple(rows),
    )


def gl2_principal_table(setting: Setting) -> Table:
    """pi(chi1, chi2) over unordered pairs of E-characters trivial on F."""
    tower = setting.tower
    base = [chi for chi in setting.characters("E") if restrict_to_F(tower, chi).is_trivial()]
    rows: List[Tuple[str, ...]] = []
    for i, chi1 in enumerate(base):
        for chi2 in base[i:]:
            pi = gl2.PrincipalSeries(chi1, chi2)
            report = gl2.gl2F_distinction(setting, pi)
            rows.append((pi.label(), _yes(gl2.is_irreducible(setting, pi)),
                         _yes(report.distinguished), _mult(report.multiplicity), report.rationale))
    logger.info(f"GL2 主序列表: {len(rows)} 行")
    return Table(
        "GL2(F)-distinction of principal series",
        ("rep", "irreducible", "distinguished", "multiplicity", "rationale"),
        tuple(rows),
    )


def principal_series_table(setting: Setting) -> Table:
    """SL2(F)-multiplicities of the principal series I(chi) of SL2(E)."""
    rows: List[Tuple[str, ...]] = []
    nu_E = setting.nu("E")
    for chi in setting.characters("E"):
        if not sl2.principal_exists(setting, chi):
            continue
        constituents = ["generic"]
        if chi == nu_E or chi == nu_E.inverse():
            constituents.append("trivial")
        for constituent in constituents:
            I = sl2.SL2PrincipalSeries(chi, constituent)
            report = sl2.sl2_principal_distinguished(setting, I)
            rows.append((I.label(), _yes(sl2.principal_is_irreducible(setting, I)),
                         _yes(report.distinguished), _mult(report.multiplicity), report.rationale))
    logger.info(f"SL2 主序列表: {len(rows)} 行")
    return Table(
        "SL2(F)-distinction of principal series of SL2(E)",
        ("rep", "irreducible", "distinguished", "multiplicity", "rationale"),
        tuple(rows),
    )


def supercuspidal_sl2_table(setting: Setting) -> Table:
    """Restriction lengths, |X| and the SL2(F)-multiplicity of dihedral supercuspidals."""
    rows: List[Tuple[str, ...]] = []
    for pi in dihedral_representations(setting, trivial_central=False):
        profile = sl2.restriction_profile(setting, pi)
        X = sl2.X_set(setting, pi)
        if X:
            sl2.norm_bijection(setting, pi, profile)
            mult = str(sl2.sl2_supercuspidal_multiplicity(setting, pi, assume_component_distinguished=True))
        else:
            mult = "0"
        rows.append((pi.label(), str(profile.lg), str(profile.lg_plus), str(profile.S_phi_order),
                     str(len(X)), mult))
    logger.info(f"SL2 超尖表: {len(rows)} 行")
    return Table(
        "SL2(F)-distinction of dihedral supercuspidals",
        ("rep", "lg", "lg_plus", "S_phi", "X", "multiplicity"),
        tuple(rows),
    )


def verdict_table(report: SweepReport) -> Table:
    rows = tuple(
        (v.rep.kind, v.rep.label(), _yes(v.lhs), _yes(v.rhs), _yes(v.rhs_oracle), str(v.row), v.form)
        for v in report.verdicts
    )
    return Table("omega-distinction against lifts of P(PV(pi))",
                 ("kind", "rep", "lhs", "rhs", "oracle", "row", "form"), rows)


def all_tables(setting: Setting) -> List[Table]:
    tables = [cusp_distinction_table(setting), gl2_principal_table(setting), principal_series_table(setting)]
    if setting.wk is not None:
        tables.append(supercuspidal_sl2_table(setting))
    return tables


# --- rendering ---

def _render_text(table: Table) -> str:
    widths = [len(c) for c in table.columns]
    for row in table.rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [f"== {table.title} ==", fmt.format(*table.columns).rstrip(),
             "  ".join("-" * w for w in widths)]
    lines.extend(fmt.format(*row).rstrip() for row in table.rows)
    return "\n".join(lines) + "\n"


def _render_tsv(table: Table) -> str:
    buf = io.StringIO()
    buf.write(f"# {table.title}\n")
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(table.columns)
    writer.writerows(table.rows)
    return buf.getvalue()


def render(tables: Union[Table, Sequence[Table]], fmt: str) -> str:
    """
    Render one or more tables. Every format carries the same cells; json
    adds the schema version.
    """
    if fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"未知的输出格式: {fmt}")
    if isinstance(tables, Table):
        tables = [tables]
    if fmt == "json":
        payload = {"schema": SCHEMA_VERSION, "tables": [t.to_json() for t in tables]}
        return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    renderer = _render_text if fmt == "text" else _render_tsv
    return "\n".join(renderer(t) for t in tables)
