#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Machine check of the modified Prasad correspondence for PGL2.

For a generic representation pi of GL2(E) with trivial central character,
three independent computations are compared:

    lhs         pi is (GL2(F), omega_{E/F})-distinguished      (gl2)
    rhs         the class P(PV(pi)) lifts to W_F, closed form  (weildeligne)
    rhs_oracle  the same, by brute-force search over W_F pairs (weildeligne)
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

from distinction import gl2
from distinction.characters import galois_twist
from distinction.config import Setting
from distinction.scalars import CongruenceClass, InvariantViolation
from distinction.sl2 import WrongRegime
from distinction.sweep_runner import run_sweep
from distinction.weildeligne import (
    PV,
    CaseRow,
    P_inject,
    WDEquivClass,
    WeilDeligneRep,
    is_nilpotent,
    lift_exists_closed_form,
    lift_search,
    lift_witness,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


@dataclass
class PrasadVerdict:
    rep: gl2.GL2Rep
    lhs: bool
    rhs: bool
    rhs_oracle: bool
    row: CaseRow
    form: str
    witness: Optional[WeilDeligneRep] = None

    @property
    def agree(self) -> bool:
        return self.lhs == self.rhs

    @property
    def consistent(self) -> bool:
        """all three computations give the same answer"""
        return self.lhs == self.rhs == self.rhs_oracle

    def to_json(self) -> Dict:
        return {
            "rep": self.rep.label(),
            "kind": self.rep.kind,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "rhs_oracle": self.rhs_oracle,
            "agree": self.agree,
            "row": str(self.row),
            "form": self.form,
            "witness": self.witness.to_json() if self.witness is not None else None,
        }


def prasad_check(setting: Setting, pi: gl2.GL2Rep) -> PrasadVerdict:
    lhs = gl2.omega_distinction(setting, pi).distinguished
    psi = PV(setting, pi)
    cls = P_inject(setting, psi)
    if setting.regime_E is CongruenceClass.BANAL and cls.rep is not psi:
        raise InvariantViolation(f"P is not the identity on {psi.label()} in a banal setting")
    rhs, form = lift_exists_closed_form(setting, cls)
    found = lift_search(setting, cls)
    witness = None
    if rhs:
        witness = found if cls.row is CaseRow.IRREDUCIBLE else lift_witness(setting, cls)
    verdict = PrasadVerdict(pi, lhs, rhs, found is not None, cls.row, form, witness)
    logger.debug(f"{pi.label()}: lhs={lhs} rhs={rhs} oracle={verdict.rhs_oracle} ({cls.row}, {form})")
    return verdict


# --- enumeration ---

def _principal_series(setting: Setting) -> List[gl2.GL2Rep]:
    reps: List[gl2.GL2Rep] = []
    seen = set()
    for chi in setting.characters("E"):
        key = frozenset((chi, chi.inverse()))
        if key in seen:
            continue
        seen.add(key)
        pi = gl2.PrincipalSeries(chi, chi.inverse())
        if gl2.is_irreducible(setting, pi):
            reps.append(pi)
    return reps


def _steinberg_family(setting: Setting) -> List[gl2.GL2Rep]:
    """St_chi, or Sp_chi when ell | q_E + 1, for quadratic chi; Sp_chi = Sp_{chi nu}."""
    quadratic = setting.quadratic("E")
    if setting.regime_E is not CongruenceClass.MINUS_ONE_MOD:
        return [gl2.Steinberg(chi) for chi in quadratic]
    nu_E = setting.nu("E")
    reps: List[gl2.GL2Rep] = []
    seen = set()
    for chi in quadratic:
        key = frozenset((chi, chi * nu_E))
        if key not in seen:
            seen.add(key)
            reps.append(gl2.Special(chi))
    return reps


def dihedral_representations(setting: Setting, trivial_central: bool = True) -> List[gl2.GL2Rep]:
    """Dihedral supercuspidals up to theta ~ theta^rho, by default those of PGL2(E)."""
    if setting.wk is None:
        logger.info("没有 Galois 塔 K/F，跳过本原超尖表示")
        return []
    tower = setting.tower
    reps: List[gl2.GL2Rep] = []
    seen = set()
    for theta in setting.characters("K"):
        conj = galois_twist(tower, theta)
        if conj == theta:
            continue
        key = frozenset((theta, conj))
        if key in seen:
            continue
        seen.add(key)
        pi = gl2.DihedralSupercuspidal(theta)
        if not trivial_central or gl2.central_character(setting, pi).is_trivial():
            reps.append(pi)
    return reps


def enumerate_representations(setting: Setting) -> List[gl2.GL2Rep]:
    """
    Every enumerable generic representation of PGL2(E): irreducible
    pi(chi, chi^-1), the Steinberg or special family, and dihedral
    supercuspidals up to theta ~ theta^rho.
    """
    ps = _principal_series(setting)
    st = _steinberg_family(setting)
    cusp = dihedral_representations(setting)
    logger.info(f"{setting}: 枚举到 {len(ps)} 个主序列, {len(st)} 个 St/Sp, {len(cusp)} 个二面体超尖表示")
    return ps + st + cusp


# --- sweep ---

@dataclass
class SweepReport:
    config: Dict
    verdicts: List[PrasadVerdict]
    failures: Dict[int, Dict[str, str]] = field(default_factory=dict)
    fault: Optional[int] = None

    @property
    def disagreements(self) -> List[PrasadVerdict]:
        return [v for v in self.verdicts if not v.consistent]

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.failures

    def to_json(self) -> Dict:
        return {
            "schema": SCHEMA_VERSION,
            "config": self.config,
            "total": len(self.verdicts) + len(self.failures),
            "disagreements": len(self.disagreements),
            "failures": {str(k): v["reason"] for k, v in self.failures.items()},
            "fault": self.fault,
            "rows": [v.to_json() for v in self.verdicts],
        }


def sweep(setting: Setting, workers: Optional[int] = None, fault: Optional[int] = None) -> SweepReport:
    """
    prasad_check over every enumerated representation. ``fault`` flips the
    lhs of that row after the run, so that the detector can be exercised.
    """
    reps = enumerate_representations(setting)
    store = run_sweep(setting, reps, prasad_check, workers, name="prasad")
    verdicts: List[PrasadVerdict] = store.ordered_results()
    if fault is not None and verdicts:
        idx = fault % len(verdicts)
        verdicts[idx] = replace(verdicts[idx], lhs=not verdicts[idx].lhs)
        logger.warning(f"故障注入: 翻转第 {idx} 行 {verdicts[idx].rep.label()} 的 lhs")
    report = SweepReport(setting.config.to_dict(), verdicts, store.get_failed_tasks(), fault)
    for v in report.disagreements:
        logger.error(f"不一致: {v.rep.label()} lhs={v.lhs} rhs={v.rhs} oracle={v.rhs_oracle}")
    logger.info(f"扫描完成: {len(verdicts)} 行, 不一致 {len(report.disagreements)}, 失败 {len(report.failures)}")
    return report


# --- the classical statement ---

@dataclass
class CounterexampleWitness:
    """
    Sp_1 at ell | q_E + 1 with E/F unramified: its nilpotent parameter has a
    nilpotent lift to W_F, yet Sp_1 is not omega-distinguished.
    """

    rep: gl2.Special
    naive_parameter: WeilDeligneRep
    naive_lift: WeilDeligneRep
    verdict: gl2.DistinctionReport
    modified: PrasadVerdict

    @property
    def is_counterexample(self) -> bool:
        return not self.verdict.distinguished

    def to_json(self) -> Dict:
        return {
            "schema": SCHEMA_VERSION,
            "rep": self.rep.label(),
            "naive_parameter": self.naive_parameter.to_json(),
            "naive_lift": self.naive_lift.to_json(),
            "distinction": self.verdict.to_json(),
            "modified": self.modified.to_json(),
            "counterexample": self.is_counterexample,
        }


def classical_counterexample(setting: Setting) -> CounterexampleWitness:
    if setting.regime_E is not CongruenceClass.MINUS_ONE_MOD or setting.spec.ramified:
        raise WrongRegime("the classical counterexample needs ell | q_E + 1 and E/F unramified")
    sp = gl2.Special(setting.trivial("E"))
    psi = PV(setting, sp)
    naive = WDEquivClass(psi, CaseRow.SEMISIMPLE)
    lift = lift_witness(setting, naive)
    if lift is None or lift_search(setting, naive) is None:
        raise InvariantViolation(f"{psi.label()} has no nilpotent lift to W_F")
    if not is_nilpotent(lift.N):
        raise InvariantViolation(f"lift {lift.label()} of {psi.label()} is not nilpotent")
    witness = CounterexampleWitness(
        sp, psi, lift,
        gl2.omega_distinction(setting, sp),
        prasad_check(setting, sp),
    )
    if not witness.modified.consistent:
        raise InvariantViolation(f"modified check disagrees on {sp.label()}")
    logger.info(f"经典反例: {sp.label()} 的朴素参数有幂零提升 {lift.label()}，但不是 omega-区分的")
    return witness
