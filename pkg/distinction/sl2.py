#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Distinction by SL2(F): restriction invariants of dihedral supercuspidals
and the principal-series multiplicity table.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from distinction import gl2
from distinction.characters import (
    SmoothCharacter,
    compose_norm,
    is_galois_invariant,
    norm_preimages,
    restrict_to_F,
)
from distinction.config import Setting
from distinction.gl2 import DihedralSupercuspidal, DistinctionReport
from distinction.scalars import ComputationError, CongruenceClass, InvariantViolation
from distinction.weilrep import dihedral_centralizer_order, is_isomorphic, twist

logger = logging.getLogger(__name__)

# (lg_plus, lg) -> dim Hom_SL2(F)(tau, 1) for a distinguished component tau
MULTIPLICITY_TABLE: Dict[Tuple[int, int], int] = {(1, 1): 1, (2, 4): 1, (2, 2): 2, (4, 4): 4}


# --- 自定义异常 ---
class NotDistinguished(ComputationError):
    """表示不被 SL2(F) 区分"""
    pass


class WrongRegime(ComputationError):
    """当前同余情形下该问题没有定义"""
    pass


class MultiplicityTableError(ComputationError):
    """公式 lg_+^2/lg 与定理中的表不一致"""
    pass


@dataclass(frozen=True)
class RestrictionProfile:
    Y: Tuple[SmoothCharacter, ...]
    Y_plus: Tuple[SmoothCharacter, ...]
    lg: int
    lg_plus: int
    S_phi_order: int

    def to_json(self) -> Dict:
        return {
            "Y": [chi.label() for chi in self.Y],
            "Y_plus": [chi.label() for chi in self.Y_plus],
            "lg": self.lg,
            "lg_plus": self.lg_plus,
            "S_phi_order": self.S_phi_order,
        }


def restriction_profile(setting: Setting, pi: DihedralSupercuspidal) -> RestrictionProfile:
    """Y = {lam quadratic : phi (x) lam ~ phi}, Y_plus its members trivial on F."""
    gl2.validate_rep(setting, pi)
    phi = gl2.parameter(setting, pi)
    tower = setting.tower
    Y = tuple(lam for lam in setting.quadratic("E") if is_isomorphic(twist(phi, lam), phi))
    Y_plus = tuple(lam for lam in Y if restrict_to_F(tower, lam).is_trivial())
    s_phi = dihedral_centralizer_order(phi)
    if s_phi != len(Y):
        raise InvariantViolation(f"{pi.label()}: |S_phi| = {s_phi} but |Y| = {len(Y)}")
    if len(Y) not in (2, 4):
        raise InvariantViolation(f"{pi.label()}: dihedral restriction length {len(Y)} not in {{2, 4}}")
    if setting.spec.p != 2 and len(Y_plus) > 2:
        raise InvariantViolation(f"{pi.label()}: lg_plus = {len(Y_plus)} > 2 with p odd")
    return RestrictionProfile(Y, Y_plus, len(Y), len(Y_plus), s_phi)


def X_set(setting: Setting, pi: gl2.GL2Rep) -> List[SmoothCharacter]:
    """The characters chi_F of F^x with pi (GL2(F), chi_F)-distinguished."""
    central_F = restrict_to_F(setting.tower, gl2.central_character(setting, pi))
    candidates = [c for c in setting.characters("F") if c ** 2 == central_F]
    return [c for c in candidates if gl2.chi_distinction(setting, pi, c).distinguished]


def norm_bijection(setting: Setting, pi: DihedralSupercuspidal,
                   profile: Optional[RestrictionProfile] = None) -> List[Tuple[SmoothCharacter, SmoothCharacter]]:
    """The pairs (chi_F, chi_F o N) carrying X(pi) onto Y_plus(pi)."""
    profile = profile or restriction_profile(setting, pi)
    pairs = [(c, compose_norm(setting.tower, c, "E")) for c in X_set(setting, pi)]
    images = [img for _, img in pairs]
    if len(set(images)) != len(images) or set(images) != set(profile.Y_plus):
        raise InvariantViolation(f"{pi.label()}: composition with the norm is not a bijection X -> Y_plus")
    return pairs


def sl2_supercuspidal_multiplicity(setting: Setting, pi: DihedralSupercuspidal,
                                   assume_component_distinguished: bool = False) -> int:
    """lg_plus^2 / lg, checked against the case table."""
    if not assume_component_distinguished and not X_set(setting, pi):
        raise NotDistinguished(f"{pi.label()} is not distinguished by SL2(F)")
    profile = restriction_profile(setting, pi)
    key = (profile.lg_plus, profile.lg)
    value, rest = divmod(profile.lg_plus ** 2, profile.lg)
    if rest or MULTIPLICITY_TABLE.get(key) != value:
        raise MultiplicityTableError(f"{pi.label()}: (lg_plus, lg) = {key} gives {profile.lg_plus}^2/{profile.lg}")
    if key in ((1, 1), (4, 4)) and setting.spec.p != 2:
        raise MultiplicityTableError(f"{pi.label()}: profile {key} arises only for p = 2")
    return value


# --- principal series I(chi) of SL2(E) ---

@dataclass(frozen=True)
class SL2PrincipalSeries:
    """
    I(chi) for a character chi of E^x. When I(chi) is reducible,
    ``constituent`` picks the generic or the trivial constituent.
    """

    chi: SmoothCharacter
    constituent: str = "generic"

    def label(self) -> str:
        suffix = "" if self.constituent == "generic" else f"[{self.constituent}]"
        return f"I({self.chi.label()}){suffix}"

    def to_json(self) -> Dict:
        return {"type": "I", "chi": self.chi.to_json(), "constituent": self.constituent}


def principal_is_irreducible(setting: Setting, I: SL2PrincipalSeries) -> bool:
    chi = I.chi
    nu_E = setting.nu("E")
    if chi == nu_E or chi == nu_E.inverse():
        return False
    return chi.is_trivial() or not chi.is_quadratic()


def principal_exists(setting: Setting, chi: SmoothCharacter) -> bool:
    """Some invariant form exists on I(chi) iff chi|F = 1 or chi|E1 = 1."""
    return restrict_to_F(setting.tower, chi).is_trivial() or is_galois_invariant(setting.tower, chi)


def _norm_square_class(setting: Setting, chi: SmoothCharacter) -> Optional[str]:
    """For chi = chi_F o N return "1" or "omega" according to chi_F^2; None if chi is not a norm."""
    found = norm_preimages(setting.tower, chi, setting.characters("F"))
    if not found:
        return None
    square = found[0] ** 2
    if square.is_trivial():
        return "1"
    if square == setting.omega:
        return "omega"
    return None


def sl2_principal_distinguished(setting: Setting, I: SL2PrincipalSeries) -> DistinctionReport:
    if I.constituent not in ("generic", "trivial"):
        raise ValueError(f"unknown constituent {I.constituent!r}")
    if I.chi.domain != "E":
        raise gl2.InvalidRepresentation("I(chi) needs a character of E^x")
    chi = I.chi
    exists = principal_exists(setting, chi)
    if principal_is_irreducible(setting, I):
        if I.constituent == "trivial":
            raise WrongRegime(f"{I.label()} is irreducible")
        if not exists:
            return DistinctionReport(False, 0, "prin: chi|F != 1 and chi|E1 != 1")
        if not chi.is_trivial() and restrict_to_F(setting.tower, chi).is_trivial():
            return DistinctionReport(True, 1, "prin 1(a): chi|F = 1, chi != 1")
        return DistinctionReport(True, 2, "prin 1(b): chi^sigma = chi")

    nu_E = setting.nu("E")
    is_nu = chi == nu_E or chi == nu_E.inverse()
    if I.constituent == "trivial":
        if not is_nu:
            raise WrongRegime(f"{I.label()} has no trivial constituent")
        return DistinctionReport(True, 1, "prin 2: trivial constituent")
    if not exists:
        return DistinctionReport(False, 0, "prin: chi|F != 1 and chi|E1 != 1")

    regime_E, regime_F = setting.regime_E, setting.regime_F
    steinberg = is_nu and regime_E is not CongruenceClass.MINUS_ONE_MOD
    square = None if is_nu else _norm_square_class(setting, chi)
    if regime_F is CongruenceClass.ONE_MOD:
        if steinberg:
            return DistinctionReport(True, 2, "prin remark: St with ell | q_F - 1")
        if square == "omega":
            return DistinctionReport(True, 1, "prin remark: chi_F^2 = omega")
        return DistinctionReport(True, None, "prin remark: undetermined for ell | q_F - 1")
    if regime_E is CongruenceClass.BANAL:
        if is_nu:
            return DistinctionReport(True, 1, "prin 2(a): chi = nu^(+-1), banal")
        if square == "1":
            return DistinctionReport(True, 3, "prin 2(b): chi_F^2 = 1")
        if square == "omega":
            return DistinctionReport(True, 1, "prin 2(b): chi_F^2 = omega")
    elif regime_E is CongruenceClass.MINUS_ONE_MOD:
        if is_nu:
            if setting.spec.ramified:
                return DistinctionReport(True, 2, "prin 2(c): cuspidal constituent, E/F ramified")
            return DistinctionReport(False, 0, "prin 2(c): cuspidal constituents, E/F unramified")
    else:
        if steinberg:
            return DistinctionReport(True, 2, "prin 2(d): St with ell | q_F + 1")
        if square == "1":
            return DistinctionReport(True, 3, "prin 2(d): chi_F^2 = 1")
        if square == "omega":
            return DistinctionReport(True, 1, "prin 2(d): chi_F^2 = omega")
    logger.debug(f"{I.label()} 不在多重数表中")
    return DistinctionReport(True, None, f"prin: outside the case table ({regime_E}, {regime_F})")
