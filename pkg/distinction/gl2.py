#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Irreducible and principal-series representations of GL2(E) and their
distinction by GL2(F).

Representations are pure data. Every verdict is read off from characters
and from the two-dimensional parameter of the representation; there is no
model of the underlying vector spaces.
"""

import enum
import logging
import random
from dataclasses import dataclass
from typing import Dict, Optional, Union

from distinction.characters import (
    SmoothCharacter,
    compose_norm,
    extend_to,
    galois_twist,
    restrict,
    restrict_to_F,
)
from distinction.config import Setting
from distinction.localfield import DepthError
from distinction.scalars import ComputationError, CongruenceClass, InvariantViolation
from distinction.weilrep import (
    ConjugateSign,
    Induced,
    PrimitiveMarker,
    PrimitiveParameter,
    Sum,
    WeilRep2,
    conjugate_dual_sign,
    dual,
    is_isomorphic,
    sigma_conjugate,
)

logger = logging.getLogger(__name__)

# chi_distinction checks at most this many extensions of chi_F to E, sampled with the config seed.
EXTENSION_SAMPLE = 4


# --- 自定义异常 ---
class NotGeneric(ComputationError):
    """表示不是不可约的一般表示"""
    pass


class InvalidRepresentation(ComputationError):
    """表示在当前同余情形下不存在或数据不合法"""
    pass


@dataclass(frozen=True)
class PrincipalSeries:
    """The full induced representation pi(chi1, chi2)."""

    chi1: SmoothCharacter
    chi2: SmoothCharacter
    kind = "PS"

    def label(self) -> str:
        return f"PS({self.chi1.label()}, {self.chi2.label()})"

    def to_json(self) -> Dict:
        return {"type": self.kind, "chi1": self.chi1.to_json(), "chi2": self.chi2.to_json()}


@dataclass(frozen=True)
class Steinberg:
    """The generic subquotient of pi(chi nu^1/2, chi nu^-1/2), for q_E != -1 mod ell."""

    chi: SmoothCharacter
    kind = "St"

    def label(self) -> str:
        return f"St({self.chi.label()})"

    def to_json(self) -> Dict:
        return {"type": self.kind, "chi": self.chi.to_json()}


@dataclass(frozen=True)
class Special:
    """The cuspidal subquotient Sp_chi, only for q_E = -1 mod ell."""

    chi: SmoothCharacter
    kind = "Sp"

    def label(self) -> str:
        return f"Sp({self.chi.label()})"

    def to_json(self) -> Dict:
        return {"type": self.kind, "chi": self.chi.to_json()}


@dataclass(frozen=True)
class DihedralSupercuspidal:
    """The supercuspidal with parameter Ind_{W_K}^{W_E}(theta), K the biquadratic closure."""

    theta: SmoothCharacter
    kind = "Cusp"

    def label(self) -> str:
        return f"Cusp({self.theta.label()})"

    def to_json(self) -> Dict:
        return {"type": self.kind, "K": "biquadratic", "theta": self.theta.to_json()}


@dataclass(frozen=True)
class PrimitiveSupercuspidal:
    marker: PrimitiveParameter
    kind = "Primitive"

    def label(self) -> str:
        return f"Primitive({self.marker.name})"

    def to_json(self) -> Dict:
        return {"type": self.kind, "marker": self.marker.name}


GL2Rep = Union[PrincipalSeries, Steinberg, Special, DihedralSupercuspidal, PrimitiveSupercuspidal]


@dataclass(frozen=True)
class DistinctionReport:
    distinguished: bool
    multiplicity: Optional[int]
    rationale: str

    def __post_init__(self):
        m = self.multiplicity
        if m is not None and (m >= 1) != self.distinguished:
            raise InvariantViolation(f"multiplicity {m} contradicts distinguished={self.distinguished}")

    def to_json(self) -> Dict:
        return {"distinguished": self.distinguished, "multiplicity": self.multiplicity,
                "rationale": self.rationale}


class Dichotomy(enum.Enum):
    DIST = "Dist"
    OMEGA_DIST = "OmegaDist"
    BOTH = "Both"
    NEITHER = "Neither"
    NOT_SELFDUAL = "NotSelfdual"

    def __str__(self) -> str:
        return self.value


def is_supercuspidal(pi: GL2Rep) -> bool:
    return isinstance(pi, (DihedralSupercuspidal, PrimitiveSupercuspidal))


def is_irreducible(setting: Setting, pi: GL2Rep) -> bool:
    """pi(chi1, chi2) is irreducible iff chi1/chi2 is not nu^(+-1); the other variants always are."""
    if not isinstance(pi, PrincipalSeries):
        return True
    ratio = pi.chi1 * pi.chi2.inverse()
    nu_E = setting.nu("E")
    return ratio != nu_E and ratio != nu_E.inverse()


def validate_rep(setting: Setting, pi: GL2Rep) -> GL2Rep:
    """Reject data that does not define a representation in the current regime."""
    tower = setting.tower
    if isinstance(pi, PrincipalSeries):
        if pi.chi1.domain != "E" or pi.chi2.domain != "E":
            raise InvalidRepresentation("principal series characters must live on E")
    elif isinstance(pi, Steinberg):
        if pi.chi.domain != "E":
            raise InvalidRepresentation("Steinberg character must live on E")
        if setting.regime_E is CongruenceClass.MINUS_ONE_MOD:
            raise InvalidRepresentation("St_chi is not the generic subquotient when q_E = -1 mod ell; use Sp")
    elif isinstance(pi, Special):
        if pi.chi.domain != "E":
            raise InvalidRepresentation("special character must live on E")
        if setting.regime_E is not CongruenceClass.MINUS_ONE_MOD:
            raise InvalidRepresentation("Sp_chi only exists when ell | q_E + 1")
    elif isinstance(pi, DihedralSupercuspidal):
        tower.require_biquadratic()
        if pi.theta.domain != "K":
            raise InvalidRepresentation("dihedral theta must live on K")
        if galois_twist(tower, pi.theta) == pi.theta:
            raise InvalidRepresentation(f"{pi.theta.label()} is fixed by Gal(K/E)")
    elif isinstance(pi, PrimitiveSupercuspidal):
        raise PrimitiveMarker(f"{pi.label()} has no explicit parameter")
    else:
        raise InvalidRepresentation(f"unknown representation {pi!r}")
    return pi


def central_character(setting: Setting, pi: GL2Rep) -> SmoothCharacter:
    if isinstance(pi, PrincipalSeries):
        return pi.chi1 * pi.chi2
    if isinstance(pi, (Steinberg, Special)):
        return pi.chi ** 2
    if isinstance(pi, DihedralSupercuspidal):
        return restrict(setting.tower, pi.theta, "E") * setting.omega_KE()
    raise PrimitiveMarker(f"{pi.label()} has no explicit central character")


def twist(setting: Setting, pi: GL2Rep, eta: SmoothCharacter) -> GL2Rep:
    """pi (x) (eta o det) for a character eta of E^x."""
    if isinstance(pi, PrincipalSeries):
        return PrincipalSeries(pi.chi1 * eta, pi.chi2 * eta)
    if isinstance(pi, Steinberg):
        return Steinberg(pi.chi * eta)
    if isinstance(pi, Special):
        return Special(pi.chi * eta)
    if isinstance(pi, DihedralSupercuspidal):
        return DihedralSupercuspidal(pi.theta * compose_norm(setting.tower, eta, "K"))
    raise PrimitiveMarker(f"cannot twist {pi.label()}")


def parameter(setting: Setting, pi: GL2Rep) -> WeilRep2:
    """The semisimple two-dimensional parameter of pi."""
    if isinstance(pi, PrincipalSeries):
        return Sum(pi.chi1, pi.chi2, setting.wq)
    if isinstance(pi, (Steinberg, Special)):
        half = setting.nu_half("E")
        return Sum(pi.chi * half, pi.chi * half.inverse(), setting.wq)
    if isinstance(pi, DihedralSupercuspidal):
        return Induced(pi.theta, "E", setting.group_for("K"))
    raise PrimitiveMarker(f"{pi.label()} has no explicit parameter")


def nu_half_on_F(setting: Setting) -> SmoothCharacter:
    """nu_E^(1/2) restricted to F; both square-root conventions must agree."""
    tower = setting.tower
    values = {conv: restrict_to_F(tower, setting.nu_half("E", conv)) for conv in ("even", "odd")}
    if values["even"] != values["odd"]:
        raise InvariantViolation("nu^(1/2)|F depends on the square-root convention")
    return values["even"]


# --- GL2(F)-distinction ---

def _principal_series(setting: Setting, pi: PrincipalSeries) -> DistinctionReport:
    tower = setting.tower
    c1 = (pi.chi1 * galois_twist(tower, pi.chi2)).is_trivial()
    r1, r2 = restrict_to_F(tower, pi.chi1), restrict_to_F(tower, pi.chi2)
    c2 = r1.is_trivial() and r2.is_trivial()
    if not (c1 or c2):
        return DistinctionReport(False, 0, "ps: chi1*chi2^sigma != 1 and chi_i|F not both trivial")
    double = (setting.regime_F is CongruenceClass.ONE_MOD and pi.chi1 == pi.chi2 and r1.is_trivial())
    if double:
        return DistinctionReport(True, 2, "ps: chi1 = chi2, chi1|F = 1, ell | q_F - 1")
    if c1:
        return DistinctionReport(True, 1, "ps: chi1*chi2^sigma = 1")
    return DistinctionReport(True, 1, "ps: chi1|F = chi2|F = 1")


def _steinberg(setting: Setting, pi: Union[Steinberg, Special]) -> DistinctionReport:
    chi_F = restrict_to_F(setting.tower, pi.chi)
    omega = setting.omega
    regime_E, regime_F = setting.regime_E, setting.regime_F
    if isinstance(pi, Special):
        if regime_F is not CongruenceClass.MINUS_ONE_MOD:
            return DistinctionReport(False, 0, "sp: q_F != -1 mod ell")
        if chi_F == omega:
            return DistinctionReport(True, 1, "sp: chi|F = omega")
        if chi_F == nu_half_on_F(setting):
            return DistinctionReport(True, 1, "sp: chi|F = nu^1/2|F")
        return DistinctionReport(False, 0, "sp: chi|F not in {omega, nu^1/2|F}")
    if chi_F == omega:
        return DistinctionReport(True, 1, "st: chi|F = omega")
    if regime_E is CongruenceClass.ONE_MOD and chi_F.is_trivial():
        if regime_F is CongruenceClass.ONE_MOD:
            return DistinctionReport(True, 1, "st: chi|F = 1, ell | q_F - 1")
        return DistinctionReport(False, 0, "st: chi|F = 1 but ell | q_F + 1")
    return DistinctionReport(False, 0, f"st: chi|F != omega ({regime_E})")


def _supercuspidal(setting: Setting, pi: DihedralSupercuspidal) -> DistinctionReport:
    sign = conjugate_dual_sign(parameter(setting, pi))
    if sign is ConjugateSign.BOTH:
        raise InvariantViolation(f"irreducible parameter of {pi.label()} has both signs")
    if sign is ConjugateSign.ORTHOGONAL:
        return DistinctionReport(True, 1, "cusp: conjugate-orthogonal parameter")
    return DistinctionReport(False, 0, f"cusp: parameter is {sign}")


def _check_central_character(setting: Setting, pi: GL2Rep) -> None:
    if not restrict_to_F(setting.tower, central_character(setting, pi)).is_trivial():
        raise InvariantViolation(f"{pi.label()} is distinguished but its central character is nontrivial on F")


def gl2F_distinction(setting: Setting, pi: GL2Rep) -> DistinctionReport:
    validate_rep(setting, pi)
    if isinstance(pi, PrincipalSeries):
        report = _principal_series(setting, pi)
    elif isinstance(pi, (Steinberg, Special)):
        report = _steinberg(setting, pi)
    else:
        report = _supercuspidal(setting, pi)
    if report.distinguished:
        _check_central_character(setting, pi)
    logger.debug(f"{pi.label()}: {report.rationale}")
    return report


def chi_distinction(setting: Setting, pi: GL2Rep, chi_F: SmoothCharacter) -> DistinctionReport:
    """
    (GL2(F), chi_F)-distinction, computed as GL2(F)-distinction of pi twisted
    by the inverse of an extension of chi_F to E. A seeded sample of the
    extensions is tried and every one must give the same verdict.
    """
    if chi_F.domain != "F":
        raise InvalidRepresentation("chi_distinction needs a character of F^x")
    if chi_F.is_trivial():
        return gl2F_distinction(setting, pi)
    extensions = extend_to(setting.tower, chi_F, setting.characters("E"))
    if not extensions:
        raise DepthError(f"no extension of {chi_F.label()} to E found at this depth")
    if len(extensions) > EXTENSION_SAMPLE:
        extensions = random.Random(setting.config.seed).sample(extensions, EXTENSION_SAMPLE)
    reports = [gl2F_distinction(setting, twist(setting, pi, ext.inverse())) for ext in extensions]
    if len({r.distinguished for r in reports}) != 1:
        raise InvariantViolation(f"chi-distinction of {pi.label()} depends on the extension of {chi_F.label()}")
    return reports[0]


def omega_distinction(setting: Setting, pi: GL2Rep) -> DistinctionReport:
    return chi_distinction(setting, pi, setting.omega)


# --- selfduality ---

def is_sigma_selfdual(setting: Setting, pi: GL2Rep) -> bool:
    validate_rep(setting, pi)
    if isinstance(pi, (Steinberg, Special)):
        return (pi.chi * galois_twist(setting.tower, pi.chi)).is_trivial()
    phi = parameter(setting, pi)
    return is_isomorphic(dual(sigma_conjugate(phi)), phi)


def dichotomy_check(setting: Setting, pi: GL2Rep) -> Dichotomy:
    if not is_sigma_selfdual(setting, pi):
        return Dichotomy.NOT_SELFDUAL
    dist = gl2F_distinction(setting, pi).distinguished
    omega_dist = omega_distinction(setting, pi).distinguished
    if dist and omega_dist:
        verdict = Dichotomy.BOTH
    elif dist:
        verdict = Dichotomy.DIST
    elif omega_dist:
        verdict = Dichotomy.OMEGA_DIST
    else:
        verdict = Dichotomy.NEITHER
    if is_supercuspidal(pi) and verdict in (Dichotomy.BOTH, Dichotomy.NEITHER):
        raise InvariantViolation(f"selfdual supercuspidal {pi.label()} gives {verdict}")
    return verdict


def unitary_distinguished(setting: Setting, pi: DihedralSupercuspidal) -> bool:
    """Distinction by the unitary group: pi^sigma ~ pi, tested on parameters."""
    validate_rep(setting, pi)
    if not isinstance(pi, DihedralSupercuspidal):
        raise InvalidRepresentation("unitary distinction is decided for dihedral supercuspidals")
    phi = parameter(setting, pi)
    return is_isomorphic(sigma_conjugate(phi), phi)
