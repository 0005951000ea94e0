#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Weil-Deligne representations (phi, N) with coefficients in GF(ell^d).

phi is a two-dimensional representation from weilrep and N a 2x2 matrix
with phi(w) N = nu(w) N phi(w) on generators. The equivalence ~ rescales N
independently on each indecomposable summand, so a pair is determined up
to ~ by its list of summands; classify() computes that list.

Summand tags:
    ("char", chi, n)        one-dimensional, n says whether N is nonzero on it
    ("ext", image, source)  nonsplit, N maps the source line onto the image line
    ("cyc", {chi1, chi2})   N swaps two distinct lines, N^2 invertible
    ("jordan", chi)         one Jordan block of N with nonzero eigenvalue
    ("irr", phi, n)         phi irreducible
"""

import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from distinction import gl2
from distinction.characters import (
    SmoothCharacter,
    compose_norm,
    galois_twist,
    is_galois_invariant,
    norm_preimages,
    nu,
    restrict_to_F,
)
from distinction.config import Setting
from distinction.scalars import ComputationError, CongruenceClass, FiniteField, InvariantViolation, Matrix
from distinction.weilrep import (
    ConjugateSign,
    Induced,
    NotIsomorphicDomain,
    PrimitiveMarker,
    ReducibleInput,
    Sum,
    WeilRep2,
    conjugate_dual_sign,
    has_trivial_determinant,
    is_isomorphic,
    restrict_to_E,
)

logger = logging.getLogger(__name__)

# --- 自定义异常 ---
class NotNilpotent(ComputationError):
    """N 不是幂零矩阵"""
    pass


class NotSL2Type(ComputationError):
    """det(phi) 不恒为 1，或 tr(N) 不为 0"""
    pass


class EquivarianceError(ComputationError):
    """(phi, N) 不满足等变条件"""
    pass


class OutOfCaseTable(ComputationError):
    """输入不在已实现的情形表中"""
    pass


@dataclass(eq=False)
class WeilDeligneRep:
    phi: WeilRep2
    N: Matrix

    @property
    def group(self):
        return self.phi.group

    @property
    def domain(self) -> str:
        return self.phi.domain

    @property
    def scalars(self) -> FiniteField:
        return self.phi.group.scalars

    def nu_value(self, w):
        """nu(w), read through reciprocity on the domain field."""
        group = self.group
        field = group.tower.field(self.domain)
        chi = nu(field, group.scalars.ell)
        return group.scalars.embed_root(chi(group.artin(self.domain, w)))

    def label(self) -> str:
        return f"({self.phi.label()}, N={list(self.scalars.key(self.N))})"

    def to_json(self) -> Dict:
        sc = self.scalars
        entries = [["0" if int(v) == 0 else str(sc.dlog(v)) for v in row] for row in self.N]
        return {"phi": phi_to_json(self.phi), "N": entries}


def phi_to_json(phi: WeilRep2) -> Dict:
    if isinstance(phi, Sum):
        return {"type": "Sum", "chi1": phi.chi1.to_json(), "chi2": phi.chi2.to_json()}
    return {"type": "Induced", "base": phi.base, "theta": phi.theta.to_json()}


def is_nilpotent(N: Matrix) -> bool:
    """A 2x2 matrix is nilpotent iff its trace and determinant vanish."""
    return int(FiniteField.trace(N)) == 0 and int(FiniteField.det(N)) == 0


def validate(rep: WeilDeligneRep) -> bool:
    sc = rep.scalars
    for w in rep.group.generators(rep.domain):
        A = rep.phi.evaluate(w)
        if not sc.equal(A @ rep.N, rep.nu_value(w) * (rep.N @ A)):
            return False
    return True


def check(rep: WeilDeligneRep) -> WeilDeligneRep:
    if not validate(rep):
        raise EquivarianceError(f"{rep.label()} violates phi(w) N = nu(w) N phi(w)")
    return rep


def is_sl2_type(rep: WeilDeligneRep) -> bool:
    return has_trivial_determinant(rep.phi) and int(FiniteField.trace(rep.N)) == 0


def restrict(rep: WeilDeligneRep) -> WeilDeligneRep:
    """Restriction from W_F to W_E; the basis and N are unchanged."""
    return WeilDeligneRep(restrict_to_E(rep.phi), rep.N)


# --- the equivalence ~ ---

def _sort_key(summand: Tuple) -> Tuple[str, ...]:
    return tuple(x.label() if isinstance(x, SmoothCharacter) else str(x) for x in summand)


def _sorted(*summands: Tuple) -> Tuple[Tuple, ...]:
    return tuple(sorted(summands, key=_sort_key))


def classify(rep: WeilDeligneRep) -> Tuple[Tuple, ...]:
    """Canonical list of indecomposable summands of (phi, N)."""
    sc = rep.scalars
    N = rep.N
    if isinstance(rep.phi, Induced):
        return (("irr", rep.phi, not sc.is_zero(N)),)
    chi1, chi2 = rep.phi.characters()
    a, b, c, d = (int(N[i, j]) != 0 for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)))
    if chi1 != chi2:
        # phi is diagonal with distinct lines, so N only links the two lines
        if b and c:
            return (("cyc", frozenset((chi1, chi2))),)
        if b:
            return (("ext", chi1, chi2),)
        if c:
            return (("ext", chi2, chi1),)
        return _sorted(("char", chi1, a), ("char", chi2, d))
    chi = chi1
    if sc.is_zero(N):
        return (("char", chi, False),) * 2
    tr, det = sc.trace(N), sc.det(N)
    if int(tr * tr - sc.scalar(4) * det) != 0:
        return _sorted(("char", chi, True), ("char", chi, int(det) != 0))
    if not b and not c:
        return (("char", chi, True),) * 2
    if int(tr) == 0:
        return (("ext", chi, chi),)
    return (("jordan", chi),)


def equivalent(a: WeilDeligneRep, b: WeilDeligneRep) -> bool:
    if a.group is not b.group or a.domain != b.domain:
        raise NotIsomorphicDomain(f"{a.label()} and {b.label()} live on different groups")
    ka, kb = classify(a), classify(b)
    if ka[0][0] == "irr" or kb[0][0] == "irr":
        if ka[0][0] != kb[0][0] or ka[0][2] != kb[0][2]:
            return False
        return is_isomorphic(a.phi, b.phi)
    return ka == kb


class CaseRow(enum.Enum):
    """Which lifting rule applies to a class."""

    SEMISIMPLE = "semisimple"
    STEINBERG = "steinberg"
    STEINBERG_MOD = "steinberg_mod"
    SPECIAL_MOD = "special_mod"
    IRREDUCIBLE = "irreducible"

    def __str__(self) -> str:
        return self.value


@dataclass(eq=False)
class WDEquivClass:
    """
    A ~-class with a representative. ``chi`` is the twisting character of
    the Steinberg and special rows.
    """

    rep: WeilDeligneRep
    row: CaseRow
    chi: Optional[SmoothCharacter] = None

    @property
    def key(self) -> Tuple[Tuple, ...]:
        return classify(self.rep)

    @property
    def is_nilpotent(self) -> bool:
        return is_nilpotent(self.rep.N)

    def __eq__(self, other) -> bool:
        return isinstance(other, WDEquivClass) and equivalent(self.rep, other.rep)

    __hash__ = None

    def to_json(self) -> Dict:
        out = {"row": str(self.row), "rep": self.rep.to_json()}
        if self.chi is not None:
            out["chi"] = self.chi.to_json()
        return out


# --- parameters of PGL2(E) representations ---

def _standard_matrices(sc: FiniteField) -> Dict[str, Matrix]:
    return {
        "E12": sc.elementary(0, 1),
        "J": sc.matrix([[0, 1], [1, 0]]),
        "J-": sc.matrix([[0, 1], [-1, 0]]),
        "D": sc.matrix([[1, 0], [0, -1]]),
    }


def PV(setting: Setting, pi: gl2.GL2Rep) -> WeilDeligneRep:
    """
    The nilpotent parameter of a generic representation with trivial central
    character. For St and Sp the semisimple part is Sum(chi nu^1/2, chi nu^-1/2);
    N is the nilpotent E12 for St and 0 for Sp.
    """
    if isinstance(pi, gl2.PrimitiveSupercuspidal):
        raise PrimitiveMarker(f"{pi.label()} has no explicit parameter")
    gl2.validate_rep(setting, pi)
    if not gl2.is_irreducible(setting, pi):
        raise gl2.NotGeneric(f"{pi.label()} is reducible")
    if not gl2.central_character(setting, pi).is_trivial():
        raise NotSL2Type(f"{pi.label()} has nontrivial central character")
    sc = setting.scalars
    phi = gl2.parameter(setting, pi)
    N = sc.elementary(0, 1) if isinstance(pi, gl2.Steinberg) else sc.zeros()
    rep = check(WeilDeligneRep(phi, N))
    if not is_sl2_type(rep):
        raise InvariantViolation(f"PV({pi.label()}) does not have determinant 1")
    return rep


def P_inject(setting: Setting, psi: WeilDeligneRep) -> WDEquivClass:
    """
    The injection of nilpotent SL2-type parameters into ~-classes. It
    replaces N by [[0,1],[1,0]] on the Steinberg parameter when ell | q_E - 1
    and on the special parameter when ell | q_E + 1; every other class is
    kept.
    """
    if not is_nilpotent(psi.N):
        raise NotNilpotent(f"{psi.label()} is not nilpotent")
    if not is_sl2_type(psi):
        raise NotSL2Type(f"{psi.label()} is not of SL2 type")
    check(psi)
    if isinstance(psi.phi, Induced):
        return WDEquivClass(psi, CaseRow.IRREDUCIBLE)
    sc = setting.scalars
    J = _standard_matrices(sc)["J"]
    half = setting.nu_half("E")
    chi1, chi2 = psi.phi.characters()
    if not sc.is_zero(psi.N):
        if setting.regime_E is CongruenceClass.ONE_MOD and chi1 == chi2:
            return WDEquivClass(check(WeilDeligneRep(psi.phi, J)), CaseRow.STEINBERG_MOD, chi1 * half)
        source = chi2 if int(psi.N[0, 1]) else chi1
        return WDEquivClass(psi, CaseRow.STEINBERG, source * half)
    if setting.regime_E is CongruenceClass.MINUS_ONE_MOD and chi1 == setting.nu("E") * chi2:
        return WDEquivClass(check(WeilDeligneRep(psi.phi, J)), CaseRow.SPECIAL_MOD, chi2 * half)
    return WDEquivClass(psi, CaseRow.SEMISIMPLE)


# --- lifting from W_E to W_F ---

def lift_exists_closed_form(setting: Setting, cls: WDEquivClass) -> Tuple[bool, str]:
    """
    Whether the class is the restriction of an SL2-type pair over W_F, by
    the case rules. Returns the verdict and the form of the witness.
    """
    tower = setting.tower
    omega = setting.omega
    row = cls.row
    if row is CaseRow.SEMISIMPLE:
        chi1, _ = cls.rep.phi.characters()
        if is_galois_invariant(tower, chi1):
            return True, "Sum(eta, eta^-1), eta o N = chi1, N = 0"
        if restrict_to_F(tower, chi1) == omega:
            return True, "Ind(chi1), N = 0"
        return False, "chi1 != chi1^sigma and chi1|F != omega"
    if row is CaseRow.IRREDUCIBLE:
        if not cls.rep.scalars.is_zero(cls.rep.N):
            raise OutOfCaseTable(f"irreducible phi with N != 0: {cls.rep.label()}")
        sign = conjugate_dual_sign(cls.rep.phi)
        if sign is ConjugateSign.SYMPLECTIC:
            return True, "Ind from K0 or K1, N = 0 (conjugate-symplectic)"
        return False, f"phi is {sign}"
    if cls.chi is None:
        raise OutOfCaseTable(f"row {row} needs its twisting character")
    chi_F = restrict_to_F(tower, cls.chi)
    if row is CaseRow.STEINBERG:
        if chi_F.is_trivial():
            return True, "Sum(eta nu^1/2, eta nu^-1/2), N = [[0,1],[0,0]]"
        return False, "chi|F != 1"
    if row is CaseRow.STEINBERG_MOD:
        if chi_F.is_trivial():
            return True, "Sum(eta nu^-1/2, eta nu^1/2), N = [[0,1],[1,0]]"
        if setting.regime_F is CongruenceClass.ONE_MOD and chi_F == omega:
            return True, "Sum(eta nu^-1/2, eta^-1 nu^1/2), N = diag(1,-1)"
        return False, "chi|F != 1 and not (q_F = 1 mod ell and chi|F = omega)"
    if row is CaseRow.SPECIAL_MOD:
        if setting.regime_F is not CongruenceClass.MINUS_ONE_MOD:
            return False, "q_F != -1 mod ell"
        if chi_F.is_trivial():
            return True, "Sum(eta nu^-1/2, eta nu^1/2), N = [[0,1],[1,0]]"
        if chi_F == omega * setting.nu("F"):
            return True, "Ind(chi nu^-1/2), N = [[0,1],[-1,0]]"
        return False, "chi|F not in {1, omega nu_F}"
    raise OutOfCaseTable(f"unknown row {row}")


def _first_preimage(setting: Setting, chi: SmoothCharacter) -> SmoothCharacter:
    found = norm_preimages(setting.tower, chi, setting.characters("F"))
    if not found:
        raise OutOfCaseTable(f"no eta with eta o N = {chi.label()} within the enumeration bounds")
    return found[0]


def _witness_parameter(setting: Setting, cls: WDEquivClass) -> Tuple[WeilRep2, Matrix]:
    tower, wq = setting.tower, setting.wq
    sc = setting.scalars
    mats = _standard_matrices(sc)
    half_F = setting.nu_half("F")
    if cls.row is CaseRow.SEMISIMPLE:
        chi1, _ = cls.rep.phi.characters()
        if is_galois_invariant(tower, chi1):
            eta = _first_preimage(setting, chi1)
            return Sum(eta, eta.inverse(), wq), sc.zeros()
        return Induced(chi1, "F", wq), sc.zeros()
    chi = cls.chi
    chi_F = restrict_to_F(tower, chi)
    if cls.row is CaseRow.STEINBERG:
        eta = _first_preimage(setting, chi)
        return Sum(eta * half_F, eta * half_F.inverse(), wq), mats["E12"]
    if cls.row is CaseRow.STEINBERG_MOD:
        eta = _first_preimage(setting, chi)
        if chi_F.is_trivial():
            return Sum(eta * half_F.inverse(), eta * half_F, wq), mats["J"]
        return Sum(eta * half_F.inverse(), eta.inverse() * half_F, wq), mats["D"]
    if cls.row is CaseRow.SPECIAL_MOD:
        if chi_F.is_trivial():
            eta = _first_preimage(setting, chi)
            return Sum(eta * half_F.inverse(), eta * half_F, wq), mats["J"]
        return Induced(chi * setting.nu_half("E").inverse(), "F", wq), mats["J-"]
    raise OutOfCaseTable(f"no explicit witness form for row {cls.row}")


def equivariance_space(phi: WeilRep2) -> List[Matrix]:
    """Basis of {N : phi(w) N = nu(w) N phi(w), tr N = 0}."""
    sc = phi.group.scalars
    probe = WeilDeligneRep(phi, sc.zeros())
    conditions = []
    for w in phi.group.generators(phi.domain):
        A, c = phi.evaluate(w), probe.nu_value(w)
        conditions.append(lambda X, A=A, c=c: A @ X - c * (X @ A))
    conditions.append(lambda X: sc.diagonal(sc.trace(X), sc.zero))
    return sc.solve_matrix_conditions(conditions)


def coefficient_combinations(sc: FiniteField, basis: List[Matrix]) -> Iterator[Matrix]:
    """
    Zero, then one combination of the basis per line through the origin:
    coefficients run over GF(ell) with the first nonzero one equal to 1.
    Coefficients outside the prime field are not tried.
    """
    yield sc.zeros()
    for coeffs in itertools.product(range(sc.ell), repeat=len(basis)):
        leading = next((c for c in coeffs if c), None)
        if leading != 1:
            continue
        N = sc.zeros()
        for c, B in zip(coeffs, basis):
            if c:
                N = N + sc.scalar(c) * B
        yield N


def _match(phi_F: WeilRep2, target: WeilDeligneRep, preferred: Optional[Matrix] = None) -> Optional[WeilDeligneRep]:
    """An SL2-type (phi_F, N) restricting into the class of target, if one exists."""
    if not has_trivial_determinant(phi_F):
        return None
    sc = phi_F.group.scalars
    candidates: List[Matrix] = [preferred] if preferred is not None else []
    candidates.extend(coefficient_combinations(sc, equivariance_space(phi_F)))
    for N in candidates:
        wd = WeilDeligneRep(phi_F, N)
        if int(sc.trace(N)) != 0 or not validate(wd):
            continue
        if equivalent(restrict(wd), target):
            return wd
    return None


def lift_witness(setting: Setting, cls: WDEquivClass) -> Optional[WeilDeligneRep]:
    """The W_F pair of the form named by the closed form, or None when no lift exists."""
    exists, form = lift_exists_closed_form(setting, cls)
    if not exists:
        return None
    if cls.row is CaseRow.IRREDUCIBLE:
        witness = lift_search(setting, cls)
    else:
        phi_F, preferred = _witness_parameter(setting, cls)
        witness = _match(phi_F, cls.rep, preferred)
    if witness is None:
        raise InvariantViolation(f"no witness of the form {form} restricts to {cls.rep.label()}")
    return witness


def _lift_candidates(setting: Setting, phi: WeilRep2) -> Iterator[WeilRep2]:
    """Semisimple W_F parameters whose restriction can be isomorphic to phi."""
    tower = setting.tower
    if isinstance(phi, Sum):
        group = phi.group
        pair = phi.characters()
        for eta in setting.characters("F"):
            image = (compose_norm(tower, eta, "E"), compose_norm(tower, eta.inverse(), "E"))
            if image == pair or image[::-1] == pair:
                yield Sum(eta, eta.inverse(), group)
        for mu in dict.fromkeys(pair):
            if galois_twist(tower, mu) != mu:
                yield Induced(mu, "F", group)
        return
    group = setting.group_for("K")
    targets = (phi.theta, phi.conjugate_theta())
    for sub in ("K0", "K1"):
        for mu in setting.characters(sub):
            if compose_norm(tower, mu, "K") not in targets:
                continue
            try:
                yield Induced(mu, "F", group)
            except ReducibleInput:
                continue


def lift_search(setting: Setting, cls: WDEquivClass) -> Optional[WeilDeligneRep]:
    """
    Brute-force search for an SL2-type pair over W_F restricting into the
    class: every candidate semisimple part from the enumerated characters,
    every GF(ell)-combination, up to scaling, of a basis of its traceless
    equivariant N.
    """
    target = cls.rep
    tried = 0
    for phi_F in _lift_candidates(setting, target.phi):
        tried += 1
        found = _match(phi_F, target)
        if found is not None:
            logger.debug(f"{target.label()} 的提升: {found.label()} (候选 {tried})")
            return found
    logger.debug(f"{target.label()} 无提升 (候选 {tried})")
    return None
