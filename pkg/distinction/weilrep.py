#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Truncated relative Weil groups and their two-dimensional representations.

W = top^x x Gal(top/F) as a set, with product
    (x, g) (y, h) = (x * g(y) * f(g, h), g XOR h)
for a 2-cocycle f. Galois labels are bit vectors, so XOR is the group law of
Gal(top/F). Reciprocity maps W_M -> M^x are computed as transfers to W_top
and pulled back to M.
"""

import enum
import itertools
import logging
import random
import threading
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Sequence, Tuple, Union

from distinction.characters import (
    SmoothCharacter,
    compose_norm,
    from_function,
    norm_residue_character,
)
from distinction.localfield import LocalField, Mult, Tower
from distinction.scalars import ComputationError, FiniteField, InvariantViolation, Matrix

logger = logging.getLogger(__name__)


# --- 自定义异常 ---
class ReducibleInput(ComputationError):
    """诱导表示不可约性条件不满足"""
    pass


class NotIsomorphicDomain(ComputationError):
    """两个表示不在同一个 Weil 群上"""
    pass


class WrongDomain(ComputationError):
    """群元素不属于表示的定义域"""
    pass


class PrimitiveMarker(ComputationError):
    """本原参数没有显式模型，无法给出结论"""
    pass


Element = Tuple[Mult, int]


class RelativeWeilGroup:
    """
    A truncated model of W_{top/F}.

    ``subgroups`` maps a field name M to the labels of Gal(top/M); the
    elements of W_M are those whose label lies there.
    """

    def __init__(self, name: str, tower: Tower, top: LocalField, scalars: FiniteField,
                 autos: Dict[int, Callable[[Mult], Mult]], subgroups: Dict[str, Tuple[int, ...]],
                 cocycle: Dict[Tuple[int, int], Mult]):
        self.name = name
        self.tower = tower
        self.top = top
        self.scalars = scalars
        self.autos = autos
        self.subgroups = subgroups
        self._cocycle = cocycle
        self._artin_cache: Dict = {}
        self._lock = threading.RLock()

    def __repr__(self) -> str:
        return f"RelativeWeilGroup({self.name}, top={self.top.name})"

    # --- group law ---

    def f(self, g: int, h: int) -> Mult:
        return self._cocycle.get((g, h), self.top.one)

    @property
    def identity(self) -> Element:
        return (self.top.one, 0)

    def mul(self, a: Element, b: Element) -> Element:
        top = self.top
        (x, g), (y, h) = a, b
        return (top.mul(top.mul(x, self.autos[g](y)), self.f(g, h)), g ^ h)

    def inv(self, a: Element) -> Element:
        x, g = a
        top = self.top
        # (x, g)^-1 = (g^-1((x f(g, g))^-1), g); every label is an involution
        return (self.autos[g](top.inv(top.mul(x, self.f(g, g)))), g)

    def key(self, a: Element) -> Tuple:
        return (self.top.key(a[0]), a[1])

    def equal(self, a: Element, b: Element) -> bool:
        return self.key(a) == self.key(b)

    def lift(self, label: int) -> Element:
        return (self.top.one, label)

    def contains(self, subgroup: str, a: Element) -> bool:
        return a[1] in self.subgroups[subgroup]

    def check_cocycle(self) -> None:
        labels = self.subgroups["F"]
        top = self.top
        for g, h, k in itertools.product(labels, repeat=3):
            lhs = top.mul(self.f(g, h), self.f(g ^ h, k))
            rhs = top.mul(self.autos[g](self.f(h, k)), self.f(g, h ^ k))
            if not top.equal(lhs, rhs):
                raise InvariantViolation(f"{self.name}: cocycle identity fails at {(g, h, k)}")

    # --- reciprocity ---

    def coset_reps(self, subgroup: str) -> List[Element]:
        return [self.lift(g) for g in self.subgroups[subgroup]]

    def transfer(self, subgroup: str, w: Element) -> Mult:
        """Transfer W_subgroup -> W_top^ab = top^x."""
        reps = self.coset_reps(subgroup)
        by_label = {c[1]: c for c in reps}
        top = self.top
        out = top.one
        for c in reps:
            y = self.mul(w, c)
            d = by_label[y[1]]
            h = self.mul(self.inv(d), y)
            out = top.mul(out, h[0])
        return out

    def artin(self, subgroup: str, w: Element) -> Mult:
        """The image of w in subgroup^x under reciprocity."""
        if not self.contains(subgroup, w):
            raise WrongDomain(f"{w} is not in W_{subgroup}")
        cache_key = (subgroup, self.key(w))
        with self._lock:
            if cache_key in self._artin_cache:
                return self._artin_cache[cache_key]
        image = self.tower.pullback(self.transfer(subgroup, w), subgroup, self.top.name)
        with self._lock:
            return self._artin_cache.setdefault(cache_key, image)

    # --- generators and sampling ---

    def generators(self, subgroup: str) -> List[Element]:
        top = self.top
        gens = [(top.uniformizer, 0)] + [(top.unit(g), 0) for g in top.unit_group().gens]
        gens += [self.lift(g) for g in self.subgroups[subgroup] if g]
        return gens

    def sigma_lift(self) -> Element:
        """A lift of the nontrivial element of Gal(E/F)."""
        outside = [g for g in self.subgroups["F"] if g not in self.subgroups["E"]]
        return self.lift(outside[0])

    def random_element(self, rng: random.Random, subgroup: str = "F") -> Element:
        units = self.top.units()
        return ((rng.randint(-2, 2), rng.choice(units)), rng.choice(self.subgroups[subgroup]))


def _conjugate_character(group: RelativeWeilGroup, theta: SmoothCharacter, label: int) -> SmoothCharacter:
    """theta^g(x) = theta(g(x)) for a character of an intermediate field."""
    tower = group.tower
    L = tower.field(theta.domain)
    top = group.top.name
    g = group.autos[label]

    def fn(x: Mult) -> Mult:
        return theta(tower.pullback(g(tower.embed(x, L.name, top)), L.name, top))

    return L.memo(("conjugate", group.name, label, theta), lambda: from_function(L, fn))


def quadratic_weil_group(tower: Tower, scalars: FiniteField) -> RelativeWeilGroup:
    """W_{E/F}, with s^2 = t the first non-norm of F^x."""
    omega = norm_residue_character(tower, "F", "E")
    F, E = tower.F, tower.E
    t = next(x for x in F.elements_mod_square_unif() if not omega(x).is_one())
    autos = {0: lambda x: x, 1: tower.sigma}
    cocycle = {(1, 1): tower.embed(t, "F", "E")}
    group = RelativeWeilGroup("W(E/F)", tower, E, scalars, autos, {"E": (0,), "F": (0, 1)}, cocycle)
    group.check_cocycle()
    logger.info(f"W(E/F) 构建完成, s^2 = {t}")
    return group


def biquadratic_weil_group(tower: Tower, scalars: FiniteField) -> RelativeWeilGroup:
    """
    W_{K/F} for the biquadratic closure K.

    r lifts rho with r^2 = t_E (a non-norm of E from K), s lifts tau0 with
    s^2 = t0 (a non-norm of K0 from K), and s r = c r s with c a unit of K
    such that N_{K/E}(c) = sigma(t_E)/t_E and N_{K/K0}(c) = t0/rho(t0).
    """
    K = tower.require_biquadratic()
    E, K0 = tower.E, tower.K0
    autos = {g: tower.galois_K[g] for g in range(4)}
    rho, tau0 = autos[1], autos[2]
    omega_KE = norm_residue_character(tower, "E", "K")
    omega_KK0 = norm_residue_character(tower, "K0", "K")
    t_E = next(x for x in E.elements_mod_square_unif() if not omega_KE(x).is_one())
    t0 = next(x for x in K0.elements_mod_square_unif() if not omega_KK0(x).is_one())
    tE_K = tower.embed(t_E, "E", "K")
    t0_K = tower.embed(t0, "K0", "K")
    want_E = K.div(tower.embed(tower.sigma(t_E), "E", "K"), tE_K)
    want_K0 = K.div(t0_K, rho(t0_K))
    c = None
    for u in K.units():
        x = K.unit(u)
        if K.equal(K.mul(x, rho(x)), want_E) and K.equal(K.mul(x, tau0(x)), want_K0):
            c = x
            break
    if c is None:
        raise InvariantViolation("no commutator unit found for W(K/F)")

    cocycle = {}
    for g, h in itertools.product(range(4), repeat=2):
        a, b = g & 1, g >> 1
        a2, b2 = h & 1, h >> 1
        value = K.one
        if b == 1 and a2 == 1:
            value = K.mul(value, autos[a](c))
        if a + a2 == 2:
            value = K.mul(value, tE_K)
        if b + b2 == 2:
            value = K.mul(value, autos[(a + a2) % 2](t0_K))
        if not K.equal(value, K.one):
            cocycle[(g, h)] = value
    group = RelativeWeilGroup("W(K/F)", tower, K, scalars, autos, dict(tower.SUBGROUPS), cocycle)
    group.check_cocycle()
    logger.info(f"W(K/F) 构建完成, t_E = {t_E}, t0 = {t0}")
    return group


# --- representations ---

class ConjugateSign(enum.Enum):
    ORTHOGONAL = "ConjugateOrthogonal"
    SYMPLECTIC = "ConjugateSymplectic"
    BOTH = "Both"
    NEITHER = "Neither"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Sum:
    """chi1 + chi2 on W_domain, characters read through reciprocity."""

    chi1: SmoothCharacter
    chi2: SmoothCharacter
    group: RelativeWeilGroup = dc_field(compare=False, hash=False, repr=False)

    @property
    def domain(self) -> str:
        return self.chi1.domain

    def evaluate(self, w: Element) -> Matrix:
        a = self.group.artin(self.domain, w)
        sc = self.group.scalars
        return sc.diagonal(sc.embed_root(self.chi1(a)), sc.embed_root(self.chi2(a)))

    def characters(self) -> Tuple[SmoothCharacter, SmoothCharacter]:
        return (self.chi1, self.chi2)

    def label(self) -> str:
        return f"Sum({self.chi1.label()}, {self.chi2.label()})"


@dataclass(frozen=True)
class Induced:
    """
    Ind_{W_sub}^{W_base}(theta) in the basis {1 (x) v, r (x) v}, where r lifts
    the first Galois label of base outside sub.
    """

    theta: SmoothCharacter
    base: str
    group: RelativeWeilGroup = dc_field(compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.theta == self.conjugate_theta():
            raise ReducibleInput(f"{self.theta.label()} is fixed by Gal({self.sub}/{self.base})")

    @property
    def sub(self) -> str:
        return self.theta.domain

    @property
    def domain(self) -> str:
        return self.base

    @property
    def outer_label(self) -> int:
        inner = self.group.subgroups[self.sub]
        return next(g for g in self.group.subgroups[self.base] if g not in inner)

    def conjugate_theta(self) -> SmoothCharacter:
        return _conjugate_character(self.group, self.theta, self.outer_label)

    def _theta_dot(self, y: Element):
        group = self.group
        if not group.contains(self.sub, y):
            return group.scalars.zero
        return group.scalars.embed_root(self.theta(group.artin(self.sub, y)))

    def evaluate(self, w: Element) -> Matrix:
        group = self.group
        if not group.contains(self.base, w):
            raise WrongDomain(f"{w} is not in W_{self.base}")
        reps = [group.identity, group.lift(self.outer_label)]
        inverses = [group.inv(c) for c in reps]
        m = group.scalars.zeros()
        for i in range(2):
            for k in range(2):
                m[i, k] = self._theta_dot(group.mul(group.mul(inverses[i], w), reps[k]))
        return m

    def label(self) -> str:
        return f"Ind_{self.sub}^{self.base}({self.theta.label()})"


@dataclass(frozen=True)
class PrimitiveParameter:
    """
    Opaque marker for a primitive (tetrahedral or octahedral) parameter.
    Only its restriction length is recorded.
    """

    name: str
    restriction_length: int = 1


WeilRep2 = Union[Sum, Induced]


def solve_intertwiners(a: WeilRep2, b: WeilRep2) -> List[Matrix]:
    """Basis of {X : X a(g) = b(g) X for all generators g}."""
    if a.group is not b.group or a.domain != b.domain:
        raise NotIsomorphicDomain(f"{a.label()} and {b.label()} live on different groups")
    gens = a.group.generators(a.domain)
    pairs = [(a.evaluate(g), b.evaluate(g)) for g in gens]
    conditions = [lambda X, A=A, B=B: X @ A - B @ X for A, B in pairs]
    return a.group.scalars.solve_matrix_conditions(conditions)


def is_isomorphic(a: WeilRep2, b: WeilRep2) -> bool:
    return a.group.scalars.has_invertible(solve_intertwiners(a, b))


def intertwiner_dimension(rep: WeilRep2) -> int:
    """dim End(rep); 1 exactly when rep is irreducible."""
    return len(solve_intertwiners(rep, rep))


def conjugate_dual_sign(rep: WeilRep2) -> ConjugateSign:
    """
    Sign of a nondegenerate form B with B(rep(w)x, rep(s w s^-1)y) = B(x, y)
    and B(y, x) = c B(x, rep(s^2) y).
    """
    group = rep.group
    if rep.domain != "E":
        raise WrongDomain("the conjugate-duality sign needs a representation of W_E")
    sc = group.scalars
    s = group.sigma_lift()
    s_inv = group.inv(s)
    pairs = []
    for w in group.generators("E"):
        conj = group.mul(group.mul(s, w), s_inv)
        pairs.append((rep.evaluate(w), rep.evaluate(conj)))
    s_squared = rep.evaluate(group.mul(s, s))
    invariance = [lambda X, A=A, B=B: A.T @ X @ B - X for A, B in pairs]
    signs = []
    for c in (1, -1):
        cond = lambda X, c=c: X.T - sc.scalar(c) * (X @ s_squared)
        if sc.has_invertible(sc.solve_matrix_conditions(invariance + [cond])):
            signs.append(c)
    if signs == [1, -1]:
        return ConjugateSign.BOTH
    if signs == [1]:
        return ConjugateSign.ORTHOGONAL
    if signs == [-1]:
        return ConjugateSign.SYMPLECTIC
    return ConjugateSign.NEITHER


# --- constructions ---

def dual(rep: WeilRep2) -> WeilRep2:
    if isinstance(rep, Sum):
        return Sum(rep.chi1.inverse(), rep.chi2.inverse(), rep.group)
    return Induced(rep.theta.inverse(), rep.base, rep.group)


def sigma_conjugate(rep: WeilRep2) -> WeilRep2:
    """w -> rep(s w s^-1) for the lift s of sigma, as a representation of W_E."""
    group = rep.group
    label = group.sigma_lift()[1]
    if rep.domain != "E":
        raise WrongDomain("sigma-conjugation is defined on W_E")
    if isinstance(rep, Sum):
        return Sum(_twist_by_label(group, rep.chi1, label), _twist_by_label(group, rep.chi2, label), group)
    return Induced(_twist_by_label(group, rep.theta, label), rep.base, group)


def _twist_by_label(group: RelativeWeilGroup, chi: SmoothCharacter, label: int) -> SmoothCharacter:
    if chi.domain == group.top.name:
        g = group.autos[label]
        key = ("twist-label", group.name, label, chi)
        return chi.field.memo(key, lambda: from_function(chi.field, lambda x: chi(g(x))))
    return _conjugate_character(group, chi, label)


def twist(rep: WeilRep2, lam: SmoothCharacter) -> WeilRep2:
    """rep (x) lam for a character lam of the domain field."""
    if isinstance(rep, Sum):
        return Sum(rep.chi1 * lam, rep.chi2 * lam, rep.group)
    tower = rep.group.tower
    return Induced(rep.theta * compose_norm(tower, lam, rep.sub), rep.base, rep.group)


def restrict_to_E(rep: WeilRep2) -> WeilRep2:
    """The restriction of a W_F representation to W_E, in the same basis."""
    group = rep.group
    tower = group.tower
    if rep.domain != "F":
        raise WrongDomain("restrict_to_E expects a representation of W_F")
    if isinstance(rep, Sum):
        return Sum(compose_norm(tower, rep.chi1, "E"), compose_norm(tower, rep.chi2, "E"), group)
    if rep.sub == "E":
        return Sum(rep.theta, rep.conjugate_theta(), group)
    top = group.top.name
    return Induced(compose_norm(tower, rep.theta, top), "E", group)


def determinant(rep: WeilRep2, w: Element):
    return rep.group.scalars.det(rep.evaluate(w))


def has_trivial_determinant(rep: WeilRep2) -> bool:
    return all(int(determinant(rep, g)) == 1 for g in rep.group.generators(rep.domain))


def dihedral_centralizer_order(rep: WeilRep2) -> int:
    """|S_phi| in PGL2: 4 if (theta/theta^g)^2 = 1, else 2."""
    if not isinstance(rep, Induced):
        raise ReducibleInput("centralizer order is defined for induced parameters")
    ratio = rep.theta * rep.conjugate_theta().inverse()
    return 4 if ratio.is_quadratic() else 2


def projective_centralizer_order(rep: WeilRep2, characters: Sequence[SmoothCharacter]) -> int:
    """#{lam : rep (x) lam ~ rep} among the given characters, by intertwiner solves."""
    return sum(1 for lam in characters if is_isomorphic(twist(rep, lam), rep))
