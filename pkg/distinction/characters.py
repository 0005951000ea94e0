#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Smooth characters of the truncated multiplicative groups F^x, E^x, K^x, ...

A character is stored by its value at the uniformizer and its values on the
generators of the full-level unit group of its field, all as RootOfUnity.
Equality of characters is equality of these coordinates.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy.ntheory import discrete_log, n_order, primitive_root

from distinction.localfield import LocalField, Mult, Tower, norm_one_subgroup
from distinction.scalars import (
    ComputationError,
    InvariantViolation,
    RootOfUnity,
    ell_part,
    ell_prime_part,
)

logger = logging.getLogger(__name__)

# Enumerations above this size are refused.
CHARACTER_LIMIT = 50_000
# Default uniformizer bounds grow until E^x has at least this many characters.
MIN_E_CHARACTERS = 100


# --- 自定义异常 ---
class BoundTooLarge(ComputationError):
    """枚举范围超出上限"""
    pass


class CharacterFormatError(ComputationError):
    """特征的 JSON 表示不合法"""
    pass


@dataclass(frozen=True)
class SmoothCharacter:
    domain: str
    unif_value: RootOfUnity
    unit_values: Tuple[RootOfUnity, ...]
    field: LocalField = dc_field(compare=False, hash=False, repr=False)

    def __call__(self, x: Mult) -> RootOfUnity:
        model = self.field.unit_group()
        value = self.unif_value ** x[0]
        for val, e in zip(self.unit_values, model.dlog(x[1])):
            if e:
                value = value * val ** e
        return value

    def __mul__(self, other: "SmoothCharacter") -> "SmoothCharacter":
        if other.domain != self.domain:
            raise ValueError(f"cannot multiply characters of {self.domain} and {other.domain}")
        return SmoothCharacter(
            self.domain,
            self.unif_value * other.unif_value,
            tuple(a * b for a, b in zip(self.unit_values, other.unit_values)),
            self.field,
        )

    def __pow__(self, k: int) -> "SmoothCharacter":
        return SmoothCharacter(self.domain, self.unif_value ** k, tuple(v ** k for v in self.unit_values), self.field)

    def inverse(self) -> "SmoothCharacter":
        return self ** -1

    def is_trivial(self) -> bool:
        return self.unif_value.is_one() and all(v.is_one() for v in self.unit_values)

    def is_quadratic(self) -> bool:
        return (self ** 2).is_trivial()

    def is_unramified(self) -> bool:
        return all(v.is_one() for v in self.unit_values)

    @property
    def order(self) -> int:
        return math.lcm(self.unif_value.order, *(v.order for v in self.unit_values))

    def label(self) -> str:
        units = ",".join(str(v) for v in self.unit_values)
        return f"{self.domain}[{self.unif_value};{units}]"

    def to_json(self) -> Dict:
        return {
            "domain": self.domain,
            "unif_value": str(self.unif_value),
            "unit_values": [str(v) for v in self.unit_values],
        }


def trivial(field: LocalField) -> SmoothCharacter:
    n = len(field.unit_group().gens)
    return SmoothCharacter(field.name, RootOfUnity.one(), (RootOfUnity.one(),) * n, field)


def from_function(field: LocalField, fn: Callable[[Mult], RootOfUnity]) -> SmoothCharacter:
    """The character agreeing with fn on the uniformizer and the unit generators."""
    model = field.unit_group()
    return SmoothCharacter(
        field.name,
        fn(field.uniformizer),
        tuple(fn(field.unit(g)) for g in model.gens),
        field,
    )


def from_json(tower: Tower, obj: Dict) -> SmoothCharacter:
    try:
        field = tower.field(obj["domain"])
        unif = RootOfUnity.parse(str(obj["unif_value"]))
        units = tuple(RootOfUnity.parse(str(v)) for v in obj.get("unit_values", []))
    except (KeyError, ValueError, TypeError) as exc:
        raise CharacterFormatError(f"bad character object {obj!r}: {exc}")
    orders = field.unit_group().orders
    if len(units) != len(orders):
        raise CharacterFormatError(f"{field.name} needs {len(orders)} unit values, got {len(units)}")
    for val, order in zip(units, orders):
        if order % val.order:
            raise CharacterFormatError(f"unit value {val} has order not dividing {order}")
    return SmoothCharacter(field.name, unif, units, field)


# --- transport along the tower ---

def _memo(field: LocalField, key, build: Callable[[], SmoothCharacter]) -> SmoothCharacter:
    return field.memo(key, build)


def restrict(tower: Tower, chi: SmoothCharacter, sub: str) -> SmoothCharacter:
    """chi restricted to the subfield ``sub``."""
    target = tower.field(sub)
    return _memo(target, ("restrict", chi), lambda: from_function(target, lambda x: chi(tower.embed(x, sub, chi.domain))))


def restrict_to_F(tower: Tower, chi: SmoothCharacter) -> SmoothCharacter:
    return restrict(tower, chi, "F")


def compose_norm(tower: Tower, eta: SmoothCharacter, sup: str = "E") -> SmoothCharacter:
    """eta o N_{sup/eta.domain}."""
    target = tower.field(sup)
    return _memo(target, ("compose_norm", eta), lambda: from_function(target, lambda x: eta(tower.norm(x, sup, eta.domain))))


def galois_twist(tower: Tower, chi: SmoothCharacter, label: Optional[int] = None) -> SmoothCharacter:
    """
    chi^g(x) = chi(g(x)). On E, g is sigma; on K, g is the automorphism with
    the given label (rho by default).
    """
    if chi.domain == "E":
        g = tower.sigma
    elif chi.domain == "K":
        g = tower.galois_K[1 if label is None else label]
    else:
        raise ValueError(f"no Galois action recorded on {chi.domain}")
    return _memo(chi.field, ("twist", g.name, chi), lambda: from_function(chi.field, lambda x: chi(g(x))))


def is_trivial_on_F(tower: Tower, chi: SmoothCharacter) -> bool:
    return restrict_to_F(tower, chi).is_trivial()


def is_trivial_on_E1(tower: Tower, chi: SmoothCharacter) -> bool:
    E = tower.E
    return all(chi(E.unit(g)).is_one() for g in norm_one_subgroup(tower))


def is_galois_invariant(tower: Tower, chi: SmoothCharacter) -> bool:
    return galois_twist(tower, chi) == chi


# --- distinguished characters ---

def _residue_root(ell: int, q: int) -> RootOfUnity:
    """dlog of q^-1 in GF(ell)^x, base the least primitive root."""
    g = primitive_root(ell)
    target = pow(q, -1, ell)
    return RootOfUnity(int(discrete_log(ell, target, g)), ell - 1)


def nu(field: LocalField, ell: int) -> SmoothCharacter:
    """The unramified character with nu(pi) = q_L^-1 mod ell."""
    base = trivial(field)
    return SmoothCharacter(field.name, _residue_root(ell, field.q), base.unit_values, field)


def nu_half(tower: Tower, name: str, ell: int, convention: str = "even") -> SmoothCharacter:
    """
    A square root of nu on ``name``.

    On F the uniformizer value is k/(2(ell-1)) for nu(pi) = k/(ell-1), times -1
    under the "odd" convention. On every other field it is nu_F^(1/2) o N, so
    its restriction to F is nu_F for either convention.
    """
    F = tower.F
    root = _residue_root(ell, F.q)
    half = RootOfUnity(root.num * ((ell - 1) // root.den), 2 * (ell - 1))
    if convention == "odd":
        half = half * RootOfUnity(1, 2)
    elif convention != "even":
        raise ValueError(f"unknown nu_half convention {convention!r}")
    nu_half_F = SmoothCharacter("F", half, trivial(F).unit_values, F)
    if name == "F":
        return nu_half_F
    return compose_norm(tower, nu_half_F, name)


def quadratic_characters(field: LocalField) -> List[SmoothCharacter]:
    """All characters of order dividing 2, trivial first."""
    orders = field.unit_group().orders
    choices = [(RootOfUnity.one(), RootOfUnity(1, 2)) if o % 2 == 0 else (RootOfUnity.one(),) for o in orders]
    out = []
    for units in itertools.product(*choices):
        for unif in (RootOfUnity.one(), RootOfUnity(1, 2)):
            out.append(SmoothCharacter(field.name, unif, tuple(units), field))
    return out


def norm_residue_character(tower: Tower, sub: str, sup: str) -> SmoothCharacter:
    """The unique nontrivial quadratic character of sub^x trivial on N(sup^x)."""
    M = tower.field(sub)
    L = tower.field(sup)

    def build() -> SmoothCharacter:
        images = [tower.norm(L.uniformizer, sup, sub)]
        images += [tower.norm(L.unit(g), sup, sub) for g in L.unit_group().gens]
        found = [
            chi for chi in quadratic_characters(M)
            if not chi.is_trivial() and all(chi(y).is_one() for y in images)
        ]
        if len(found) != 1:
            raise InvariantViolation(f"expected one norm-residue character for {sup}/{sub}, found {len(found)}")
        return found[0]

    return M.memo(("norm_residue", sup), build)


def omega_EF(tower: Tower) -> SmoothCharacter:
    return norm_residue_character(tower, "F", "E")


# --- enumeration ---

def default_unif_order(tower: Tower, ell: int) -> int:
    """
    lcm(8, 2 * order of q_E mod ell), doubled while E^x has fewer than
    MIN_E_CHARACTERS characters of order prime to ell under it.
    """
    order = math.lcm(8, 2 * int(n_order(tower.E.q % ell, ell)))
    units = math.prod(o // ell_part(o, ell) for o in tower.E.unit_group().orders)
    while units * ell_prime_part(order, ell) < MIN_E_CHARACTERS:
        order *= 2
    return order


def enumerate_characters(field: LocalField, ell: int, max_unif_order: int,
                         max_conductor: Optional[int] = None) -> List[SmoothCharacter]:
    """
    Every character of order prime to ell, trivial on U^max_conductor and
    with uniformizer value of order dividing max_unif_order.

    Unit characters vary in the outer loop, uniformizer values in the inner.
    """
    level = field.level if max_conductor is None else min(max_conductor, field.level)
    unif_order = ell_prime_part(max_unif_order, ell)
    return field.memo(("enumerate", ell, unif_order, level),
                      lambda: _enumerate(field, ell, unif_order, level))


def _enumerate(field: LocalField, ell: int, unif_order: int, level: int) -> List[SmoothCharacter]:
    small = field.unit_group(level)
    full = field.unit_group()
    per_gen = []
    for o in small.orders:
        step = ell_part(o, ell)
        per_gen.append([RootOfUnity(k, o) for k in range(0, o, step)])
    count = unif_order * math.prod(len(v) for v in per_gen)
    if count > CHARACTER_LIMIT:
        raise BoundTooLarge(f"{count} characters of {field.name} exceed the limit {CHARACTER_LIMIT}")

    # exponents of each full-level generator in the level-c decomposition
    lifts = [small.dlog(g) for g in full.gens]
    unif_values = [RootOfUnity(j, unif_order) for j in range(unif_order)]
    out = []
    for values in itertools.product(*per_gen):
        unit_values = []
        for exps in lifts:
            val = RootOfUnity.one()
            for v, e in zip(values, exps):
                if e:
                    val = val * v ** e
            unit_values.append(val)
        unit_values = tuple(unit_values)
        for unif in unif_values:
            out.append(SmoothCharacter(field.name, unif, unit_values, field))
    logger.info(f"{field.name} 特征枚举: 层级 {level}, 一致化元阶 {unif_order}, 共 {len(out)} 个")
    return out


def extend_to(tower: Tower, chi_F: SmoothCharacter, candidates: Sequence[SmoothCharacter]) -> List[SmoothCharacter]:
    """The candidates whose restriction to F is chi_F."""
    return [chi for chi in candidates if restrict_to_F(tower, chi) == chi_F]


def norm_preimages(tower: Tower, chi: SmoothCharacter, candidates: Sequence[SmoothCharacter]) -> List[SmoothCharacter]:
    """The candidate F-characters eta with eta o N = chi."""
    return [eta for eta in candidates if compose_norm(tower, eta, chi.domain) == chi]
