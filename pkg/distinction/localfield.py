#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Truncated arithmetic in a tower of quadratic extensions of a local field.

Ring elements are plain tuples. The base ring O_F / p_F^M is either
(Z/p^M)[x]/(g) with g a lifted Conway polynomial (characteristic zero) or
F_q[[t]]/(t^M) (positive characteristic). A quadratic extension ring stores
a + b*delta as the pair (a, b) over the ring below it, with
delta^2 = tr*delta + c.

Multiplicative elements of a field are pairs (v, u): the element is
uniformizer^v * u with u a unit of the ring.
"""

import itertools
import math
import logging
import threading
from dataclasses import dataclass
from typing import Any, Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

import galois
import numpy as np
from sympy import isprime

from distinction.scalars import ComputationError, InvariantViolation, WrongField

logger = logging.getLogger(__name__)


# --- 自定义异常 ---
class FieldSpecError(ComputationError):
    """域参数不合法"""
    pass


class NotPrincipalUnit(ComputationError):
    """元素不是所要求层级的主单位"""
    pass


class DepthError(ComputationError):
    """截断精度不足以完成计算"""
    pass


class DlogError(ComputationError):
    """单位群离散对数查表失败"""
    pass


class UnsupportedTower(ComputationError):
    """不支持的域塔"""
    pass


Elem = tuple


class Ring:
    """Common operations shared by every truncated ring."""

    q: int
    precision: int
    zero: Elem
    one: Elem
    unif: Elem

    def pow(self, x: Elem, k: int) -> Elem:
        if k < 0:
            return self.pow(self.inv(x), -k)
        result = self.one
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def is_zero(self, x: Elem) -> bool:
        return x == self.zero

    def is_unit(self, x: Elem) -> bool:
        return self.valuation(x) == 0

    def units(self, level: int) -> List[Elem]:
        """Representatives of (O / p^level)^x in enumeration order."""
        return [x for x in self.elements(level) if self.is_unit(x)]

    def equal_mod(self, x: Elem, y: Elem, level: int) -> bool:
        return self.reduce(x, level) == self.reduce(y, level)


class PadicRing(Ring):
    """O_F / p^M for F unramified of degree f over Q_p."""

    def __init__(self, p: int, f: int, precision: int):
        self.p = p
        self.f = f
        self.q = p ** f
        self.precision = precision
        self.modulus = p ** precision
        if f > 1:
            coeffs = [int(c) for c in galois.conway_poly(p, f).coeffs]
            # x^f = -(c_{f-1} x^{f-1} + ... + c_0)
            self._tail = [(-c) % self.modulus for c in reversed(coeffs[1:])]
        else:
            self._tail = []
        self.zero = (0,) * f
        self.one = (1,) + (0,) * (f - 1)
        self.unif = (p,) + (0,) * (f - 1)
        self._group_order = (self.q - 1) * self.q ** (precision - 1)

    def from_int(self, k: int) -> Elem:
        return (k % self.modulus,) + (0,) * (self.f - 1)

    def add(self, x: Elem, y: Elem) -> Elem:
        m = self.modulus
        return tuple((a + b) % m for a, b in zip(x, y))

    def sub(self, x: Elem, y: Elem) -> Elem:
        m = self.modulus
        return tuple((a - b) % m for a, b in zip(x, y))

    def neg(self, x: Elem) -> Elem:
        m = self.modulus
        return tuple((-a) % m for a in x)

    def mul(self, x: Elem, y: Elem) -> Elem:
        m = self.modulus
        if self.f == 1:
            return ((x[0] * y[0]) % m,)
        f = self.f
        prod = [0] * (2 * f - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        for k in range(2 * f - 2, f - 1, -1):
            top = prod[k] % m
            if top:
                for i, c in enumerate(self._tail):
                    prod[k - f + i] += top * c
        return tuple(c % m for c in prod[:f])

    def inv(self, x: Elem) -> Elem:
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x} is not a unit")
        if self.f == 1:
            return (pow(x[0], -1, self.modulus),)
        return Ring.pow(self, x, self._group_order - 1)

    def _vp(self, a: int) -> int:
        a %= self.modulus
        if a == 0:
            return self.precision
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def valuation(self, x: Elem) -> int:
        return min(self._vp(a) for a in x)

    def reduce(self, x: Elem, level: int) -> Elem:
        m = self.p ** level
        return tuple(a % m for a in x)

    def elements(self, level: int) -> Iterator[Elem]:
        return itertools.product(range(self.p ** level), repeat=self.f)

    def residue(self, x: Elem) -> Elem:
        return self.reduce(x, 1)


class LaurentRing(Ring):
    """F_q[[t]] / t^M, coefficients stored as galois integer labels of GF(q)."""

    def __init__(self, p: int, f: int, precision: int):
        self.p = p
        self.f = f
        self.q = p ** f
        self.precision = precision
        gf = galois.GF(p, f) if f > 1 else galois.GF(p)
        els = gf.elements
        self._add = (els[:, None] + els[None, :]).view(np.ndarray).tolist()
        self._mul = (els[:, None] * els[None, :]).view(np.ndarray).tolist()
        self._neg = (-els).view(np.ndarray).tolist()
        self.zero = (0,) * precision
        self.one = (1,) + (0,) * (precision - 1)
        self.unif = (0, 1) + (0,) * (precision - 2)
        self._group_order = (self.q - 1) * self.q ** (precision - 1)

    def from_int(self, k: int) -> Elem:
        return (k % self.p,) + (0,) * (self.precision - 1)

    def add(self, x: Elem, y: Elem) -> Elem:
        t = self._add
        return tuple(t[a][b] for a, b in zip(x, y))

    def neg(self, x: Elem) -> Elem:
        t = self._neg
        return tuple(t[a] for a in x)

    def sub(self, x: Elem, y: Elem) -> Elem:
        return self.add(x, self.neg(y))

    def mul(self, x: Elem, y: Elem) -> Elem:
        add, mul = self._add, self._mul
        n = self.precision
        out = [0] * n
        for i, a in enumerate(x):
            if a:
                for j in range(n - i):
                    b = y[j]
                    if b:
                        out[i + j] = add[out[i + j]][mul[a][b]]
        return tuple(out)

    def inv(self, x: Elem) -> Elem:
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x} is not a unit")
        return Ring.pow(self, x, self._group_order - 1)

    def valuation(self, x: Elem) -> int:
        for i, a in enumerate(x):
            if a:
                return i
        return self.precision

    def reduce(self, x: Elem, level: int) -> Elem:
        return tuple(x[:level]) + (0,) * (self.precision - level)

    def elements(self, level: int) -> Iterator[Elem]:
        pad = (0,) * (self.precision - level)
        for head in itertools.product(range(self.q), repeat=level):
            yield head + pad

    def residue(self, x: Elem) -> Elem:
        return self.reduce(x, 1)


class QuadraticExtRing(Ring):
    """
    base[delta] / (delta^2 - tr*delta - c).

    Unramified: c is a unit and the residue ring doubles. Ramified: c is
    the base uniformizer times the unit c0, and delta is the new
    uniformizer.
    """

    def __init__(self, base: Ring, ramified: bool, tr: Elem, c: Elem, c0: Optional[Elem] = None):
        self.base = base
        self.ramified = ramified
        self.tr = tr
        self.c = c
        self.c0 = c0 if c0 is not None else base.one
        self.q = base.q if ramified else base.q ** 2
        self.precision = 2 * base.precision if ramified else base.precision
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.zero)
        self.unif = (base.zero, base.one) if ramified else (base.unif, base.zero)
        self._trivial_tr = base.is_zero(tr)

    def from_int(self, k: int) -> Elem:
        return (self.base.from_int(k), self.base.zero)

    def embed(self, a: Elem) -> Elem:
        return (a, self.base.zero)

    def add(self, x: Elem, y: Elem) -> Elem:
        b = self.base
        return (b.add(x[0], y[0]), b.add(x[1], y[1]))

    def sub(self, x: Elem, y: Elem) -> Elem:
        b = self.base
        return (b.sub(x[0], y[0]), b.sub(x[1], y[1]))

    def neg(self, x: Elem) -> Elem:
        b = self.base
        return (b.neg(x[0]), b.neg(x[1]))

    def mul(self, x: Elem, y: Elem) -> Elem:
        b = self.base
        a1, b1 = x
        a2, b2 = y
        bb = b.mul(b1, b2)
        first = b.add(b.mul(a1, a2), b.mul(self.c, bb))
        second = b.add(b.mul(a1, b2), b.mul(a2, b1))
        if not self._trivial_tr:
            second = b.add(second, b.mul(self.tr, bb))
        return (first, second)

    def conj(self, x: Elem) -> Elem:
        b = self.base
        a1, b1 = x
        if self._trivial_tr:
            return (a1, b.neg(b1))
        return (b.add(a1, b.mul(b1, self.tr)), b.neg(b1))

    def norm(self, x: Elem) -> Elem:
        """x * conj(x), an element of the base ring."""
        b = self.base
        a1, b1 = x
        out = b.sub(b.mul(a1, a1), b.mul(self.c, b.mul(b1, b1)))
        if not self._trivial_tr:
            out = b.add(out, b.mul(self.tr, b.mul(a1, b1)))
        return out

    def inv(self, x: Elem) -> Elem:
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x} is not a unit")
        n_inv = self.base.inv(self.norm(x))
        c = self.conj(x)
        return (self.base.mul(c[0], n_inv), self.base.mul(c[1], n_inv))

    def valuation(self, x: Elem) -> int:
        va = self.base.valuation(x[0])
        vb = self.base.valuation(x[1])
        if self.ramified:
            return min(2 * va, 2 * vb + 1, self.precision)
        return min(va, vb)

    def _split(self, level: int) -> Tuple[int, int]:
        if self.ramified:
            return (level + 1) // 2, level // 2
        return level, level

    def reduce(self, x: Elem, level: int) -> Elem:
        la, lb = self._split(level)
        return (self.base.reduce(x[0], la), self.base.reduce(x[1], lb))

    def elements(self, level: int) -> Iterator[Elem]:
        la, lb = self._split(level)
        b_elements = list(self.base.elements(lb))
        for a in self.base.elements(la):
            for b in b_elements:
                yield (a, b)

    def residue(self, x: Elem) -> Elem:
        return self.reduce(x, 1)


Mult = Tuple[int, Elem]


class UnitGroupModel:
    """
    Cyclic decomposition of (O_L / p_L^N)^x with a full discrete-log table.

    The tame factor is generated by a unit whose residue has order q-1,
    raised to q^(N-1). The principal units are split greedily: at each step
    the element of largest order modulo the current subgroup is taken,
    provided its order does not drop modulo that subgroup, so the new cyclic
    factor meets the subgroup trivially.
    """

    def __init__(self, ring: Ring, level: int, p: int):
        self.ring = ring
        self.level = level
        q = ring.q
        self.group_order = (q - 1) * q ** (level - 1) if level > 0 else 1
        self.gens: List[Elem] = []
        self.orders: List[int] = []
        if level > 0:
            self._decompose(p)
        self.table: Dict[Elem, Tuple[int, ...]] = {}
        for exps in itertools.product(*(range(o) for o in self.orders)):
            x = ring.one
            for g, e in zip(self.gens, exps):
                if e:
                    x = ring.mul(x, ring.pow(g, e))
            self.table[ring.reduce(x, level)] = exps
        if len(self.table) != self.group_order:
            raise InvariantViolation(
                f"unit group at level {level}: table has {len(self.table)} entries, expected {self.group_order}"
            )

    def _key(self, x: Elem) -> Elem:
        return self.ring.reduce(x, self.level)

    def _decompose(self, p: int) -> None:
        ring, level, q = self.ring, self.level, self.ring.q
        one = self._key(ring.one)
        units = ring.units(level)
        if q > 2:
            residue_one = ring.reduce(ring.one, 1)
            for x in units:
                y, k = x, 1
                while ring.reduce(y, 1) != residue_one:
                    y = ring.mul(y, x)
                    k += 1
                if k == q - 1:
                    self.gens.append(self._key(ring.pow(x, q ** (level - 1))))
                    self.orders.append(q - 1)
                    break
        residue_one = ring.reduce(ring.one, 1)
        principal = [self._key(x) for x in units if ring.reduce(x, 1) == residue_one]
        subgroup = {one}
        target = q ** (level - 1)
        while len(subgroup) < target:
            best, best_order = None, 0
            for x in principal:
                if x in subgroup:
                    continue
                quotient_order = self._order_into(x, subgroup, p)
                if quotient_order > best_order and self._order_into(x, {one}, p) == quotient_order:
                    best, best_order = x, quotient_order
            if best is None:
                raise InvariantViolation("principal unit decomposition stalled")
            self.gens.append(best)
            self.orders.append(best_order)
            powers = [one]
            for _ in range(best_order - 1):
                powers.append(self._key(ring.mul(powers[-1], best)))
            subgroup = {self._key(ring.mul(h, g)) for h in subgroup for g in powers}

    def _order_into(self, x: Elem, subgroup, p: int) -> int:
        ring = self.ring
        order, y = 1, x
        while y not in subgroup:
            y = self._key(ring.pow(y, p))
            order *= p
        return order

    def dlog(self, u: Elem) -> Tuple[int, ...]:
        try:
            return self.table[self._key(u)]
        except KeyError:
            raise DlogError(f"{u} is not a unit at level {self.level}")

    def from_exponents(self, exps: Sequence[int]) -> Elem:
        x = self.ring.one
        for g, e in zip(self.gens, exps):
            x = self.ring.mul(x, self.ring.pow(g, e))
        return self._key(x)

    def elements(self) -> List[Elem]:
        return list(self.table.keys())

    @property
    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1


class LocalField:
    """A field in the tower: ring, level n_L = e(L/F) * depth, residue size."""

    def __init__(self, name: str, ring: Ring, e: int, depth: int, p: int):
        self.name = name
        self.ring = ring
        self.e = e
        self.level = e * depth
        self.q = ring.q
        self.p = p
        self._unit_groups: Dict[int, UnitGroupModel] = {}
        self.cache: Dict = {}
        # 缓存锁，sweep 的工作线程会并发读写 cache
        self.lock = threading.RLock()

    def __repr__(self) -> str:
        return f"LocalField({self.name}, q={self.q}, e={self.e}, level={self.level})"

    # --- multiplicative group ---

    @property
    def one(self) -> Mult:
        return (0, self.ring.one)

    @property
    def uniformizer(self) -> Mult:
        return (1, self.ring.one)

    def unit(self, u: Elem) -> Mult:
        return (0, u)

    def mul(self, x: Mult, y: Mult) -> Mult:
        return (x[0] + y[0], self.ring.mul(x[1], y[1]))

    def inv(self, x: Mult) -> Mult:
        return (-x[0], self.ring.inv(x[1]))

    def div(self, x: Mult, y: Mult) -> Mult:
        return self.mul(x, self.inv(y))

    def pow(self, x: Mult, k: int) -> Mult:
        return (k * x[0], self.ring.pow(x[1], k))

    def key(self, x: Mult, level: Optional[int] = None) -> Tuple[int, Elem]:
        return (x[0], self.ring.reduce(x[1], self.level if level is None else level))

    def equal(self, x: Mult, y: Mult, level: Optional[int] = None) -> bool:
        return self.key(x, level) == self.key(y, level)

    def is_one(self, x: Mult, level: Optional[int] = None) -> bool:
        return self.equal(x, self.one, level)

    def memo(self, key: Hashable, build: Callable[[], Any]) -> Any:
        """Cached ``build()``; when two threads race on a key the first stored value wins."""
        with self.lock:
            if key in self.cache:
                return self.cache[key]
        value = build()
        with self.lock:
            return self.cache.setdefault(key, value)

    # --- unit groups ---

    def unit_group(self, level: Optional[int] = None) -> UnitGroupModel:
        level = self.level if level is None else level
        with self.lock:
            model = self._unit_groups.get(level)
        if model is None:
            model = UnitGroupModel(self.ring, level, self.p)
            with self.lock:
                if level not in self._unit_groups:
                    logger.info(f"{self.name} 单位群 (层级 {level}) 分解: 阶 {model.orders}")
                    self._unit_groups[level] = model
                model = self._unit_groups[level]
        return model

    def units(self, level: Optional[int] = None) -> List[Elem]:
        return self.unit_group(level).elements()

    def elements_mod_square_unif(self, level: Optional[int] = None) -> List[Mult]:
        """Representatives of L^x / (U^level * uniformizer^(2Z)), valuation 0 first."""
        units = self.units(level)
        return [(v, u) for v in (0, 1) for u in units]


@dataclass
class Embedding:
    """
    An inclusion sub -> sup. The sub uniformizer maps to sup.uniformizer^e * eps.
    """

    sub: LocalField
    sup: LocalField
    e: int
    eps: Elem
    ring_map: Callable[[Elem], Elem]
    ring_pull: Callable[[Elem], Optional[Elem]]

    def apply(self, x: Mult) -> Mult:
        ring = self.sup.ring
        return (self.e * x[0], ring.mul(ring.pow(self.eps, x[0]), self.ring_map(x[1])))

    def apply_ring(self, u: Elem) -> Elem:
        return self.ring_map(u)

    def pullback(self, y: Mult) -> Mult:
        if y[0] % self.e:
            raise DepthError(f"valuation {y[0]} not divisible by e={self.e} for {self.sub.name}->{self.sup.name}")
        v = y[0] // self.e
        ring = self.sup.ring
        unit = ring.mul(y[1], ring.pow(self.eps, -v))
        pulled = self.ring_pull(unit)
        if pulled is None:
            raise DepthError(f"element does not descend from {self.sup.name} to {self.sub.name}")
        return (v, pulled)


@dataclass
class FieldAutomorphism:
    """A field automorphism g with g(uniformizer) = ratio * uniformizer."""

    name: str
    field: LocalField
    ring_map: Callable[[Elem], Elem]
    ratio: Elem

    def __call__(self, x: Mult) -> Mult:
        ring = self.field.ring
        return (x[0], ring.mul(ring.pow(self.ratio, x[0]), self.ring_map(x[1])))


@dataclass(frozen=True)
class FieldSpec:
    """
    The base field F (degree f over Q_p, or F_q((t)) when base_char == "p"),
    the quadratic extension E/F and the coefficient prime ell.

    ext is "unram", "ram" (E = F(sqrt(pi))) or "ram_nonsq" (E = F(sqrt(u*pi))
    with u a non-square unit).
    """

    p: int
    ell: int
    f: int = 1
    base_char: str = "zero"
    ext: str = "unram"
    depth: Optional[int] = None

    @property
    def ramified(self) -> bool:
        return self.ext != "unram"

    @property
    def q_F(self) -> int:
        return self.p ** self.f

    @property
    def q_E(self) -> int:
        return self.q_F if self.ramified else self.q_F ** 2

    @property
    def resolved_depth(self) -> int:
        if self.depth is not None:
            return self.depth
        return 4 if self.p == 2 else 1

    def validate(self) -> "FieldSpec":
        if not isprime(self.p):
            raise FieldSpecError(f"p={self.p} is not prime")
        if not isprime(self.ell) or self.ell == 2:
            raise FieldSpecError(f"ell={self.ell} must be an odd prime")
        if self.ell == self.p:
            raise FieldSpecError("ell must differ from p")
        if self.f < 1:
            raise FieldSpecError(f"f={self.f} must be positive")
        if self.base_char not in ("zero", "p"):
            raise FieldSpecError(f"base_char must be 'zero' or 'p', got {self.base_char!r}")
        if self.ext not in ("unram", "ram", "ram_nonsq"):
            raise FieldSpecError(f"unknown extension type {self.ext!r}")
        if self.resolved_depth < 1:
            raise FieldSpecError("depth must be at least 1")
        if self.p == 2:
            if self.base_char == "p":
                raise FieldSpecError("characteristic 2 base fields are excluded")
            if self.ext == "ram_nonsq":
                raise FieldSpecError("p=2 supports ext 'unram' and 'ram' only")
            if self.ext == "unram" and self.f % 2 == 0:
                raise FieldSpecError("p=2 unramified towers need odd f")
            e = 2 if self.ramified else 1
            v2 = e
            if e * self.resolved_depth < 2 * v2 + 1:
                raise FieldSpecError(
                    f"p=2 needs depth with e*depth >= 2*v_E(2)+1 = {2 * v2 + 1} to see all quadratic characters"
                )
        return self


def _first_nonsquare(ring: Ring) -> Elem:
    one = ring.reduce(ring.one, 1)
    half = (ring.q - 1) // 2
    for x in ring.units(1):
        if ring.reduce(ring.pow(x, half), 1) != one:
            return x
    raise FieldSpecError("residue field has no non-square")


def _layered(sub: LocalField, sup: LocalField) -> Embedding:
    ring = sup.ring
    base = sub.ring
    if ring.ramified:
        e, eps = 2, ring.embed(base.inv(ring.c0))
    else:
        e, eps = 1, ring.one

    def pull(x: Elem) -> Optional[Elem]:
        return x[0] if base.is_zero(x[1]) else None

    return Embedding(sub, sup, e, eps, ring.embed, pull)


def _compose(first: Embedding, second: Embedding) -> Embedding:
    ring = second.sup.ring
    eps = ring.mul(ring.pow(second.eps, first.e), second.ring_map(first.eps))

    def pull(x: Elem) -> Optional[Elem]:
        y = second.ring_pull(x)
        return None if y is None else first.ring_pull(y)

    return Embedding(first.sub, second.sup, first.e * second.e, eps,
                     lambda u: second.ring_map(first.ring_map(u)), pull)


class Tower:
    """
    F, the quadratic extension E and, for p odd, the biquadratic closure K
    with its two other quadratic subfields K0 and K1.

    K is generated over E by beta. For E unramified, beta^2 = pi_F, so
    K0 = F(sqrt(pi)) and K1 = F(sqrt(u*pi)). For E ramified, beta^2 = u,
    so K0 = F(sqrt(u)) and K1 = F(sqrt(u*d*pi)). Galois labels on K are
    a + 2b for rho^a tau0^b. rho generates Gal(K/E), tau0 generates
    Gal(K/K0) and tau1 = rho*tau0 generates Gal(K/K1).
    """

    SUBGROUPS = {"K": (0,), "E": (0, 1), "K0": (0, 2), "K1": (0, 3), "F": (0, 1, 2, 3)}

    def __init__(self, spec: FieldSpec):
        spec.validate()
        self.spec = spec
        self.p = spec.p
        self.depth = spec.resolved_depth
        precision = self.depth + 2
        if spec.base_char == "zero":
            base = PadicRing(spec.p, spec.f, precision)
        else:
            base = LaurentRing(spec.p, spec.f, precision)
        self.F = LocalField("F", base, 1, self.depth, spec.p)
        if spec.p == 2:
            self.u = base.from_int(5)
        else:
            self.u = _first_nonsquare(base)
        if spec.ext == "unram":
            if spec.p == 2:
                minus_one = base.from_int(-1)
                ering = QuadraticExtRing(base, False, tr=minus_one, c=minus_one)
            else:
                ering = QuadraticExtRing(base, False, tr=base.zero, c=self.u)
            self.d = base.one
        else:
            self.d = base.one if spec.ext == "ram" else self.u
            ering = QuadraticExtRing(base, True, tr=base.zero, c=base.mul(base.unif, self.d), c0=self.d)
        self.E = LocalField("E", ering, 2 if spec.ramified else 1, self.depth, spec.p)
        sigma_ratio = ering.from_int(-1) if spec.ramified else ering.one
        self.sigma = FieldAutomorphism("sigma", self.E, ering.conj, sigma_ratio)
        self.fields: Dict[str, LocalField] = {"F": self.F, "E": self.E}
        self.embeddings: Dict[Tuple[str, str], Embedding] = {("F", "E"): _layered(self.F, self.E)}
        self.K: Optional[LocalField] = None
        self.K0: Optional[LocalField] = None
        self.K1: Optional[LocalField] = None
        self.galois_K: Dict[int, FieldAutomorphism] = {}
        if spec.p != 2:
            self._build_biquadratic()
        logger.info(
            f"域塔构建完成: p={spec.p}, f={spec.f}, ext={spec.ext}, depth={self.depth}, "
            f"q_F={spec.q_F}, q_E={spec.q_E}, biquadratic={'yes' if self.K else 'no'}"
        )

    # --- construction ---

    def _build_biquadratic(self) -> None:
        base, ering = self.F.ring, self.E.ring
        u, d = self.u, self.d
        if not self.spec.ramified:
            kring = QuadraticExtRing(ering, True, tr=ering.zero, c=ering.unif, c0=ering.one)
            k0ring = QuadraticExtRing(base, True, tr=base.zero, c=base.unif, c0=base.one)
            k1ring = QuadraticExtRing(base, True, tr=base.zero, c=base.mul(base.unif, u), c0=u)
            k0_e, k0_eps = 1, kring.one
            k1_eps = ((base.zero, base.one), ering.zero)
            ratios = (-1, 1)
        else:
            kring = QuadraticExtRing(ering, False, tr=ering.zero, c=ering.embed(u))
            k0ring = QuadraticExtRing(base, False, tr=base.zero, c=u)
            du = base.mul(d, u)
            k1ring = QuadraticExtRing(base, True, tr=base.zero, c=base.mul(base.unif, du), c0=du)
            k0_e, k0_eps = 2, (ering.embed(base.inv(d)), ering.zero)
            k1_eps = (ering.zero, ering.one)
            ratios = (1, -1)
        depth, p = self.depth, self.p
        self.K = LocalField("K", kring, 2, depth, p)
        self.K0 = LocalField("K0", k0ring, 2 if k0ring.ramified else 1, depth, p)
        self.K1 = LocalField("K1", k1ring, 2, depth, p)
        self.fields.update({"K": self.K, "K0": self.K0, "K1": self.K1})

        def to_k0(x: Elem) -> Elem:
            return (ering.embed(x[0]), ering.embed(x[1]))

        def from_k0(y: Elem) -> Optional[Elem]:
            (a, b), (c, e) = y
            if base.is_zero(b) and base.is_zero(e):
                return (a, c)
            return None

        def to_k1(x: Elem) -> Elem:
            return (ering.embed(x[0]), (base.zero, x[1]))

        def from_k1(y: Elem) -> Optional[Elem]:
            (a, b), (c, e) = y
            if base.is_zero(b) and base.is_zero(c):
                return (a, e)
            return None

        self.embeddings[("E", "K")] = _layered(self.E, self.K)
        self.embeddings[("F", "K0")] = _layered(self.F, self.K0)
        self.embeddings[("F", "K1")] = _layered(self.F, self.K1)
        self.embeddings[("K0", "K")] = Embedding(self.K0, self.K, k0_e, k0_eps, to_k0, from_k0)
        self.embeddings[("K1", "K")] = Embedding(self.K1, self.K, 1, k1_eps, to_k1, from_k1)
        self.embeddings[("F", "K")] = _compose(self.embeddings[("F", "E")], self.embeddings[("E", "K")])

        sig = ering.conj
        rho_ratio, tau0_ratio = (kring.from_int(r) for r in ratios)
        self.galois_K = {
            0: FieldAutomorphism("id", self.K, lambda x: x, kring.one),
            1: FieldAutomorphism("rho", self.K, kring.conj, rho_ratio),
            2: FieldAutomorphism("tau0", self.K, lambda x: (sig(x[0]), sig(x[1])), tau0_ratio),
            3: FieldAutomorphism(
                "tau1", self.K, lambda x: (sig(x[0]), ering.neg(sig(x[1]))),
                kring.mul(rho_ratio, tau0_ratio),
            ),
        }

    # --- maps ---

    def field(self, name: str) -> LocalField:
        try:
            return self.fields[name]
        except KeyError:
            raise UnsupportedTower(f"field {name} is not part of this tower")

    def require_biquadratic(self) -> LocalField:
        if self.K is None:
            raise UnsupportedTower("biquadratic closure is only modeled for p odd")
        return self.K

    def embed(self, x: Mult, sub: str, sup: str) -> Mult:
        if sub == sup:
            return x
        return self.embeddings[(sub, sup)].apply(x)

    def pullback(self, y: Mult, sub: str, sup: str) -> Mult:
        if sub == sup:
            return y
        return self.embeddings[(sub, sup)].pullback(y)

    def _layered_norm(self, x: Mult, sup: LocalField, sub: LocalField) -> Mult:
        ring = sup.ring
        base = sub.ring
        if ring.ramified:
            n_unif = (1, base.neg(ring.c0))
        else:
            n_unif = (2, base.one)
        v = x[0]
        return (n_unif[0] * v, base.mul(base.pow(n_unif[1], v), ring.norm(x[1])))

    def norm(self, x: Mult, sup: str, sub: str) -> Mult:
        """N_{sup/sub}(x)."""
        if sup == sub:
            return x
        if (sub, sup) in (("F", "E"), ("E", "K"), ("F", "K0"), ("F", "K1")):
            return self._layered_norm(x, self.fields[sup], self.fields[sub])
        if sup == "K" and sub in ("K0", "K1"):
            g = self.galois_K[2 if sub == "K0" else 3]
            return self.pullback(self.K.mul(x, g(x)), sub, "K")
        if sup == "K" and sub == "F":
            return self.norm(self.norm(x, "K", "E"), "E", "F")
        raise UnsupportedTower(f"no norm map {sup} -> {sub}")


# --- operations on the tower ---

def _shape(x):
    if isinstance(x, tuple) and x and isinstance(x[0], tuple):
        return (len(x), _shape(x[0]))
    return len(x)


def _require_field(field: LocalField, x: Mult) -> None:
    if _shape(x[1]) != _shape(field.ring.one):
        raise WrongField(f"element {x} does not belong to {field.name}")


def sigma(tower: Tower, x: Mult) -> Mult:
    """The nontrivial automorphism of E/F."""
    _require_field(tower.E, x)
    return tower.sigma(x)


def norm(tower: Tower, x: Mult) -> Mult:
    """N_{E/F}(x) = x * sigma(x), in F coordinates."""
    _require_field(tower.E, x)
    return tower.norm(x, "E", "F")


def unit_group(tower: Tower, tag: str, level: Optional[int] = None) -> UnitGroupModel:
    return tower.field(tag).unit_group(level)


def _closure(gens: Sequence, mul: Callable, identity) -> set:
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                y = mul(h, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def norm_index(tower: Tower) -> int:
    """[F^x : N(E^x)] computed in F^x / (U_F^n * pi^(2Z))."""
    F, E = tower.F, tower.E
    n = F.level
    ring = F.ring

    def reduce(x: Mult) -> Tuple[int, Elem]:
        return (x[0] % 2, ring.reduce(x[1], n))

    def mul(a, b):
        return reduce((a[0] + b[0], ring.mul(a[1], b[1])))

    gens = [E.uniformizer] + [E.unit(g) for g in E.unit_group().gens]
    images = [reduce(tower.norm(g, "E", "F")) for g in gens]
    subgroup = _closure(images, mul, reduce(F.one))
    total = 2 * F.unit_group().group_order
    if total % len(subgroup):
        raise InvariantViolation(f"norm subgroup of size {len(subgroup)} does not divide {total}")
    return total // len(subgroup)


def norm_one_units(tower: Tower) -> List[Elem]:
    """All units of E modulo U_E^n with norm 1 modulo U_F^n."""
    F, E = tower.F, tower.E
    one = F.key(F.one)
    return [u for u in E.units() if F.key(tower.norm(E.unit(u), "E", "F")) == one]


def norm_one_subgroup(tower: Tower) -> List[Elem]:
    """Generators of E^1 modulo U_E^n, chosen greedily in enumeration order."""
    return tower.E.memo("norm_one", lambda: _norm_one_generators(tower))


def _norm_one_generators(tower: Tower) -> List[Elem]:
    E = tower.E
    ring, level = E.ring, E.level
    members = norm_one_units(tower)
    gens: List[Elem] = []
    one = ring.reduce(ring.one, level)
    span = {one}
    mul = lambda a, b: ring.reduce(ring.mul(a, b), level)
    for x in members:
        if x not in span:
            gens.append(x)
            span = _closure(gens, mul, one)
    if len(span) != len(members):
        raise InvariantViolation("norm-one units are not closed under multiplication")
    return gens


def hilbert90_image(tower: Tower) -> set:
    """{sigma(y)/y} modulo U_E^n."""
    E = tower.E
    out = set()
    for y in E.elements_mod_square_unif():
        z = E.div(tower.sigma(y), y)
        out.add(E.ring.reduce(z[1], E.level))
    return out


def unit_power_level(field: LocalField, x: Elem, i: int) -> int:
    """
    The level j with x^p in U^j, capped at the field level.

    For x in U^i with i >= 1, x^p lies in U^(i+1).
    """
    ring = field.ring
    if i < 1 or not ring.is_unit(x):
        raise NotPrincipalUnit(f"level {i} is not a principal-unit level")
    if min(ring.valuation(ring.sub(x, ring.one)), field.level) < min(i, field.level):
        raise NotPrincipalUnit(f"{x} is not in U^{i}")
    y = ring.pow(x, field.p)
    j = min(ring.valuation(ring.sub(y, ring.one)), field.level)
    if j < min(i + 1, field.level):
        raise InvariantViolation(f"x^p has level {j} < {i + 1}")
    return j


def uniformizer_power_witness(tower: Tower, name: str, level: int) -> Tuple[int, int]:
    """Smallest (m, s) with pi_L^m in pi_F^s * U_L^level."""
    L = tower.field(name)
    if level > L.level:
        raise DepthError(f"witness not found at this depth: level {level} exceeds {L.level}")
    if name == "F":
        return 1, 1
    emb = tower.embeddings[("F", name)]
    ring = L.ring
    target = ring.reduce(ring.one, level)
    bound = L.unit_group(max(level, 1)).group_order
    y = emb.eps
    for s in range(1, bound + 1):
        if ring.reduce(y, level) == target:
            return emb.e * s, s
        y = ring.mul(y, emb.eps)
    raise DepthError(f"witness not found at this depth for {name} at level {level}")
