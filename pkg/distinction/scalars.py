#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Exact arithmetic in an algebraic closure of F_ell.

Two encodings live side by side. ``RootOfUnity`` stores a value of a smooth
character as a fraction mod 1 whose denominator is prime to ell; it never
touches a concrete field. ``FiniteField`` wraps a ``galois`` field GF(ell^d)
and is where matrices get built and linear systems get solved.
"""

import enum
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Sequence, Tuple

import galois
import numpy as np
from sympy.ntheory import n_order

logger = logging.getLogger(__name__)

# Largest field for which a full discrete-log table is built.
DLOG_TABLE_LIMIT = 2 ** 20


# --- 自定义异常 ---
class ComputationError(Exception):
    """所有计算错误的基类"""
    pass


class OrderNotEmbeddable(ComputationError):
    """单位根的阶不整除 ell^d - 1"""
    pass


class ZeroElement(ComputationError):
    """对零元素取离散对数"""
    pass


class EllDividesQ(ComputationError):
    """ell 整除 q"""
    pass


class WrongField(ComputationError):
    """元素不属于所要求的域"""
    pass


class TooLarge(ComputationError):
    """有限域超出离散对数表上限"""
    pass


class InvariantViolation(ComputationError):
    """计算结果违反了应当成立的定理或不变量"""
    pass


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """A root of unity of order prime to ell, written as num/den mod 1."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError(f"denominator must be positive, got {self.den}")
        num = self.num % self.den
        g = math.gcd(num, self.den)
        if num == 0:
            num, den = 0, 1
        else:
            num, den = num // g, self.den // g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def one(cls) -> "RootOfUnity":
        return cls(0, 1)

    @classmethod
    def parse(cls, text: str) -> "RootOfUnity":
        """Parse ``"k/m"`` or ``"k"``."""
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return cls(int(num), int(den))
        return cls(int(text), 1)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return ru_mul(self, other)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.num * k, self.den)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(-self.num, self.den)

    @property
    def order(self) -> int:
        return self.den

    def is_one(self) -> bool:
        return self.num == 0

    def coprime_to(self, ell: int) -> bool:
        return math.gcd(self.den, ell) == 1

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


MINUS_ONE = RootOfUnity(1, 2)


def ru_mul(a: RootOfUnity, b: RootOfUnity) -> RootOfUnity:
    """Multiply two roots of unity by adding their exponents mod 1."""
    den = a.den * b.den // math.gcd(a.den, b.den)
    return RootOfUnity(a.num * (den // a.den) + b.num * (den // b.den), den)


def ell_prime_part(n: int, ell: int) -> int:
    """Largest divisor of n prime to ell."""
    n = abs(n)
    if n == 0:
        return 0
    while n % ell == 0:
        n //= ell
    return n


def ell_part(n: int, ell: int) -> int:
    """Largest power of ell dividing n."""
    return abs(n) // ell_prime_part(n, ell)


def minimal_degree(ell: int, exponent: int) -> int:
    """Smallest d with ``exponent | ell**d - 1``."""
    exponent = ell_prime_part(exponent, ell)
    if exponent <= 2:
        return 1
    return int(n_order(ell, exponent))


class CongruenceClass(enum.Enum):
    ONE_MOD = "OneMod"
    MINUS_ONE_MOD = "MinusOneMod"
    BANAL = "Banal"

    def __str__(self) -> str:
        return self.value


def q_mod_ell_class(q: int, ell: int) -> CongruenceClass:
    """Classify q by its residue mod ell: 1, -1 or neither."""
    if q % ell == 0:
        raise EllDividesQ(f"ell={ell} divides q={q}")
    if q % ell == 1:
        return CongruenceClass.ONE_MOD
    if q % ell == ell - 1:
        return CongruenceClass.MINUS_ONE_MOD
    return CongruenceClass.BANAL


Matrix = galois.FieldArray


class FiniteField:
    """
    The field GF(ell^d) with a fixed multiplicative generator.

    galois builds extension fields from Conway polynomials, so the primitive
    element x of GF(ell^d) maps to the primitive element of GF(ell^d') under
    the norm whenever d' | d. Embeddings of roots of unity therefore commute
    with the field tower.
    """

    def __init__(self, ell: int, degree: int):
        if ell ** degree > DLOG_TABLE_LIMIT:
            raise TooLarge(f"GF({ell}^{degree}) exceeds the discrete-log table limit")
        self.ell = ell
        self.degree = degree
        self.size = ell ** degree
        self.unit_order = self.size - 1
        self.GF = galois.GF(ell, degree) if degree > 1 else galois.GF(ell)
        self.generator = self.GF.primitive_element
        powers = self.generator ** np.arange(self.unit_order)
        self._powers = powers
        self._log = np.full(self.size, -1, dtype=np.int64)
        self._log[powers.view(np.ndarray).astype(np.int64)] = np.arange(self.unit_order)
        self.one = self.GF(1)
        self.zero = self.GF(0)
        logger.info(f"标量域 GF({ell}^{degree}) 构建完成, 生成元 {int(self.generator)}")

    def __repr__(self) -> str:
        return f"FiniteField(ell={self.ell}, degree={self.degree})"

    def embed_root(self, z: RootOfUnity):
        """Image of z in GF(ell^d): generator ** (num * (ell^d - 1) / den)."""
        if self.unit_order % z.den != 0:
            raise OrderNotEmbeddable(f"{z} does not embed in GF({self.ell}^{self.degree})")
        return self._powers[(z.num * (self.unit_order // z.den)) % self.unit_order]

    def dlog(self, x) -> RootOfUnity:
        """Inverse of embed_root."""
        index = int(x)
        if index == 0:
            raise ZeroElement("discrete log of zero")
        return RootOfUnity(int(self._log[index]), self.unit_order)

    def scalar(self, value: int):
        return self.GF(value % self.ell)

    # --- matrices ---

    def identity(self) -> Matrix:
        return self.GF.Identity(2)

    def zeros(self) -> Matrix:
        return self.GF.Zeros((2, 2))

    def matrix(self, rows: Sequence[Sequence[int]]) -> Matrix:
        return self.GF([[v % self.ell for v in row] for row in rows])

    def diagonal(self, a, b) -> Matrix:
        m = self.zeros()
        m[0, 0] = a
        m[1, 1] = b
        return m

    def elementary(self, i: int, j: int) -> Matrix:
        m = self.zeros()
        m[i, j] = self.one
        return m

    def basis(self) -> List[Matrix]:
        return [self.elementary(i, j) for i in range(2) for j in range(2)]

    @staticmethod
    def det(m: Matrix):
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]

    @staticmethod
    def trace(m: Matrix):
        return m[0, 0] + m[1, 1]

    @staticmethod
    def is_zero(m: Matrix) -> bool:
        return not np.any(m.view(np.ndarray))

    @staticmethod
    def equal(a: Matrix, b: Matrix) -> bool:
        return bool(np.array_equal(a.view(np.ndarray), b.view(np.ndarray)))

    @staticmethod
    def key(m: Matrix) -> Tuple[int, ...]:
        return tuple(int(v) for v in m.view(np.ndarray).flatten())

    def solve_matrix_conditions(self, conditions: Iterable[Callable[[Matrix], Matrix]]) -> List[Matrix]:
        """
        Basis of the 2x2 matrices X killed by every linear map in ``conditions``.

        Each condition is evaluated on the four elementary matrices to build
        the coefficient matrix of the system; the solution space is its null
        space over GF(ell^d).
        """
        basis = self.basis()
        blocks = []
        for cond in conditions:
            columns = [cond(b).view(np.ndarray).flatten() for b in basis]
            blocks.append(np.stack(columns, axis=1))
        if not blocks:
            return basis
        system = self.GF(np.vstack(blocks).astype(np.int64))
        kernel = system.null_space()
        return [self.GF(row.view(np.ndarray).reshape(2, 2)) for row in kernel]

    def has_invertible(self, span: Sequence[Matrix]) -> bool:
        """
        Whether some linear combination of ``span`` is invertible over the
        algebraic closure, i.e. det restricted to the span is not the zero form.

        det is a quadratic form, so it is zero exactly when it vanishes on
        every basis vector and its polar form vanishes on every basis pair.
        This holds in any dimension.
        """
        dets = [self.det(m) for m in span]
        if any(int(d) != 0 for d in dets):
            return True
        for i in range(len(span)):
            for j in range(i + 1, len(span)):
                if int(self.det(span[i] + span[j]) - dets[i] - dets[j]) != 0:
                    return True
        return False
