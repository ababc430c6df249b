"""
场单项式模块
归一化单项式 φ^p/p! · (∂φ)^k/k! 及其代数

主要功能：
1. 归一化单项式的乘积（二项式系数）与去腿
2. 工程量纲与名称解析
3. 拉格朗日量基 {1, φ, φ², (∂φ)², φ³, φ⁴}

作者: Assistant
创建时间: 2024年
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

logger = logging.getLogger("pqft.functionals.monomial")

PLAIN = "plain"
DERIV = "deriv"
LEG_TYPES = (PLAIN, DERIV)


@dataclass(frozen=True, order=True)
class FieldMonomial:
    """
    归一化场单项式

    phi 为无导数场的个数，deriv 为带一阶导数的场的个数（deriv ≤ 2，
    deriv=2 时两个导数相互缩并，即 (∂φ)² ≐ ∂_νφ∂^νφ/2）
    """
    phi: int = 0
    deriv: int = 0

    def __post_init__(self):
        if self.phi < 0 or not 0 <= self.deriv <= 2:
            raise ValueError(f"无效的单项式: phi={self.phi}, deriv={self.deriv}")

    @property
    def degree(self) -> int:
        return self.phi + self.deriv

    def is_constant(self) -> bool:
        return self.degree == 0

    def engineering_dimension(self, dim: int) -> Fraction:
        """Σ((d−2)/2 + |α|)"""
        return Fraction(self.degree * (dim - 2), 2) + self.deriv

    def legs(self, leg_type: str) -> int:
        return self.phi if leg_type == PLAIN else self.deriv

    def remove_leg(self, leg_type: str) -> Optional["FieldMonomial"]:
        """
        对场求一次泛函导数，归一化下因子恒为 1

        Returns:
            Optional[FieldMonomial]: 剩余单项式，没有对应类型的腿时为 None
        """
        if leg_type == PLAIN:
            return FieldMonomial(self.phi - 1, self.deriv) if self.phi else None
        if leg_type == DERIV:
            return FieldMonomial(self.phi, self.deriv - 1) if self.deriv else None
        raise ValueError(f"不支持的腿类型: {leg_type}")

    def product(self, other: "FieldMonomial") -> Tuple[Fraction, "FieldMonomial"]:
        """
        同点乘积 φᵖ/p!·φ^q/q! = C(p+q,p)·φ^{p+q}/(p+q)!，导数部分同理

        Raises:
            ValueError: 导数场超过两个（超出基）
        """
        deriv = self.deriv + other.deriv
        if deriv > 2:
            raise ValueError(f"乘积超出单项式基: {self.name} · {other.name}")
        factor = math.comb(self.phi + other.phi, self.phi) * math.comb(deriv, self.deriv)
        return Fraction(factor), FieldMonomial(self.phi + other.phi, deriv)

    @property
    def name(self) -> str:
        if self.is_constant():
            return "1"
        parts = []
        if self.phi:
            parts.append("phi" if self.phi == 1 else f"phi{self.phi}")
        if self.deriv:
            parts.append("dphi" if self.deriv == 1 else "dphi2")
        return "_".join(parts)

    @property
    def display(self) -> str:
        """人类可读形式"""
        if self.is_constant():
            return "1"
        parts = []
        if self.phi:
            parts.append("φ" if self.phi == 1 else f"φ^{self.phi}")
        if self.deriv == 1:
            parts.append("∂φ")
        elif self.deriv == 2:
            parts.append("(∂φ)²")
        return "·".join(parts)

    @classmethod
    def parse(cls, name: str) -> "FieldMonomial":
        """
        解析 name 的输出

        Raises:
            ValueError: 不支持的单项式名称
        """
        if name == "1":
            return cls()
        match = re.fullmatch(r"(?:phi(\d*))?(?:_?(dphi2|dphi))?", name)
        if not match or not name:
            raise ValueError(f"不支持的单项式名称: {name}")
        phi_text, deriv_text = match.groups()
        phi = 0
        if name.startswith("phi"):
            phi = int(phi_text) if phi_text else 1
        deriv = {None: 0, "dphi": 1, "dphi2": 2}[deriv_text]
        return cls(phi, deriv)

    def __str__(self) -> str:
        return self.name


ONE = FieldMonomial(0, 0)
PHI = FieldMonomial(1, 0)
PHI2 = FieldMonomial(2, 0)
DPHI2 = FieldMonomial(0, 2)
PHI3 = FieldMonomial(3, 0)
PHI4 = FieldMonomial(4, 0)

LAGRANGIAN_BASIS: Tuple[FieldMonomial, ...] = (ONE, PHI, PHI2, DPHI2, PHI3, PHI4)


@dataclass(frozen=True, order=True)
class BasisKey:
    """拉格朗日量类的基元素: (m²)^mass · 单项式"""
    monomial: FieldMonomial
    mass: int = 0

    @property
    def name(self) -> str:
        if not self.mass:
            return self.monomial.name
        prefix = "m2" if self.mass == 1 else f"m2^{self.mass}"
        return f"{prefix}*{self.monomial.name}"

    @classmethod
    def parse(cls, name: str) -> "BasisKey":
        if "*" not in name:
            return cls(FieldMonomial.parse(name))
        prefix, _, rest = name.partition("*")
        mass = 1 if prefix == "m2" else int(prefix.split("^")[1])
        return cls(FieldMonomial.parse(rest), mass)

    def __str__(self) -> str:
        return self.name
