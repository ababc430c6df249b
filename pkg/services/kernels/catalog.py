"""
核目录模块
定义传播子与分布核的标签、元数据和标签代数

主要功能：
1. KernelTag: 核种类、维数、号差、质量阶、μ 依赖、支集消失规则
2. KernelExpr: 带精确前因子的核乘积，标度度数可加
3. 标签代数: 交换端点、推迟/超前基展开、支集剪枝
4. 无质量 Feynman 传播子 D_F 的目录构造

作者: Assistant
创建时间: 2024年
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from services.common.errors import KernelDimensionError
from services.exact import Atom, ExactScalar

logger = logging.getLogger("pqft.kernels.catalog")


class KernelKind(Enum):
    """核种类"""
    DELTA_RET = "DeltaRet"
    DELTA_ADV = "DeltaAdv"
    DELTA_COMM = "DeltaComm"
    DELTA_DIRAC = "DeltaDirac"
    HADAMARD = "Hadamard"
    FEYNMAN_H = "FeynmanH"
    POWER_X2_INV = "PowerX2inv"
    LOG_OVER_X2_POW = "LogOverX2pow"
    MASS_DERIV_H = "MassDerivH"
    SMOOTH_V = "SmoothV"
    REGULARIZED = "Regularized"
    REGULARIZED_DOT = "RegularizedDot"
    DELTA_DISTRIB = "DeltaDistrib"


class SupportRule(Enum):
    """支集消失规则"""
    NONE = "none"
    PAST = "x_in_past_of_y"          # 仅当 x ≼ y 时非零
    FUTURE = "x_in_future_of_y"      # 仅当 x ≽ y 时非零
    LIGHTCONE = "causal"             # 类空分离处为零
    COINCIDENCE = "coincidence"      # 支撑在对角线上


class Orientation(Enum):
    """交换两端点时的行为"""
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"
    RET_ADV = "ret_adv"


_SUPPORT_RULES = {
    KernelKind.DELTA_ADV: SupportRule.PAST,
    KernelKind.DELTA_RET: SupportRule.FUTURE,
    KernelKind.DELTA_COMM: SupportRule.LIGHTCONE,
    KernelKind.DELTA_DIRAC: SupportRule.LIGHTCONE,
    KernelKind.DELTA_DISTRIB: SupportRule.COINCIDENCE,
}

_ORIENTATION = {
    KernelKind.DELTA_COMM: Orientation.ANTISYMMETRIC,
    KernelKind.DELTA_RET: Orientation.RET_ADV,
    KernelKind.DELTA_ADV: Orientation.RET_ADV,
}


@dataclass(frozen=True)
class KernelTag:
    """
    核标签

    power 对 PowerX2inv / LogOverX2pow 表示 (x²−iε) 的负幂 p，
    对 MassDerivH 表示 m² 导数阶；kappa 为对数核的尺度原子；
    Regularized 使用 family/cutoff，subtract_hadamard 为真时表示 k_Λ = h_Λ − H。
    """
    kind: KernelKind
    dim: int = 4
    sig: int = 3
    power: int = 0
    kappa: Optional[Atom] = None
    mass_order: int = 0
    mu_dep: bool = False
    family: str = ""
    cutoff: Optional[Fraction] = None
    subtract_hadamard: bool = True
    derivative: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.dim < 2:
            raise KernelDimensionError(f"维数必须 ≥ 2: {self.dim}", dims=[self.dim])
        if not 0 <= self.sig <= self.dim:
            raise KernelDimensionError(f"号差超出范围: s={self.sig}, d={self.dim}",
                                       dims=[self.dim, self.sig])

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (self.kind.value, self.dim, self.sig, self.power,
                self.kappa.value if self.kappa else "", self.mass_order, self.family,
                self.cutoff if self.cutoff is not None else Fraction(-1),
                self.subtract_hadamard, self.derivative)

    # ------------------------------------------------------------------
    # 元数据
    # ------------------------------------------------------------------

    @property
    def support_rule(self) -> SupportRule:
        return _SUPPORT_RULES.get(self.kind, SupportRule.NONE)

    @property
    def orientation(self) -> Orientation:
        return _ORIENTATION.get(self.kind, Orientation.SYMMETRIC)

    @property
    def log_power(self) -> int:
        if self.kind is KernelKind.LOG_OVER_X2_POW:
            return 1
        if self.kind in (KernelKind.HADAMARD, KernelKind.FEYNMAN_H) and self.dim % 2 == 0:
            return 1
        return 0

    def scaling_degree(self) -> Fraction:
        """
        标度度数

        传播子类核为 d−2，(x²−iε)^{-p} 为 2p，δ 的 α 阶导数为 d+|α|，光滑核为 0
        """
        kind = self.kind
        if kind in (KernelKind.DELTA_RET, KernelKind.DELTA_ADV, KernelKind.DELTA_COMM,
                    KernelKind.DELTA_DIRAC,
                    KernelKind.HADAMARD, KernelKind.FEYNMAN_H):
            return Fraction(self.dim - 2)
        if kind in (KernelKind.POWER_X2_INV, KernelKind.LOG_OVER_X2_POW):
            return Fraction(2 * self.power)
        if kind is KernelKind.MASS_DERIV_H:
            return Fraction(max(self.dim - 2 - 2 * self.power, 0))
        if kind in (KernelKind.SMOOTH_V, KernelKind.REGULARIZED, KernelKind.REGULARIZED_DOT):
            return Fraction(0)
        if kind is KernelKind.DELTA_DISTRIB:
            return Fraction(self.dim + sum(self.derivative))
        raise ValueError(f"未定义标度度数: {kind}")

    def vanishes_identically(self) -> bool:
        """h_0 = 0：不减去 H 的零截断正则核恒为零"""
        return (self.kind is KernelKind.REGULARIZED and not self.subtract_hadamard
                and self.cutoff == 0)

    def swapped(self) -> Tuple[int, "KernelTag"]:
        """
        交换两端点后的 (符号, 标签)

        Δ 反对称，Δ_A(y,x) = Δ_R(x,y)，其余对称
        """
        if self.orientation is Orientation.ANTISYMMETRIC:
            return -1, self
        if self.orientation is Orientation.RET_ADV:
            other = KernelKind.DELTA_ADV if self.kind is KernelKind.DELTA_RET else KernelKind.DELTA_RET
            return 1, replace(self, kind=other)
        return 1, self

    def descriptor(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "kind": self.kind.value,
            "dim": self.dim,
            "sig": self.sig,
            "massOrder": self.mass_order,
            "scalingDegree": str(self.scaling_degree()),
        }
        if self.power:
            data["power"] = self.power
        if self.kappa:
            data["kappa"] = self.kappa.value
        if self.kind in (KernelKind.REGULARIZED, KernelKind.REGULARIZED_DOT):
            data["family"] = self.family
            data["cutoff"] = str(self.cutoff)
            data["subtractHadamard"] = self.subtract_hadamard
        if self.derivative:
            data["derivative"] = list(self.derivative)
        return data

    def short(self) -> str:
        """调试输出用的短名称"""
        name = self.kind.value
        if self.kind in (KernelKind.POWER_X2_INV, KernelKind.LOG_OVER_X2_POW, KernelKind.MASS_DERIV_H):
            name += f"({self.power})"
        if self.kind in (KernelKind.REGULARIZED, KernelKind.REGULARIZED_DOT):
            name += f"[{self.family},{self.cutoff}{'' if self.subtract_hadamard else ',h'}]"
        return name


def retarded_advanced_expansion(tag: KernelTag) -> List[Tuple[ExactScalar, KernelTag]]:
    """
    将 Δ、Δ_D 与 H_F 展开到推迟/超前基

    Δ = Δ_R − Δ_A，Δ_D = (Δ_R + Δ_A)/2，H_F = iΔ_D + H
    """
    ret = replace(tag, kind=KernelKind.DELTA_RET)
    adv = replace(tag, kind=KernelKind.DELTA_ADV)
    half = ExactScalar.rational(Fraction(1, 2))
    if tag.kind is KernelKind.DELTA_COMM:
        return [(ExactScalar.one(), ret), (-ExactScalar.one(), adv)]
    if tag.kind is KernelKind.DELTA_DIRAC:
        return [(half, ret), (half, adv)]
    if tag.kind is KernelKind.FEYNMAN_H:
        hadamard = replace(tag, kind=KernelKind.HADAMARD)
        return [(half * ExactScalar.i(), ret), (half * ExactScalar.i(), adv),
                (ExactScalar.one(), hadamard)]
    return [(ExactScalar.one(), tag)]


@dataclass(frozen=True)
class KernelExpr:
    """核表达式：前因子 × 标签乘积，所有因子维数与号差一致"""
    prefactor: ExactScalar
    factors: Tuple[KernelTag, ...]
    slots: Tuple[str, ...] = ("x",)

    def __post_init__(self):
        dims = {(tag.dim, tag.sig) for tag in self.factors}
        if len(dims) > 1:
            raise KernelDimensionError(f"核乘积混合了维数/号差: {sorted(dims)}", dims=sorted(dims))
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @property
    def dim(self) -> int:
        return self.factors[0].dim if self.factors else 0

    @property
    def sig(self) -> int:
        return self.factors[0].sig if self.factors else 0

    @property
    def log_power(self) -> int:
        return sum(tag.log_power for tag in self.factors)

    def scaling_degree(self) -> Fraction:
        return sum((tag.scaling_degree() for tag in self.factors), Fraction(0))

    def __mul__(self, other):
        if isinstance(other, KernelExpr):
            return KernelExpr(self.prefactor * other.prefactor, self.factors + other.factors,
                              tuple(dict.fromkeys(self.slots + other.slots)))
        if isinstance(other, (ExactScalar, int, Fraction)):
            return KernelExpr(self.prefactor * other, self.factors, self.slots)
        return NotImplemented

    __rmul__ = __mul__

    def power(self, n: int) -> "KernelExpr":
        result = KernelExpr(ExactScalar.one(), (), self.slots)
        for _ in range(n):
            result = result * self
        return result

    def is_pure_power(self) -> bool:
        return all(tag.kind is KernelKind.POWER_X2_INV for tag in self.factors)

    def total_power(self) -> int:
        """纯幂核合并后的 (x²−iε) 负幂"""
        return sum(tag.power for tag in self.factors if tag.kind is KernelKind.POWER_X2_INV)

    def descriptor(self) -> Dict[str, Any]:
        return {
            "prefactor": self.prefactor.to_text(),
            "factors": [tag.descriptor() for tag in self.factors],
            "scalingDegree": str(self.scaling_degree()),
        }


def scaling_degree(kernel: KernelExpr) -> Fraction:
    return kernel.scaling_degree()


def sphere_volume(d: int) -> ExactScalar:
    """
    单位球面 S^{d-1} 的面积 2π^{d/2}/Γ(d/2)，偶数 d 时精确

    Raises:
        ValueError: 奇数维没有有理 × π 幂的形式
    """
    if d % 2:
        raise ValueError(f"奇数维球面面积不在精确标量域中: d={d}")
    n = d // 2
    return ExactScalar.term(Fraction(2, math.factorial(n - 1)), pi_power=n)


def power_tag(d: int, p: int, sig: Optional[int] = None) -> KernelTag:
    return KernelTag(KernelKind.POWER_X2_INV, dim=d, sig=d - 1 if sig is None else sig, power=p)


def log_tag(d: int, p: int, kappa: Atom = Atom.LOG_MU, sig: Optional[int] = None) -> KernelTag:
    return KernelTag(KernelKind.LOG_OVER_X2_POW, dim=d, sig=d - 1 if sig is None else sig,
                     power=p, kappa=kappa, mu_dep=kappa is Atom.LOG_MU)


def massless_feynman(d: int, sig: Optional[int] = None) -> KernelExpr:
    """
    无质量 Feynman 传播子 D_F

    偶数 d = 2n+2 时 D_F = (−1)^n (n−1)!/(4π^{n+1}) · (x²−i0)^{−n}；
    d=4 给出 −1/(4π²(x²−i0))，d=6 给出 1/(4π³(x²−i0)²)

    Raises:
        KernelDimensionError: d 为奇数或小于 4
    """
    if d % 2 or d < 4:
        raise KernelDimensionError(f"D_F 目录仅支持偶数 d ≥ 4: {d}", dims=[d])
    n = d // 2 - 1
    prefactor = ExactScalar.term(Fraction((-1) ** n * math.factorial(n - 1), 4), pi_power=-(n + 1))
    return KernelExpr(prefactor, (power_tag(d, n, sig),))
