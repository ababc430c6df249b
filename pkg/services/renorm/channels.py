"""
真空通道模块
两顶点之间一束 H_F 边的质量展开、梯度缩并与标度破坏

主要功能：
1. PowerLog: c·u^{−p}·log(−κ²u)^ℓ 的核项（u = x²−iε）
2. H_F 的 m² 展开项、梯度规则 ∂_λu^{−p}∂^λu^{−q} = 4pq u^{−p−q−1} 及其对数形式
3. channel_violation: 通道的 DeltaPolynomial（含 1/∏n_e!）

作者: Assistant
创建时间: 2024年
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from services.common.errors import ExtensionError, UnsupportedChannelError
from services.exact import Atom, ExactScalar
from services.functionals import DERIV, PLAIN
from services.kernels import KernelExpr, KernelKind, log_tag, mass_expansion, power_tag
from .extension import DeltaPolynomial, extend

logger = logging.getLogger("pqft.renorm.channels")

Ends = Tuple[str, str]


@dataclass(frozen=True)
class PowerLog:
    """c · u^{−power} · log(−κ²u)^{[log is not None]}"""
    coefficient: ExactScalar
    power: int = 0
    log: Optional[Atom] = None

    def __mul__(self, other: "PowerLog") -> "PowerLog":
        if self.log is not None and other.log is not None:
            raise ExtensionError("两个对数因子的乘积不在目录中",
                                 kernel={"logs": [self.log.value, other.log.value]})
        return PowerLog(self.coefficient * other.coefficient, self.power + other.power,
                        self.log or other.log)

    def scale(self, factor) -> "PowerLog":
        return PowerLog(self.coefficient * factor, self.power, self.log)

    def kernel(self, d: int, s: Optional[int] = None) -> Optional[KernelExpr]:
        """转为 KernelExpr，光滑常数项返回 None"""
        if self.log is not None:
            return KernelExpr(self.coefficient, (log_tag(d, self.power, self.log, s),))
        if self.power == 0:
            return None
        return KernelExpr(self.coefficient, (power_tag(d, self.power, s),))


def _collect(terms: Sequence[PowerLog]) -> List[PowerLog]:
    merged: Dict[Tuple[int, Optional[Atom]], ExactScalar] = {}
    for term in terms:
        key = (term.power, term.log)
        merged[key] = merged.get(key, ExactScalar.zero()) + term.coefficient
    return [PowerLog(c, p, log) for (p, log), c in sorted(merged.items(), key=lambda kv: (kv[0][0], str(kv[0][1])))
            if not c.is_zero()]


def propagator_terms(d: int, mass_order: int) -> List[PowerLog]:
    """
    H_F 展开中 (m²)^mass_order 的系数

    Raises:
        ExtensionError: 请求的质量阶超出展开
    """
    for term in mass_expansion(d, max(mass_order, 1)):
        if term.mass_order != mass_order:
            continue
        if term.remainder:
            raise ExtensionError(f"质量展开阶数不足: m^{2 * mass_order}", kernel={"dim": d})
        pieces = []
        for expr in term.kernels:
            if not expr.factors:
                pieces.append(PowerLog(expr.prefactor))
                continue
            tag = expr.factors[0]
            log = tag.kappa if tag.kind is KernelKind.LOG_OVER_X2_POW else None
            pieces.append(PowerLog(expr.prefactor, tag.power, log))
        return pieces
    raise ExtensionError(f"质量展开阶数不足: m^{2 * mass_order}", kernel={"dim": d})


def gradient_pair(first: PowerLog, second: PowerLog) -> List[PowerLog]:
    """
    ∂_λA·∂^λB，A = u^{−p}L^a，B = u^{−q}L^b

    ∂_λ(u^{−p}L^a) = 2x_λ u^{−p−1}(−pL^a + aL^{a−1})，x² = u
    """
    if first.log is not None and second.log is not None:
        raise ExtensionError("两个对数因子的梯度缩并不在目录中", kernel={})
    base = first.coefficient * second.coefficient * 4
    power = first.power + second.power + 1
    p, q = first.power, second.power
    log = first.log or second.log
    if log is None:
        return _collect([PowerLog(base * (p * q), power)])
    # 恰有一侧带对数：(−pL + 1)(−q) 或 (−p)(−qL + 1)
    other = q if first.log is not None else p
    mine = p if first.log is not None else q
    return _collect([PowerLog(base * (mine * other), power, log), PowerLog(base * (-other), power)])


def _mass_distributions(edges: int, mass_order: int) -> List[Tuple[int, ...]]:
    return [combo for combo in itertools.product(range(mass_order + 1), repeat=edges)
            if sum(combo) == mass_order]


def channel_kernel(d: int, ends: Sequence[Ends], mass_order: int = 0) -> List[PowerLog]:
    """
    一束边的核（含 1/∏n_e!）

    允许的导数结构：没有导数端，或同一侧两个导数端分属两条边（(∂φ)² 的两条腿）

    Raises:
        UnsupportedChannelError: 其余导数结构
    """
    ends = [tuple(e) for e in ends]
    derivs = [(index, side) for index, e in enumerate(ends) for side in (0, 1) if e[side] == DERIV]
    pair: Optional[Tuple[int, int]] = None
    if derivs:
        if len(derivs) != 2 or derivs[0][1] != derivs[1][1] or derivs[0][0] == derivs[1][0]:
            raise UnsupportedChannelError(f"导数结构 {ends}")
        pair = (derivs[0][0], derivs[1][0])
    symmetry = 1
    for count in Counter(ends).values():
        symmetry *= math.factorial(count)

    terms: List[PowerLog] = []
    for distribution in _mass_distributions(len(ends), mass_order):
        factors = [propagator_terms(d, m) for m in distribution]
        rest = [i for i in range(len(ends)) if pair is None or i not in pair]
        for choice in itertools.product(*factors):
            product = PowerLog(ExactScalar.one())
            for i in rest:
                product = product * choice[i]
            if pair is None:
                terms.append(product)
            else:
                for piece in gradient_pair(choice[pair[0]], choice[pair[1]]):
                    terms.append(product * piece)
    return [t.scale(ExactScalar.rational(Fraction(1, symmetry))) for t in _collect(terms)]


def channel_violation(d: int, ends: Sequence[Ends], mass_order: int = 0,
                      s: Optional[int] = None) -> DeltaPolynomial:
    """
    通道核的标度破坏，m² 幂记在 DeltaPolynomial 的第二个键上

    光滑项与 ω < 0 的项不贡献
    """
    total = DeltaPolynomial()
    for term in channel_kernel(d, ends, mass_order):
        kernel = term.kernel(d, s)
        if kernel is None:
            continue
        record = extend(kernel)
        for (box, _), value in record.violation.items():
            total = total + DeltaPolynomial.single(value, box, mass_order)
    logger.debug(f"通道 d={d} {list(ends)} m^{2 * mass_order}: {total.to_text()}")
    return total


def plain_bundle(n: int) -> List[Ends]:
    return [(PLAIN, PLAIN)] * n


def derivative_bundle(side: int = 1) -> List[Ends]:
    """一侧为 (∂φ)² 的两条边"""
    ends = (PLAIN, DERIV) if side == 1 else (DERIV, PLAIN)
    return [ends, ends]


STANDARD_CHANNELS: Dict[str, Tuple[int, List[Ends], int]] = {
    "fish_d4": (4, plain_bundle(2), 0),
    "sunset_d4": (4, plain_bundle(3), 0),
    "sunset_d4_mass": (4, plain_bundle(3), 1),
    "derivative_d4": (4, derivative_bundle(), 0),
    "derivative_d4_mass": (4, derivative_bundle(), 1),
    "fish_d6": (6, plain_bundle(2), 0),
    "fish_d6_mass": (6, plain_bundle(2), 1),
}


def standard_channel(name: str) -> DeltaPolynomial:
    """
    命名通道的标度破坏

    Raises:
        ValueError: 不支持的通道名
    """
    if name not in STANDARD_CHANNELS:
        raise ValueError(f"不支持的通道: {name}，可用: {sorted(STANDARD_CHANNELS)}")
    d, ends, mass_order = STANDARD_CHANNELS[name]
    return channel_violation(d, ends, mass_order)
