"""
拉格朗日量模块
广义拉格朗日量 f ↦ ℒ(f) 及其等价类

主要功能：
1. LagrangianClass: 基 {1, φ, φ², (∂φ)², φ³, φ⁴} 上以形式级数为系数的向量
2. δ 与 □δ 对真空通道剩余场的归类规则（全导数项归零）
3. GeneralizedLagrangian: 密度拉格朗日量、标度 ℒ^ρ 与支集性质

作者: Assistant
创建时间: 2024年
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from services.common.errors import UnsupportedChannelError
from services.exact import DEFAULT_TRUNCATION, ExactScalar, FormalSeries
from .local import LocalFunctional, LocalTerm, Smearing, TestFunction
from .monomial import DPHI2, LAGRANGIAN_BASIS, ONE, PHI, BasisKey, FieldMonomial

logger = logging.getLogger("pqft.functionals.lagrangian")

Bidegree = Tuple[int, int]


class LagrangianClass:
    """
    拉格朗日量等价类

    components 以 BasisKey 为键，系数为 (ħ, g) 双分次的 FormalSeries；
    ignore_constants / ignore_linear 为真时对应分量在构造时被丢弃
    """

    def __init__(self, components: Optional[Dict[BasisKey, FormalSeries]] = None, dim: int = 4,
                 truncation: Bidegree = DEFAULT_TRUNCATION, ignore_constants: bool = True,
                 ignore_linear: bool = False):
        self.dim = dim
        self.truncation = tuple(truncation)
        self.ignore_constants = ignore_constants
        self.ignore_linear = ignore_linear
        self.components: Dict[BasisKey, FormalSeries] = {}
        for key, series in (components or {}).items():
            if self._ignored(key) or series.is_zero():
                continue
            self.components[key] = series.truncate(self.truncation)

    def _ignored(self, key: BasisKey) -> bool:
        if self.ignore_constants and key.monomial == ONE:
            return True
        return self.ignore_linear and key.monomial == PHI

    # ------------------------------------------------------------------
    # 构造
    # ------------------------------------------------------------------

    def _like(self, components: Dict[BasisKey, FormalSeries]) -> "LagrangianClass":
        return LagrangianClass(components, self.dim, self.truncation,
                               self.ignore_constants, self.ignore_linear)

    @classmethod
    def zero(cls, dim: int = 4, truncation: Bidegree = DEFAULT_TRUNCATION) -> "LagrangianClass":
        return cls({}, dim, truncation)

    @classmethod
    def from_entries(cls, entries: Iterable[Tuple[BasisKey, Any, int, int]], dim: int = 4,
                     truncation: Bidegree = DEFAULT_TRUNCATION, **flags) -> "LagrangianClass":
        """由 (基元素, 系数, ħ 阶, 耦合阶) 条目构造"""
        result = cls({}, dim, truncation, **flags)
        for key, coefficient, h, g in entries:
            result = result.add_entry(key, ExactScalar.coerce(coefficient), h, g)
        return result

    @classmethod
    def from_local(cls, functional: LocalFunctional,
                   truncation: Bidegree = DEFAULT_TRUNCATION, **flags) -> "LagrangianClass":
        """局域泛函的类：代数绝热极限下抹平因子取 1"""
        entries = []
        for term in functional.terms:
            if term.weight(functional.dim) != 1:
                raise ValueError(f"非整数标度权重不能进入精确类: {term.text()}")
            entries.append((BasisKey(term.monomial, term.mass), term.coefficient, term.hbar, term.coupling))
        return cls.from_entries(entries, functional.dim, truncation, **flags)

    def add_entry(self, key: BasisKey, coefficient: ExactScalar, h: int, g: int) -> "LagrangianClass":
        if h < 0 or g < 0:
            raise ValueError(f"类分量的 ħ/耦合阶必须非负: {(h, g)}")
        return self + self._like({key: FormalSeries.monomial(coefficient, h, g, self.truncation)})

    # ------------------------------------------------------------------
    # 算术
    # ------------------------------------------------------------------

    def __add__(self, other: "LagrangianClass") -> "LagrangianClass":
        if not isinstance(other, LagrangianClass):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError(f"维数不一致: {self.dim} / {other.dim}")
        merged = dict(self.components)
        for key, series in other.components.items():
            merged[key] = merged[key] + series if key in merged else series
        return self._like(merged)

    def __neg__(self) -> "LagrangianClass":
        return self._like({key: -series for key, series in self.components.items()})

    def __sub__(self, other: "LagrangianClass") -> "LagrangianClass":
        return self + (-other)

    def scale(self, factor: Union[ExactScalar, FormalSeries, int, Fraction]) -> "LagrangianClass":
        """乘以标量或形式级数"""
        if isinstance(factor, FormalSeries):
            return self._like({key: series * factor for key, series in self.components.items()})
        return self._like({key: series.scale(ExactScalar.coerce(factor))
                           for key, series in self.components.items()})

    def shift(self, hbar: int = 0, coupling: int = 0) -> "LagrangianClass":
        components = {}
        for key, series in self.components.items():
            if hbar:
                series = series.shift_hbar(hbar)
            if coupling:
                series = series.shift_coupling(coupling)
            components[key] = series
        return self._like(components)

    def filter(self, keys: Iterable[BasisKey]) -> "LagrangianClass":
        keep = set(keys)
        return self._like({k: s for k, s in self.components.items() if k in keep})

    def without(self, keys: Iterable[BasisKey]) -> "LagrangianClass":
        drop = set(keys)
        return self._like({k: s for k, s in self.components.items() if k not in drop})

    # ------------------------------------------------------------------
    # 访问
    # ------------------------------------------------------------------

    def component(self, key: Union[BasisKey, FieldMonomial, str]) -> FormalSeries:
        key = _as_key(key)
        return self.components.get(key, FormalSeries({}, self.truncation))

    def coefficient(self, key: Union[BasisKey, FieldMonomial, str], h: int, g: int) -> ExactScalar:
        return self.component(key).coefficient(h, g)

    def keys(self) -> List[BasisKey]:
        return sorted(self.components)

    def is_zero(self) -> bool:
        return not self.components

    def outside_basis(self) -> List[BasisKey]:
        return [key for key in self.keys() if key.monomial not in LAGRANGIAN_BASIS]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LagrangianClass):
            return NotImplemented
        return self.dim == other.dim and self.components == other.components

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.components.items()))))

    def to_text(self) -> str:
        if not self.components:
            return "0"
        return " + ".join(f"[{key.name}]·({self.components[key].to_text()})" for key in self.keys())

    def descriptor(self) -> List[Dict[str, Any]]:
        rows = []
        for key in self.keys():
            for (h, g), value in self.components[key].items():
                rows.append({"basis": key.name, "hbar": h, "coupling": g,
                             "coefficient": value.to_text()})
        return rows

    def __repr__(self) -> str:
        return f"LagrangianClass({self.to_text()})"


def _as_key(key: Union[BasisKey, FieldMonomial, str]) -> BasisKey:
    if isinstance(key, BasisKey):
        return key
    if isinstance(key, FieldMonomial):
        return BasisKey(key)
    return BasisKey.parse(key)


def delta_class(left: FieldMonomial, right: FieldMonomial) -> Tuple[Fraction, FieldMonomial]:
    """∫ L(x) δ(x−y) R(y) 的类：同点乘积"""
    return left.product(right)


def box_delta_class(left: FieldMonomial, right: FieldMonomial) -> List[Tuple[Fraction, FieldMonomial]]:
    """
    ∫ L(x) □δ(x−y) R(y) 的类

    分部积分得 −∫ ∂L·∂R：两侧都是 φ 时为 −2(∂φ)²（归一化），
    一侧为常数时是全导数，类中为零

    Raises:
        UnsupportedChannelError: 其余剩余场结构超出基
    """
    if left == ONE or right == ONE:
        return []
    if left == PHI and right == PHI:
        return [(Fraction(-2), DPHI2)]
    raise UnsupportedChannelError(f"□δ[{left.name}, {right.name}]")


@dataclass(frozen=True)
class LagrangianEntry:
    """广义拉格朗日量的一项"""
    key: BasisKey
    coefficient: ExactScalar
    hbar: int = 0
    coupling: int = 0


@dataclass(frozen=True)
class GeneralizedLagrangian:
    """
    密度型广义拉格朗日量 ℒ(f) = Σ c·∫ f · (m²)^j · 单项式

    scale_factor 为累计的 ρ，ℒ^ρ(f) = σ_ρ(ℒ(f_ρ)) 对每一项给出 ρ^e，
    其中质量项 m² ↦ (ρm)²
    """
    entries: Tuple[LagrangianEntry, ...]
    dim: int = 4
    scale_factor: Fraction = Fraction(1)

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Union[BasisKey, str], Any, int, int]],
                   dim: int = 4) -> "GeneralizedLagrangian":
        entries = tuple(LagrangianEntry(_as_key(key), ExactScalar.coerce(c), h, g) for key, c, h, g in terms)
        return cls(entries, dim)

    @property
    def mass_scale(self) -> Fraction:
        """质量参数的累计标度 m ↦ ρm"""
        return self.scale_factor

    def _terms(self, smearing: Smearing) -> List[LocalTerm]:
        terms = []
        for entry in self.entries:
            term = LocalTerm(entry.key.monomial, entry.coefficient, smearing, entry.hbar,
                             entry.coupling, entry.key.mass)
            exponent = term.scaling_exponent(self.dim)
            if self.scale_factor == 1:
                terms.append(term)
            elif exponent.denominator == 1:
                terms.append(term.with_coefficient(entry.coefficient * self.scale_factor ** int(exponent)))
            else:
                terms.append(LocalTerm(term.monomial, term.coefficient, smearing, term.hbar,
                                       term.coupling, term.mass, self.scale_factor))
        return terms

    def __call__(self, test_function: TestFunction, dilation: Fraction = Fraction(1)) -> LocalFunctional:
        """
        ℒ(f)，dilation ≠ 1 时作用在 f(dilation·x) 上

        Args:
            test_function: 测试函数
            dilation: 抹平伸缩
        """
        smearing = Smearing((test_function.name,), Fraction(dilation))
        return LocalFunctional(self._terms(smearing), self.dim, {test_function.name: test_function})

    def scale(self, rho) -> "GeneralizedLagrangian":
        if rho <= 0:
            raise ValueError(f"标度参数必须为正: {rho}")
        return GeneralizedLagrangian(self.entries, self.dim, self.scale_factor * Fraction(rho))

    def lagrangian_class(self, truncation: Bidegree = DEFAULT_TRUNCATION, **flags) -> LagrangianClass:
        return LagrangianClass.from_local(self(TestFunction("f")), truncation, **flags)

    def support_property(self, f: TestFunction, g: TestFunction) -> bool:
        """supp(ℒ(f+g) − ℒ(g)) ⊆ supp f"""
        if f.name == g.name:
            raise ValueError("支集性质需要两个不同的测试函数")
        difference = (self(f) + self(g)) - self(g)
        passed = difference.support().subset_of(f.region)
        logger.debug(f"{'✅' if passed else '❌'} 支集性质: {difference.support().descriptor()}")
        return passed

    def descriptor(self) -> Dict[str, Any]:
        return {
            "d": self.dim,
            "basis": [{"basis": e.key.name, "coefficient": e.coefficient.to_text(),
                       "hbar": e.hbar, "coupling": e.coupling} for e in self.entries],
            "couplings": sorted({e.coupling for e in self.entries}),
            "mass": "m" if self.scale_factor == 1 else f"({self.scale_factor}m)",
        }


def scale_lagrangian(lagrangian: GeneralizedLagrangian, rho) -> GeneralizedLagrangian:
    """ℒ ↦ ℒ^ρ，满足 (ℒ^ρ)^τ = ℒ^{ρτ}"""
    return lagrangian.scale(rho)
