"""
核模块

- catalog: 核标签、核表达式与标签代数
- bessel: 修正 Bessel 级数
- hadamard: Hadamard 函数求值与质量展开
- regularized: 正则化核族 h_Λ
"""

from .bessel import bessel_i, bessel_k, bessel_k_integer, sum_series
from .catalog import (
    KernelExpr, KernelKind, KernelTag, Orientation, SupportRule, log_tag, massless_feynman,
    power_tag, retarded_advanced_expansion, scaling_degree, sphere_volume,
)
from .hadamard import (
    HadamardEvaluator, MassExpansionTerm, closed_form_d3, hadamard_eval, mass_expansion,
    smoothness_in_m2_check, v_coincidence,
)
from .regularized import (
    FAMILIES, RegularizedFamily, get_available_families, get_family, regularized_dot_tag,
    regularized_limit, regularized_tag,
)

__all__ = [
    'bessel_i', 'bessel_k', 'bessel_k_integer', 'sum_series',
    'KernelExpr', 'KernelKind', 'KernelTag', 'Orientation', 'SupportRule', 'log_tag',
    'massless_feynman', 'power_tag', 'retarded_advanced_expansion', 'scaling_degree',
    'sphere_volume',
    'HadamardEvaluator', 'MassExpansionTerm', 'closed_form_d3', 'hadamard_eval',
    'mass_expansion', 'smoothness_in_m2_check', 'v_coincidence',
    'FAMILIES', 'RegularizedFamily', 'get_available_families', 'get_family',
    'regularized_dot_tag', 'regularized_limit', 'regularized_tag',
]
