"""
重整化群模块

- smatrix: 延拓表、S 矩阵与因果分解/幺正性检查
- zmap: Z 映射、主定理归纳与 α 映射
- cocycle: Gell-Mann–Low 余环与 B̂ 函数
- flow: 有效势与流方程
- counterterms: φ² 模型的抵消项数值提取
"""

from .cocycle import (
    LOG_RHO, LOG_TAU, BhatResult, bhat_function, bhat_relation_check, cocycle_check, gml_cocycle,
    kappa_table, scale_derivative, z_from_smatrices,
)
from .counterterms import (
    DEFAULT_FAMILIES, DEFAULT_LAMBDA_GRID, CountertermFit, CountertermResult, PairingSample,
    counterterm_extraction, euclidean_pairing, exact_log_slope, fish_interaction, fit_log_slope,
    gaussian_autocorrelation,
)
from .flow import (
    flow_effective_potential, flow_equation_residual, flow_reference_residual,
    regularized_reference_check, second_order_difference,
)
from .smatrix import (
    ComposedSMatrix, ExtensionChoice, ExtensionTable, ShiftedExtensionTable, SMatrix,
    bundle_omega, bundle_signature, bundle_symmetry, causal_factorization, normalize_signature,
    plain_signature, scaling_violation, unitarity_check, unitarity_residual,
)
from .zmap import (
    AlphaMap, ComposedZMap, IdentityZMap, InductiveZMap, InverseZMap, ZMap, atom_degree,
    c7_audit, gamma_v, hbar_audit, relative_hbar, support_preserved, z_additivity_check,
    z_unitarity_condition,
)

__all__ = [
    'LOG_RHO', 'LOG_TAU', 'BhatResult', 'bhat_function', 'bhat_relation_check', 'cocycle_check',
    'gml_cocycle', 'kappa_table', 'scale_derivative', 'z_from_smatrices',
    'DEFAULT_FAMILIES', 'DEFAULT_LAMBDA_GRID', 'CountertermFit', 'CountertermResult',
    'PairingSample', 'counterterm_extraction', 'euclidean_pairing', 'exact_log_slope',
    'fish_interaction', 'fit_log_slope', 'gaussian_autocorrelation',
    'flow_effective_potential', 'flow_equation_residual', 'flow_reference_residual',
    'regularized_reference_check', 'second_order_difference',
    'ComposedSMatrix', 'ExtensionChoice', 'ExtensionTable', 'ShiftedExtensionTable', 'SMatrix',
    'bundle_omega', 'bundle_signature', 'bundle_symmetry', 'causal_factorization',
    'normalize_signature', 'plain_signature', 'scaling_violation', 'unitarity_check',
    'unitarity_residual',
    'AlphaMap', 'ComposedZMap', 'IdentityZMap', 'InductiveZMap', 'InverseZMap', 'ZMap',
    'atom_degree', 'c7_audit', 'gamma_v', 'hbar_audit', 'relative_hbar', 'support_preserved',
    'z_additivity_check', 'z_unitarity_condition',
]
