"""
局域泛函模块

- support: 支集区域与因果关系
- monomial: 归一化场单项式
- numeric: 网格数值配对
- local: 局域泛函、泛函导数与标度作用
- lagrangian: 广义拉格朗日量及其等价类
- splitting: 小支集分解
"""

from .lagrangian import (
    GeneralizedLagrangian, LagrangianClass, LagrangianEntry, box_delta_class, delta_class,
    scale_lagrangian,
)
from .local import (
    CenterRelativeTerm, DiagonalKernel, DiagonalTerm, LocalFunctional, LocalTerm, NonlocalSquare,
    Smearing, TestFunction, check_additivity, functional_derivative, scale_region,
)
from .monomial import (
    DERIV, DPHI2, LAGRANGIAN_BASIS, LEG_TYPES, ONE, PHI, PHI2, PHI3, PHI4, PLAIN, BasisKey,
    FieldMonomial,
)
from .numeric import BumpProfile, FieldConfiguration, Grid, partition_of_unity
from .splitting import SplitPiece, check_splitting, recombine, split_support
from .support import (
    Box, SupportRegion, clique_signs, cover_grid, intersection_graph, require_later, union_all,
)

__all__ = [
    'GeneralizedLagrangian', 'LagrangianClass', 'LagrangianEntry', 'box_delta_class',
    'delta_class', 'scale_lagrangian',
    'CenterRelativeTerm', 'DiagonalKernel', 'DiagonalTerm', 'LocalFunctional', 'LocalTerm',
    'NonlocalSquare', 'Smearing', 'TestFunction', 'check_additivity', 'functional_derivative',
    'scale_region',
    'DERIV', 'DPHI2', 'LAGRANGIAN_BASIS', 'LEG_TYPES', 'ONE', 'PHI', 'PHI2', 'PHI3', 'PHI4',
    'PLAIN', 'BasisKey', 'FieldMonomial',
    'BumpProfile', 'FieldConfiguration', 'Grid', 'partition_of_unity',
    'SplitPiece', 'check_splitting', 'recombine', 'split_support',
    'Box', 'SupportRegion', 'clique_signs', 'cover_grid', 'intersection_graph',
    'require_later', 'union_all',
]
