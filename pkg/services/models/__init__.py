"""
模型模块

- bfunction: 通道标度破坏到拉格朗日量类的组装与 β 定义式
- report: BetaReport / ExampleReport 与检查结果
- phi2_d4: φ² 模型的余环、α 与 B̂ 示例
- phi3_d6: 六维 φ³ 的 B 与 β
- phi4_d4: 四维 φ⁴ 的 B 与 β
- factory: 按名称获取模型
"""

from .bfunction import (
    BetaAssembly, Interaction, assemble_beta, bundle_violation, hadamard_leg_term,
    interaction_class, interaction_functional, leg_counting, mu_derivative, pair_classes,
    scale_derivative, second_order_B, tilde, triangle_B,
)
from .factory import get_available_models, get_model, run_model
from .phi2_d4 import expected_displays, phi2_d4_example
from .phi3_d6 import phi3_d6_B, phi3_d6_beta, phi3_d6_report, phi3_entries
from .phi4_d4 import (
    expected_sunset_mass, fish_consistency, phi4_channels, phi4_d4_assembly, phi4_d4_B,
    phi4_d4_beta, phi4_d4_report, phi4_entries,
)
from .report import BetaReport, CheckLog, CheckResult, ExampleReport, class_rows, scalar_entry

__all__ = [
    'BetaAssembly', 'Interaction', 'assemble_beta', 'bundle_violation', 'hadamard_leg_term',
    'interaction_class', 'interaction_functional', 'leg_counting', 'mu_derivative',
    'pair_classes', 'scale_derivative', 'second_order_B', 'tilde', 'triangle_B',
    'get_available_models', 'get_model', 'run_model',
    'expected_displays', 'phi2_d4_example',
    'phi3_d6_B', 'phi3_d6_beta', 'phi3_d6_report', 'phi3_entries',
    'expected_sunset_mass', 'fish_consistency', 'phi4_channels', 'phi4_d4_assembly',
    'phi4_d4_B', 'phi4_d4_beta', 'phi4_d4_report', 'phi4_entries',
    'BetaReport', 'CheckLog', 'CheckResult', 'ExampleReport', 'class_rows', 'scalar_entry',
]
