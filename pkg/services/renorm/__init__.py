"""
重整化模块

- extension: 几乎齐次分布的延拓、c_k 与显式对数延拓
- channels: 真空通道的核与标度破坏
- feynman: 三角图的 Feynman 参数约化与参数积分
- oracle: 欧氏标度数值检验
"""

from .channels import (
    STANDARD_CHANNELS, PowerLog, channel_kernel, channel_violation, derivative_bundle,
    gradient_pair, plain_bundle, propagator_terms, standard_channel,
)
from .extension import (
    DeltaPolynomial, ExplicitExtension, ExtensionRecord, box_power_brute_force,
    box_power_identity, c_k, explicit_extension, extend, kappa_family_offset,
    box_scaling_coefficient, log_violation, power_kernel,
)
from .feynman import (
    LAMBDA_SAMPLES, FeynmanReduction, feynman_reduce, inner_integral, inner_integral_profile,
    simplex_integral, triangle_coefficient, triangle_integral_I,
)
from .oracle import (
    PROFILES, EuclideanScalingOracle, RadialProfile, angular_volume, euclidean_scaling_oracle,
    get_profile, sphere_volume_float,
)

__all__ = [
    'STANDARD_CHANNELS', 'PowerLog', 'channel_kernel', 'channel_violation', 'derivative_bundle',
    'gradient_pair', 'plain_bundle', 'propagator_terms', 'standard_channel',
    'DeltaPolynomial', 'ExplicitExtension', 'ExtensionRecord', 'box_power_brute_force',
    'box_power_identity', 'c_k', 'explicit_extension', 'extend', 'kappa_family_offset',
    'box_scaling_coefficient', 'log_violation', 'power_kernel',
    'LAMBDA_SAMPLES', 'FeynmanReduction', 'feynman_reduce', 'inner_integral',
    'inner_integral_profile', 'simplex_integral', 'triangle_coefficient', 'triangle_integral_I',
    'PROFILES', 'EuclideanScalingOracle', 'RadialProfile', 'angular_volume',
    'euclidean_scaling_oracle', 'get_profile', 'sphere_volume_float',
]
