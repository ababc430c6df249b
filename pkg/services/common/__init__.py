"""
通用服务模块
"""

from .errors import (
    PqftError, ConfigError, TruncationMismatchError, ConstantTermError,
    KernelDimensionError, HadamardDomainError, SeriesConvergenceError,
    NonPolynomialError, SupportPreconditionError, ExtensionError,
    MissingExtensionError, NonLocalResidueError, UnsupportedChannelError,
    QuadratureError, FitResidualError, UnknownModelError, RegressionMismatchError,
)

__all__ = [
    'PqftError', 'ConfigError', 'TruncationMismatchError', 'ConstantTermError',
    'KernelDimensionError', 'HadamardDomainError', 'SeriesConvergenceError',
    'NonPolynomialError', 'SupportPreconditionError', 'ExtensionError',
    'MissingExtensionError', 'NonLocalResidueError', 'UnsupportedChannelError',
    'QuadratureError', 'FitResidualError', 'UnknownModelError', 'RegressionMismatchError',
]
