"""
异常定义模块
统一定义重整化引擎各子模块抛出的异常类型

主要功能：
1. 提供带上下文属性的异常基类 PqftError
2. 为精确算术、核目录、乘积、延拓、重整化群、模型和命令行定义专用异常
3. 异常实例可序列化为字典，供命令行报告使用

作者: Assistant
创建时间: 2024年
"""

from typing import Any, Dict, List, Optional


class PqftError(Exception):
    """引擎异常基类"""

    def __init__(self, message: str, **context: Any):
        """
        初始化异常

        Args:
            message: 错误消息
            **context: 附加上下文，同时作为属性挂在实例上
        """
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = dict(context)
        for key, value in context.items():
            setattr(self, key, value)

    def to_dict(self) -> Dict[str, Any]:
        """转换为可序列化字典"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "context": {key: str(value) for key, value in self.context.items()},
        }


class ConfigError(PqftError, ValueError):
    """配置错误"""

    def __init__(self, message: str, key: str = None, value: Any = None):
        super().__init__(message, key=key, value=value)


class TruncationMismatchError(PqftError, ValueError):
    """两个形式级数的截断阶不一致"""

    def __init__(self, left: tuple, right: tuple):
        super().__init__(f"截断阶不一致: {left} != {right}", left=left, right=right)


class ConstantTermError(PqftError, ValueError):
    """exp/log 的常数项前置条件不满足"""

    def __init__(self, operation: str, constant: Any):
        super().__init__(f"{operation} 的常数项不满足前置条件: {constant}",
                         operation=operation, constant=constant)


class KernelDimensionError(PqftError, ValueError):
    """核乘积中混合了不同的维数或号差"""

    def __init__(self, message: str, dims: Optional[List[Any]] = None):
        super().__init__(message, dims=dims)


class HadamardDomainError(PqftError, ValueError):
    """Hadamard 函数求值参数超出定义域"""

    def __init__(self, message: str, parameter: str = None, value: Any = None):
        super().__init__(message, parameter=parameter, value=value)


class SeriesConvergenceError(PqftError, ArithmeticError):
    """Bessel 级数在项数预算内未收敛"""

    def __init__(self, terms: int, residual: Any):
        super().__init__(f"级数在 {terms} 项内未收敛, 剩余项 {residual}",
                         terms=terms, residual=residual)


class NonPolynomialError(PqftError, TypeError):
    """输入不是多项式泛函"""

    def __init__(self, detail: str):
        super().__init__(f"非多项式输入: {detail}", detail=detail)


class SupportPreconditionError(PqftError, ValueError):
    """支集关系前置条件不成立"""

    def __init__(self, message: str, relation: str = None):
        super().__init__(message, relation=relation)


class ExtensionError(PqftError, ValueError):
    """核不在目录中且无法约化"""

    def __init__(self, message: str, kernel: Any = None):
        super().__init__(message, kernel=kernel)


class MissingExtensionError(PqftError, LookupError):
    """发散子核缺少延拓选择"""

    def __init__(self, kernel: Any, order: int):
        super().__init__(f"第 {order} 阶缺少延拓选择: {kernel}", kernel=kernel, order=order)


class NonLocalResidueError(PqftError, ArithmeticError):
    """Z 映射的某阶残差不是局域的"""

    def __init__(self, order: int, graphs: Any = None):
        super().__init__(f"第 {order} 阶出现非局域残差", order=order, graphs=graphs)


class UnsupportedChannelError(PqftError, NotImplementedError):
    """真空通道的剩余场结构无法归入基"""

    def __init__(self, channel: Any):
        super().__init__(f"不支持的通道: {channel}", channel=channel)


class QuadratureError(PqftError, ArithmeticError):
    """数值积分未达到要求精度"""

    def __init__(self, message: str, integrand: str = "", error_estimate: float = float("nan")):
        super().__init__(f"{message} (积分 {integrand}, 误差估计 {error_estimate:.3e})",
                         integrand=integrand, error_estimate=error_estimate)


class FitResidualError(PqftError, ArithmeticError):
    """拟合残差超过容差"""

    def __init__(self, residual: float, tolerance: float):
        super().__init__(f"拟合残差 {residual:.3e} 超过容差 {tolerance:.3e}",
                         residual=residual, tolerance=tolerance)


class UnknownModelError(PqftError, ValueError):
    """未注册的模型名称"""

    def __init__(self, model: str, available: List[str]):
        super().__init__(f"不支持的模型: {model}, 可用模型: {', '.join(available)}",
                         model=model, available=available)


class RegressionMismatchError(PqftError, AssertionError):
    """回归检查不一致"""

    def __init__(self, check: str, expected: Any, actual: Any):
        super().__init__(f"回归检查失败 {check}: 期望 {expected}, 实际 {actual}",
                         check=check, expected=expected, actual=actual)
