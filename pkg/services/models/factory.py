"""
模型工厂

根据名称返回模型流水线，未注册的名称抛出 UnknownModelError
"""

import logging
from typing import Callable, Dict, List, Union

from services.common.errors import UnknownModelError
from .phi2_d4 import phi2_d4_example
from .phi3_d6 import phi3_d6_report
from .phi4_d4 import phi4_d4_report
from .report import BetaReport, ExampleReport

logger = logging.getLogger("pqft.models.factory")

ModelReport = Union[BetaReport, ExampleReport]

_MODELS: Dict[str, Callable[..., ModelReport]] = {
    "phi2_d4_example": phi2_d4_example,
    "phi3_d6": phi3_d6_report,
    "phi4_d4": phi4_d4_report,
}


def get_available_models() -> List[str]:
    return sorted(_MODELS)


def get_model(name: str) -> Callable[..., ModelReport]:
    """
    获取模型流水线

    Args:
        name: 模型名称

    Returns:
        Callable: 无参数调用即返回报告

    Raises:
        UnknownModelError: 不支持的模型
    """
    key = (name or "").strip().lower()
    if key not in _MODELS:
        raise UnknownModelError(name, get_available_models())
    logger.debug(f"选择模型: {key}")
    return _MODELS[key]


def run_model(name: str, **kwargs) -> ModelReport:
    """运行模型并记录检查结果"""
    report = get_model(name)(**kwargs)
    marker = "✅" if report.passed else "❌"
    logger.info(f"{marker} 模型 {name}: {len(report.checks) - len(report.failed_checks())}/{len(report.checks)} 项检查通过")
    return report
