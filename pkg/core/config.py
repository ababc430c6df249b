"""
运行配置
统一管理命令行运行参数、容差与输出位置
"""

import logging
import os
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional, Tuple

from dotenv import load_dotenv

from services.common.errors import ConfigError

load_dotenv()

logger = logging.getLogger("pqft.config")

OUTPUT_FORMATS = ("json", "csv", "both")


def default_lambda_grid() -> List[float]:
    """Λ = 10^{1, 1.5, …, 3}"""
    return [10 ** (1 + 0.5 * k) for k in range(5)]


@dataclass
class RunConfig:
    """一次运行的配置"""

    # 命令
    command: str = "beta"
    model: str = "phi4_d4"

    # 截断 (h_max, g_max)
    h_max: int = 4
    g_max: int = 4

    # 容差
    tolerance: float = 1e-8
    fit_tolerance: float = 1e-4
    oracle_tolerance: float = 1e-6

    # 抵消项实验
    lambda_grid: List[float] = field(default_factory=default_lambda_grid)
    families: List[str] = field(default_factory=lambda: ["shifted", "gaussian"])
    sigma: float = 10.0

    # 输出
    output_dir: str = ""
    output_format: str = "json"
    decimal_digits: int = 30
    workers: int = 1

    def __post_init__(self):
        if not self.output_dir:
            self.output_dir = output_config["output_dir"]

    @property
    def truncation(self) -> Tuple[int, int]:
        return (self.h_max, self.g_max)

    def validate(self) -> "RunConfig":
        """
        Raises:
            ConfigError: 容差非正、网格为空、输出格式或并行数无效
        """
        for key in ("tolerance", "fit_tolerance", "oracle_tolerance", "sigma"):
            value = getattr(self, key)
            if value <= 0:
                raise ConfigError(f"{key} 必须为正: {value}", key=key, value=value)
        if not self.lambda_grid or any(v <= 0 for v in self.lambda_grid):
            raise ConfigError("Λ 网格不能为空且必须为正", key="lambda_grid", value=self.lambda_grid)
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"不支持的输出格式: {self.output_format}", key="output_format",
                              value=self.output_format)
        if self.h_max < 0 or self.g_max < 0:
            raise ConfigError(f"截断阶不能为负: {self.truncation}", key="truncation", value=self.truncation)
        if self.workers < 1:
            raise ConfigError(f"workers 至少为 1: {self.workers}", key="workers", value=self.workers)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


# 全局配置实例
output_config = {
    "output_dir": os.environ.get("PQFT_OUTPUT_DIR", "output"),
}

debug_config = {
    "enabled": os.environ.get("DEBUG_MODE", "false").lower() in ("true", "1", "yes", "on"),
}

run_config = RunConfig()


def _convert(key: str, raw: str) -> Any:
    """按 RunConfig 字段的默认值类型转换文本"""
    current = getattr(RunConfig(), key)
    text = raw.strip()
    try:
        if isinstance(current, bool):
            return text.lower() in ("true", "1", "yes", "on")
        if isinstance(current, int):
            return int(text)
        if isinstance(current, float):
            return float(text)
        if isinstance(current, list):
            items = [item.strip() for item in text.split(",") if item.strip()]
            if current and isinstance(current[0], float):
                return [float(item) for item in items]
            return items
    except ValueError as e:
        raise ConfigError(f"配置项 {key} 的值无效: {raw}", key=key, value=raw) from e
    return text


def load_config_file(path: str) -> Dict[str, Any]:
    """
    读取 key=value 配置文件

    Args:
        path: 文件路径，# 开头的行与空行被跳过

    Returns:
        Dict[str, Any]: 已转换为字段类型的配置项

    Raises:
        ConfigError: 文件不存在或行格式错误
    """
    if not os.path.exists(path):
        raise ConfigError(f"配置文件不存在: {path}", key="config", value=path)
    known = {f.name for f in fields(RunConfig)}
    values: Dict[str, Any] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for number, line in enumerate(handle, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"配置文件第 {number} 行缺少 '=': {line}", key="config", value=line)
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in known:
                logger.warning(f"未知的配置项: {key}")
                continue
            values[key] = _convert(key, raw)
    logger.debug(f"读取配置文件 {path}: {sorted(values)}")
    return values


def update_config(**kwargs) -> RunConfig:
    """
    更新配置参数

    Args:
        **kwargs: 要更新的配置项，值为 None 的项被忽略
    """
    global run_config
    for key, value in kwargs.items():
        if value is None:
            continue
        if hasattr(run_config, key):
            setattr(run_config, key, value)
            logger.info(f"配置更新: {key} = {value}")
        else:
            logger.warning(f"未知的配置项: {key}")
    return run_config


def get_config() -> RunConfig:
    """获取当前配置"""
    return run_config


def reset_config(overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """恢复默认配置"""
    global run_config
    run_config = RunConfig()
    if overrides:
        update_config(**overrides)
    return run_config
