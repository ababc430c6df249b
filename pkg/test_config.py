#!/usr/bin/env python3
"""
测试运行配置：默认值、校验、配置文件读取与全局更新
"""

import pytest

from core.config import (
    RunConfig, default_lambda_grid, get_config, load_config_file, reset_config, update_config,
)
from services.common.errors import ConfigError


@pytest.fixture(autouse=True)
def fresh_config():
    reset_config()
    yield
    reset_config()


def test_defaults():
    """默认配置可以直接通过校验"""
    config = RunConfig().validate()
    assert config.truncation == (4, 4)
    assert config.lambda_grid == default_lambda_grid()
    assert config.lambda_grid[0] == pytest.approx(10.0)
    assert config.lambda_grid[-1] == pytest.approx(1000.0)
    assert config.families == ["shifted", "gaussian"]
    assert config.fit_tolerance == 1e-4
    assert config.output_dir


@pytest.mark.parametrize("key,value", [
    ("tolerance", 0.0),
    ("fit_tolerance", -1e-3),
    ("sigma", 0.0),
    ("lambda_grid", []),
    ("lambda_grid", [10.0, -1.0]),
    ("output_format", "xml"),
    ("h_max", -1),
    ("workers", 0),
])
def test_validate_rejects(key, value):
    """无效配置抛出 ConfigError"""
    config = RunConfig()
    setattr(config, key, value)
    with pytest.raises(ConfigError):
        config.validate()


def test_load_config_file(tmp_path):
    """key=value 文件按字段类型转换，未知键被跳过"""
    path = tmp_path / "run.conf"
    path.write_text(
        "# 注释\n"
        "\n"
        "tolerance = 1e-6\n"
        "workers = 3\n"
        "lambda_grid = 10, 100, 1000\n"
        "families = gaussian\n"
        "model = phi3_d6\n"
        "colour = blue\n",
        encoding="utf-8",
    )
    values = load_config_file(str(path))
    assert values == {
        "tolerance": 1e-6,
        "workers": 3,
        "lambda_grid": [10.0, 100.0, 1000.0],
        "families": ["gaussian"],
        "model": "phi3_d6",
    }


def test_load_config_file_errors(tmp_path):
    """缺失文件、缺少等号与类型错误"""
    with pytest.raises(ConfigError):
        load_config_file(str(tmp_path / "absent.conf"))
    broken = tmp_path / "broken.conf"
    broken.write_text("tolerance 1e-6\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config_file(str(broken))
    typed = tmp_path / "typed.conf"
    typed.write_text("workers = many\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config_file(str(typed))


def test_update_and_reset():
    """None 值不覆盖，未知键被忽略，reset 恢复默认"""
    update_config(tolerance=1e-4, sigma=None, colour="blue")
    config = get_config()
    assert config.tolerance == 1e-4
    assert config.sigma == 10.0
    assert not hasattr(config, "colour")
    assert reset_config().tolerance == 1e-8
    assert reset_config({"model": "phi2_d4_example"}).model == "phi2_d4_example"


def test_to_dict_roundtrip():
    """to_dict 覆盖全部字段"""
    data = RunConfig().to_dict()
    assert RunConfig(**data) == RunConfig()


if __name__ == "__main__":
    pytest.main([__file__])
