"""
报告输出模块
JSON (schema "pqft-rg/1") 与 CSV 系数表的写出

相同配置写出的 JSON 除 generated_at 外逐字节一致
"""

import csv
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

logger = logging.getLogger("pqft.cli.output")

SCHEMA = "pqft-rg/1"
CSV_FIELDS = ("section", "basis", "hbar", "coupling", "symbolic", "real", "imag")


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class CommandResult:
    """一条命令的输出：报告正文、可选的 CSV 行与退出码"""
    name: str
    payload: Dict[str, Any]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    exit_code: int = 0
    summary: str = ""


def envelope(command: str, payload: Dict[str, Any], config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {
        "schema": SCHEMA,
        "command": command,
        "generated_at": utc_now(),
        "config": config or {},
        "result": payload,
    }


def dumps(document: Dict[str, Any]) -> str:
    return json.dumps(document, ensure_ascii=False, indent=2, sort_keys=True, default=str) + "\n"


def write_json(path: Path, document: Dict[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(document), encoding="utf-8")
    logger.info(f"写出 JSON: {path}")
    return path


def write_csv(path: Path, rows: Sequence[Dict[str, Any]], fields: Sequence[str] = CSV_FIELDS) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(fields), extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: row.get(key, "") for key in fields})
    logger.info(f"写出 CSV: {path} ({len(rows)} 行)")
    return path


def write_result(command: str, result: CommandResult, output_dir: str, output_format: str = "json",
                 config: Optional[Dict[str, Any]] = None) -> List[Path]:
    """
    按格式写出报告

    Args:
        command: 命令名
        result: 命令输出
        output_dir: 输出目录
        output_format: json、csv 或 both；没有 CSV 行时只写 JSON

    Returns:
        List[Path]: 写出的文件
    """
    base = Path(output_dir) / f"{command}_{result.name}"
    written = []
    if output_format in ("json", "both") or not result.rows:
        written.append(write_json(Path(f"{base}.json"), envelope(command, result.payload, config)))
    if output_format in ("csv", "both") and result.rows:
        written.append(write_csv(Path(f"{base}.csv"), result.rows))
    return written
