"""
结果文件写出工具
Artifact writers: CSV, JSON and the run manifest
"""
import json
import platform
import time
from datetime import datetime
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from .config import Config
from .logger import get_logger

logger = get_logger(__name__)

TRACKED_PACKAGES = ("numpy", "scipy", "jax", "pandas", "matplotlib", "seaborn", "click", "rich",
                    "loguru", "psutil", "python-dotenv")


def convert_numpy_types(obj):
    """递归转换numpy类型为Python原生类型"""
    if isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.floating):
        return float(obj)
    elif isinstance(obj, np.bool_):
        return bool(obj)
    elif isinstance(obj, np.ndarray):
        return obj.tolist()
    elif isinstance(obj, dict):
        return {str(key): convert_numpy_types(value) for key, value in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [convert_numpy_types(item) for item in obj]
    elif isinstance(obj, Path):
        return str(obj)
    return obj


def write_json(data: Any, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(convert_numpy_types(data), f, ensure_ascii=False, indent=2, sort_keys=True)
    logger.debug(f"写出JSON / wrote {path}")
    return path


def write_csv(frame: pd.DataFrame, path, float_format: Optional[str] = None) -> Path:
    """固定浮点格式 (默认17位有效数字)，保证同一输入逐字节相同"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=float_format or Config.FLOAT_FORMAT)
    logger.debug(f"写出CSV / wrote {path} ({len(frame)} rows)")
    return path


def package_versions() -> Dict[str, Optional[str]]:
    versions = {}
    for name in TRACKED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = None
    versions["python"] = platform.python_version()
    return versions


class RunClock:
    """记录一次运行的起止时间 / wall-clock timer for a run"""

    def __init__(self):
        self.started = datetime.now()
        self._t0 = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self._t0


def write_manifest(out_dir, command: str, config: Dict[str, Any], clock: RunClock,
                   outputs: Optional[Dict[str, Any]] = None, status: str = "ok") -> Path:
    """
    manifest.json: 命令、状态、配置回显、包版本、耗时、时间戳
    Run manifest with command, config echo, package versions and wall time
    """
    manifest = {
        "program": "planeflow",
        "command": command,
        "status": status,
        "config": config,
        "versions": package_versions(),
        "wall_time": clock.elapsed,
        "timestamp": clock.started.isoformat(timespec="seconds"),
        "outputs": outputs or {},
    }
    return write_json(manifest, Path(out_dir) / "manifest.json")
