"""
日志管理模块
Logging management module
"""
import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from .config import Config

CONSOLE_FORMAT = ("<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
                  "<cyan>{extra[name]}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>")
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {thread.name} | {extra[name]}:{function}:{line} - {message}"

_handlers: List[int] = []


def setup_logging(level: Optional[str] = None, log_dir: Optional[str] = None) -> List[int]:
    """
    (重新)配置日志输出
    (Re)configure the log sinks

    控制台走 stderr，stdout 留给 rich 表格；文件日志按 10 MB 轮转。
    扫描时多个线程同时写，两个 sink 都 enqueue。

    Args:
        level: 日志级别，缺省取 Config.LOG_LEVEL
        log_dir: 日志目录，缺省取 Config.LOG_DIR

    Returns:
        新 sink 的 id
    """
    level = (level or Config.LOG_LEVEL).upper()
    folder = Path(log_dir or Config.LOG_DIR)
    folder.mkdir(parents=True, exist_ok=True)

    logger.remove()
    _handlers.clear()
    logger.configure(extra={"name": "planeflow"})

    _handlers.append(logger.add(sys.stderr, format=CONSOLE_FORMAT, level=level, colorize=True, enqueue=True))
    _handlers.append(logger.add(folder / "planeflow.log", rotation="10 MB", retention="7 days",
                                format=FILE_FORMAT, level=level, enqueue=True, encoding="utf-8"))
    return list(_handlers)


def get_logger(name: str = __name__):
    """
    获取logger实例
    Get logger instance

    Args:
        name: 模块名称 module name

    Returns:
        logger实例 logger instance
    """
    return logger.bind(name=name)


setup_logging()
