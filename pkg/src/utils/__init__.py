"""
通用工具 - 配置、日志、实验文件与结果写出
Utils package - configuration, logging, experiment files and artifact writers
"""

from .artifacts import RunClock, convert_numpy_types, package_versions, write_csv, write_json, write_manifest
from .config import Config
from .experiment import (
    EXPERIMENT_KINDS,
    KNOWN_KEYS,
    ConfigError,
    ExperimentConfig,
    load_experiment,
    parse_floats,
    parse_range,
)
from .logger import get_logger, setup_logging

__all__ = [
    'Config', 'get_logger', 'setup_logging',
    'EXPERIMENT_KINDS', 'KNOWN_KEYS', 'ConfigError', 'ExperimentConfig', 'load_experiment', 'parse_floats',
    'parse_range',
    'RunClock', 'convert_numpy_types', 'package_versions', 'write_csv', 'write_json', 'write_manifest',
]
