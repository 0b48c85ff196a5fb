"""
实验配置文件
Experiment files

dotenv 格式的键值文件，一个文件描述一个实验。未知键、缺失的必需键和无法解析的值都是 ConfigError。
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from dotenv import dotenv_values

from .config import Config
from .logger import get_logger

logger = get_logger(__name__)

EXPERIMENT_KINDS = ("eval", "residual", "invariants", "moments", "wake", "solve", "sweep",
                    "analyze", "plot", "verify")

KNOWN_KEYS = (
    "EXPERIMENT", "OUTPUT_DIR", "SEED",
    "FIELD_KIND", "FIELD_PARAMS", "FIELD_OPTIONS", "POINTS",
    "OPERATOR", "NU",
    "RAY", "RAYS", "WINDOW", "N_SAMPLES",
    "RADIUS", "N_QUAD",
    "FORCE_SPEC",
    "GRID_R_INNER", "GRID_R_OUTER", "GRID_N_R", "GRID_N_THETA",
    "BC_C0", "BC_C1", "BC_INNER", "BC_OUTER",
    "FORCING_N", "FORCING_AMPLITUDE", "FORCING_EPS",
    "SOLVER_TOL", "SOLVER_ATOL", "SOLVER_MAX_ITER", "SOLVER_DAMPING",
    "SWEEP_MODE", "SWEEP_AXIS", "SWEEP_PARAM1", "SWEEP_PARAM2", "SWEEP_ORDER",
    "ANALYSIS_WINDOW", "ANALYSIS_FOLD",
    "SOLUTION", "SUITE",
)

REQUIRED_KEYS = {
    "eval": ("FIELD_KIND",),
    "residual": ("FIELD_KIND",),
    "invariants": ("FIELD_KIND",),
    "moments": ("FORCE_SPEC",),
    "wake": ("FIELD_PARAMS",),
    "solve": (),
    "sweep": ("SWEEP_PARAM1", "SWEEP_PARAM2"),
    "analyze": ("SOLUTION",),
    "plot": ("SOLUTION",),
    "verify": ("SUITE",),
}


class ConfigError(ValueError):
    """实验配置错误 Invalid experiment configuration"""


def parse_floats(text: str, key: str = "value") -> List[float]:
    """'1,2,3' 或 '1:2' -> [1.0, 2.0, 3.0]"""
    parts = [p for p in text.replace(":", ",").replace(";", ",").split(",") if p.strip()]
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"{key} 不是数值列表 / {key} is not a list of numbers: '{text}'") from None


def parse_range(text: str, key: str = "value") -> Tuple[float, ...]:
    """
    'start:stop:steps' 为含端点的等距序列，逗号列表原样使用
    'start:stop:steps' expands to steps+1 evenly spaced values; comma lists are taken as is
    """
    if text.count(":") == 2:
        start, stop, steps = text.split(":")
        try:
            start, stop, n = float(start), float(stop), int(steps)
        except ValueError:
            raise ConfigError(f"{key} 范围格式应为 start:stop:steps / bad range '{text}'") from None
        if n < 0:
            raise ConfigError(f"{key} 步数须非负 / steps must be non-negative: '{text}'")
        if n == 0:
            return (start,)
        return tuple(start + (stop - start) * i / n for i in range(n + 1))
    values = parse_floats(text, key)
    if not values:
        raise ConfigError(f"{key} 不能为空 / {key} must not be empty")
    return tuple(values)


@dataclass
class ExperimentConfig:
    """
    一个实验文件的内容
    Contents of one experiment file
    """
    experiment: str
    values: Dict[str, str] = field(default_factory=dict)
    source: Optional[str] = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_KINDS:
            raise ConfigError(f"未知实验类型 / unknown experiment '{self.experiment}'; "
                              f"choose one of {', '.join(EXPERIMENT_KINDS)}")
        unknown = sorted(set(self.values) - set(KNOWN_KEYS))
        if unknown:
            raise ConfigError(f"未知配置键 / unknown keys: {', '.join(unknown)}")
        missing = [k for k in REQUIRED_KEYS[self.experiment] if not self.values.get(k)]
        if missing:
            raise ConfigError(f"缺少必需键 / missing required keys for {self.experiment}: {', '.join(missing)}")

    @classmethod
    def from_mapping(cls, values: Dict[str, Optional[str]], source: Optional[str] = None) -> "ExperimentConfig":
        cleaned = {k.strip(): (v or "").strip() for k, v in values.items()}
        kind = cleaned.get("EXPERIMENT", "")
        if not kind:
            raise ConfigError("缺少 EXPERIMENT 键 / missing EXPERIMENT key")
        return cls(kind, cleaned, source)

    def has(self, key: str) -> bool:
        return bool(self.values.get(key))

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        if key not in KNOWN_KEYS:
            raise ConfigError(f"未知配置键 / unknown key {key}")
        value = self.values.get(key)
        return value if value else default

    def get_float(self, key: str, default: Optional[float] = None) -> Optional[float]:
        value = self.get(key)
        if value is None:
            return default
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"{key} 应为实数 / {key} must be a real number, got '{value}'") from None

    def get_int(self, key: str, default: Optional[int] = None) -> Optional[int]:
        value = self.get(key)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key} 应为整数 / {key} must be an integer, got '{value}'") from None

    def get_floats(self, key: str, length: Optional[int] = None,
                   default: Optional[Tuple[float, ...]] = None) -> Optional[Tuple[float, ...]]:
        value = self.get(key)
        if value is None:
            return default
        values = tuple(parse_floats(value, key))
        if length is not None and len(values) != length:
            raise ConfigError(f"{key} 需要 {length} 个数 / {key} needs {length} numbers, got {len(values)}")
        return values

    def get_window(self, key: str, default: Tuple[float, float]) -> Tuple[float, float]:
        window = self.get_floats(key, 2, default)
        if not 0.0 < window[0] < window[1]:
            raise ConfigError(f"{key} 须满足 0 < rmin < rmax / {key} must satisfy 0 < rmin < rmax")
        return float(window[0]), float(window[1])

    def get_range(self, key: str) -> Tuple[float, ...]:
        value = self.get(key)
        if value is None:
            raise ConfigError(f"缺少 {key} / missing {key}")
        return parse_range(value, key)

    @property
    def seed(self) -> int:
        return self.get_int("SEED", Config.SEED)

    @property
    def output_dir(self) -> str:
        return self.get("OUTPUT_DIR", Config.OUTPUT_DIR)

    def sweep_order(self) -> str:
        """SWEEP_AXIS=param1 等价于 SWEEP_ORDER=param1-first"""
        order = self.get("SWEEP_ORDER")
        axis = self.get("SWEEP_AXIS")
        if axis is not None:
            if axis not in ("param1", "param2"):
                raise ConfigError(f"SWEEP_AXIS 应为 param1 或 param2 / bad SWEEP_AXIS '{axis}'")
            if order is not None and order != f"{axis}-first":
                raise ConfigError(f"SWEEP_AXIS={axis} 与 SWEEP_ORDER={order} 冲突 / conflicting sweep order")
            return f"{axis}-first"
        return order or "param1-first"

    def to_dict(self) -> Dict[str, object]:
        return {"experiment": self.experiment, "source": self.source, "values": dict(sorted(self.values.items()))}


def load_experiment(path) -> ExperimentConfig:
    """
    读取 dotenv 格式实验文件
    Load a dotenv-format experiment file
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"实验文件不存在 / experiment file not found: {path}")
    values = dotenv_values(path)
    logger.info(f"加载实验配置 / loaded experiment file {path} ({len(values)} keys)")
    return ExperimentConfig.from_mapping(dict(values), str(path))
