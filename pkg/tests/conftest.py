import numpy as np
import pytest

from src.fields import AnalyticField, FieldKind
from src.solver import AnnularGrid, NewtonOptions


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def far_points(rng):
    """r ∈ [4, 1e4]，log r 与 θ 均匀"""
    r = np.exp(rng.uniform(np.log(4.0), np.log(1e4), 200))
    th = rng.uniform(-np.pi, np.pi, 200)
    return np.stack([r * np.cos(th), r * np.sin(th)], axis=1)


@pytest.fixture
def hamel():
    return AnalyticField.create(FieldKind.HAMEL, A=1.0, mu=0.5)


@pytest.fixture
def coarse_grid():
    return AnnularGrid(1.0, 20.0, 17, 32)


@pytest.fixture
def small_grid():
    return AnnularGrid(1.0, 50.0, 25, 48)


@pytest.fixture
def quick_newton():
    return NewtonOptions(tol=1e-9, atol=1e-11, max_iter=20)


@pytest.fixture
def write_cfg(tmp_path):
    """写一个dotenv格式的实验文件"""
    def write(name, **values):
        path = tmp_path / name
        path.write_text("".join(f"{k}={v}\n" for k, v in values.items()), encoding="utf-8")
        return path
    return write
