"""
工作流模块 - 把实验配置落实为一次完整运行
Workflow Module - runs one experiment end to end
"""

from .executor import (
    ExperimentExecutor,
    ExperimentOutcome,
    analysis_window,
    build_boundary,
    build_forcing,
    build_grid,
    build_newton,
    build_operator,
    build_plan,
    build_source,
    parse_points,
)

__all__ = [
    'ExperimentExecutor', 'ExperimentOutcome', 'analysis_window', 'build_boundary', 'build_forcing',
    'build_grid', 'build_newton', 'build_operator', 'build_plan', 'build_source', 'parse_points',
]
