"""
配置管理模块
Configuration management module
"""
import os
from dotenv import load_dotenv

# 加载环境变量
load_dotenv()


class Config:
    """配置类 Configuration class"""

    # 日志配置 Logging configuration
    LOG_LEVEL: str = os.getenv('LOG_LEVEL', 'INFO')
    LOG_DIR: str = os.getenv('LOG_DIR', './logs')

    # 输出配置 Output configuration
    OUTPUT_DIR: str = os.getenv('OUTPUT_DIR', './results')
    FLOAT_FORMAT: str = os.getenv('PLANEFLOW_FLOAT_FORMAT', '%.17g')

    # 运行配置 Run configuration
    JOBS: int = int(os.getenv('PLANEFLOW_JOBS', '1'))
    SEED: int = int(os.getenv('PLANEFLOW_SEED', '0'))
    PROFILE: str = os.getenv('PLANEFLOW_PROFILE', 'desk')

    # 求解器默认值 Solver defaults
    SOLVER_TOL: float = float(os.getenv('PLANEFLOW_SOLVER_TOL', '1e-10'))
    SOLVER_ATOL: float = float(os.getenv('PLANEFLOW_SOLVER_ATOL', '1e-11'))
    SOLVER_MAX_ITER: int = int(os.getenv('PLANEFLOW_SOLVER_MAX_ITER', '30'))

    LOG_LEVELS = ('TRACE', 'DEBUG', 'INFO', 'SUCCESS', 'WARNING', 'ERROR', 'CRITICAL')

    @classmethod
    def validate_config(cls) -> bool:
        """
        验证配置是否合法
        Validate configuration values
        """
        problems = []
        if cls.LOG_LEVEL.upper() not in cls.LOG_LEVELS:
            problems.append(f"LOG_LEVEL={cls.LOG_LEVEL}")
        if cls.JOBS < 1:
            problems.append(f"PLANEFLOW_JOBS={cls.JOBS}")
        if cls.PROFILE not in ('smoke', 'desk', 'full'):
            problems.append(f"PLANEFLOW_PROFILE={cls.PROFILE}")
        if not 0 < cls.SOLVER_TOL < 1:
            problems.append(f"PLANEFLOW_SOLVER_TOL={cls.SOLVER_TOL}")

        if problems:
            print(f"非法的配置项: {', '.join(problems)}")
            print("Invalid configuration values:", ', '.join(problems))
            return False

        return True

    @classmethod
    def get_output_config(cls) -> dict:
        """获取输出配置 Get output configuration"""
        return {
            'output_dir': cls.OUTPUT_DIR,
            'float_format': cls.FLOAT_FORMAT,
        }

    @classmethod
    def get_solver_defaults(cls) -> dict:
        """获取求解器默认配置 Get solver defaults"""
        return {
            'tol': cls.SOLVER_TOL,
            'atol': cls.SOLVER_ATOL,
            'max_iter': cls.SOLVER_MAX_ITER,
        }
