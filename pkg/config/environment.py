#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
分辨率档位配置模块
Resolution profile configuration module
"""

import os
from typing import Dict, Any


class EnvironmentConfig:
    """分辨率档位配置类"""

    # 档位类型
    SMOKE = "smoke"
    DESK = "desk"
    FULL = "full"

    def __init__(self):
        # 从环境变量获取当前档位，默认为desk
        self.profile = os.getenv('PLANEFLOW_PROFILE', self.DESK)

        # 档位配置
        self.config = {
            self.SMOKE: {
                'r_outer': 100.0,
                'n_r': 48,
                'n_theta': 96,
                'fit_window': (5.0, 50.0),
            },
            self.DESK: {
                'r_outer': 1.0e3,
                'n_r': 192,
                'n_theta': 384,
                'fit_window': (30.0, 300.0),
            },
            self.FULL: {
                'r_outer': 1.0e5,
                'n_r': 226,
                'n_theta': 452,
                'fit_window': (3.0e2, 3.0e4),
            },
        }

    def get_config(self) -> Dict[str, Any]:
        """获取当前档位配置"""
        return self.config.get(self.profile, self.config[self.DESK])

    def get_grid_defaults(self) -> Dict[str, Any]:
        """获取默认网格参数"""
        cfg = self.get_config()
        return {'r_outer': cfg['r_outer'], 'n_r': cfg['n_r'], 'n_theta': cfg['n_theta']}

    def get_fit_window(self) -> tuple:
        """获取默认拟合窗口"""
        return self.get_config()['fit_window']

    def get_profile(self) -> str:
        """获取当前档位名称"""
        return self.profile


# 全局档位配置实例
env_config = EnvironmentConfig()


# 便捷函数
def get_grid_defaults() -> Dict[str, Any]:
    """获取默认网格参数"""
    return env_config.get_grid_defaults()


def get_fit_window() -> tuple:
    """获取默认拟合窗口"""
    return env_config.get_fit_window()


def get_profile() -> str:
    """获取当前档位名称"""
    return env_config.get_profile()
