"""
配置管理模块

处理运行配置和环境变量管理。
"""

from .environment import AppSettings, EnvManager
from .settings import RunConfig, load_run_config

__all__ = ["AppSettings", "EnvManager", "RunConfig", "load_run_config"]
