"""
环境变量管理

处理环境变量的加载，支持 .env 文件。
已存在的环境变量优先级高于 .env 文件中的值。
"""

import logging
import os
from dataclasses import asdict, dataclass
from typing import Dict, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

ENV_PREFIX = "CANAL4D_"
_TRUE_VALUES = ("true", "1", "yes", "on")
_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class AppSettings:
    """应用程序设置数据类"""

    log_level: str = "INFO"
    log_dir: str = "logs"
    quiet_console: bool = True
    workers: int = 1

    def to_dict(self) -> Dict:
        """转换为字典"""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "AppSettings":
        """从字典创建设置"""
        return cls(**data)


class EnvManager:
    """环境变量管理器 - 支持环境变量和 .env 文件"""

    def __init__(self, env_file: Optional[str] = None):
        """
        初始化环境变量管理器

        Args:
            env_file: .env 文件路径，默认在当前目录及其上级目录中查找
        """
        self.env_file = env_file
        self.load_environment()

    def load_environment(self):
        """加载环境变量"""
        loaded = load_dotenv(self.env_file, override=False)
        if loaded:
            logger.debug(f"已加载 .env 文件: {self.env_file or '.env'}")

    def get_str(self, name: str, default: str = "") -> str:
        value = os.getenv(ENV_PREFIX + name)
        return value.strip() if value is not None else default

    def get_bool(self, name: str, default: bool = False) -> bool:
        value = os.getenv(ENV_PREFIX + name)
        if value is None:
            return default
        return value.strip().lower() in _TRUE_VALUES

    def get_int(self, name: str, default: int = 0) -> int:
        value = os.getenv(ENV_PREFIX + name)
        if value is None:
            return default
        # 处理行内注释 (例如: 4 # 注释)
        value = value.split("#")[0].strip()
        try:
            return int(value)
        except ValueError:
            logger.warning(f"无效的整数配置 {ENV_PREFIX}{name}: {value}，使用默认值 {default}")
            return default

    def get_app_settings(self) -> AppSettings:
        """
        读取应用程序设置

        Returns:
            AppSettings: 来自 CANAL4D_LOG_LEVEL、CANAL4D_LOG_DIR、
                CANAL4D_QUIET、CANAL4D_WORKERS 的设置
        """
        defaults = AppSettings()
        level = self.get_str("LOG_LEVEL", defaults.log_level).upper()
        if level not in _LOG_LEVELS:
            logger.warning(f"无效的日志级别 {level}，使用 {defaults.log_level}")
            level = defaults.log_level

        workers = self.get_int("WORKERS", defaults.workers)
        if workers < 1:
            logger.warning(f"无效的线程数 {workers}，使用 1")
            workers = 1

        return AppSettings(
            log_level=level,
            log_dir=self.get_str("LOG_DIR", defaults.log_dir) or defaults.log_dir,
            quiet_console=self.get_bool("QUIET", defaults.quiet_console),
            workers=workers,
        )
