"""
日志工具

日志初始化、运行上下文与检验结果的日志记录，以及网格采样的进度日志。
"""

import logging
import os
import platform
import sys
import threading
import time
from logging.handlers import RotatingFileHandler
from typing import Any, Dict, Iterable, Optional, Tuple

from colorama import Fore, Style

FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
CONSOLE_FORMAT = "%(levelname)s: %(message)s"


class LoggerUtils:
    """日志工具类"""

    @staticmethod
    def _get_log_directory(log_dir: str) -> str:
        """
        选择可写的日志目录：优先 log_dir，不可写时回退到 ~/.canal4d/<目录名>

        Args:
            log_dir: 日志目录（相对路径相对于当前工作目录）

        Returns:
            str: 日志目录的绝对路径
        """
        preferred = os.path.abspath(log_dir)
        try:
            os.makedirs(preferred, exist_ok=True)
            test_file = os.path.join(preferred, ".write_test")
            with open(test_file, "w") as f:
                f.write("ok")
            os.remove(test_file)
            return preferred
        except OSError:
            fallback = os.path.join(os.path.expanduser("~"), ".canal4d", os.path.basename(log_dir) or "logs")
            os.makedirs(fallback, exist_ok=True)
            return fallback

    @staticmethod
    def setup_logging(
        log_level: str = "INFO",
        log_dir: str = "logs",
        log_file: str = "canal4d.log",
        quiet_console: bool = True,
        max_bytes: int = 10 * 1024 * 1024,
        backup_count: int = 5,
    ) -> str:
        """
        配置根日志器：轮转文件日志 + stderr 控制台日志

        Args:
            log_level: 日志级别
            log_dir: 日志目录
            log_file: 日志文件名
            quiet_console: 控制台只显示 WARNING 及以上
            max_bytes: 单个日志文件最大字节数
            backup_count: 保留的备份文件数量

        Returns:
            str: 实际使用的日志文件路径
        """
        actual_log_dir = LoggerUtils._get_log_directory(log_dir)

        root_logger = logging.getLogger()
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)
            handler.close()

        level = getattr(logging, log_level.upper(), logging.INFO)
        root_logger.setLevel(level)

        log_file_path = os.path.join(actual_log_dir, log_file)
        file_handler = RotatingFileHandler(
            log_file_path, maxBytes=max_bytes, backupCount=backup_count, encoding="utf-8"
        )
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
        file_handler.setLevel(level)
        root_logger.addHandler(file_handler)

        console_handler = logging.StreamHandler(sys.stderr)
        if quiet_console:
            console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
            console_handler.setLevel(logging.WARNING)
        else:
            console_handler.setFormatter(ColoredFormatter(FILE_FORMAT))
            console_handler.setLevel(level)
        root_logger.addHandler(console_handler)

        logging.info(
            f"日志系统已初始化：目录={actual_log_dir}, 级别={log_level}, "
            f"最大={max_bytes / 1024 / 1024:.1f}MB, 备份={backup_count}"
        )
        return log_file_path

    @staticmethod
    def log_run_context(command: Optional[str] = None, **options: Any):
        """
        记录一次运行的上下文：子命令、运行选项与数值栈版本

        Args:
            command: 子命令名
            **options: 运行选项（strict、workers、config 等）
        """
        logging.info(f"=== canal4d {command} ===" if command else "=== canal4d ===")
        for key, value in options.items():
            logging.info(f"  {key} = {value}")
        logging.debug(f"平台: {platform.system()} {platform.release()}, Python {platform.python_version()}")
        try:
            import numpy
            import pandas
            import scipy

            logging.debug(f"numpy {numpy.__version__}, scipy {scipy.__version__}, pandas {pandas.__version__}")
        except ImportError as e:
            logging.warning(f"无法获取数值栈版本: {e}")

    @staticmethod
    def log_check_results(suite: str, report: Iterable[Dict[str, Any]]) -> Tuple[int, int, int]:
        """
        逐条记录检验结果并汇总

        通过的记为 INFO，未通过的记为 WARNING，仅供参考（pass 为 None）的记为 DEBUG。

        Args:
            suite: 套件名
            report: CheckResult.to_dict() 的列表

        Returns:
            Tuple[int, int, int]: (通过, 未通过, 仅供参考) 的条数
        """
        passed = failed = informational = 0
        for entry in report:
            residual = entry.get("max_residual")
            shown = "null" if residual is None else f"{residual:.3e}"
            line = f"[{suite}] {entry['check']}: max_residual={shown}, tolerance={entry.get('tolerance')}"
            if entry.get("pass") is True:
                passed += 1
                logging.info(f"{line} 通过")
            elif entry.get("pass") is False:
                failed += 1
                error = entry.get("params", {}).get("error")
                logging.warning(f"{line} 未通过" + (f"（{error}）" if error else ""))
            else:
                informational += 1
                logging.debug(f"{line} 仅供参考")
        logging.info(f"[{suite}] 通过 {passed}，未通过 {failed}，仅供参考 {informational}")
        return passed, failed, informational


class ProgressLogger:
    """进度日志器（可在多个采样线程中更新）"""

    def __init__(self, total_items: int, description: str = "采样进度"):
        """
        Args:
            total_items: 总项目数（曲面行数或网格数）
            description: 描述信息
        """
        self.total_items = max(total_items, 1)
        self.description = description
        self.current_item = 0
        self.logger = logging.getLogger(__name__)
        self._lock = threading.Lock()
        self._started = time.perf_counter()

    def update(self, increment: int = 1, message: str = ""):
        with self._lock:
            self.current_item += increment
            current = self.current_item
        msg = f"{self.description}: {current}/{self.total_items} ({current / self.total_items * 100:.1f}%)"
        if message:
            msg += f" - {message}"
        self.logger.debug(msg)

    @property
    def elapsed(self) -> float:
        """自创建以来的秒数"""
        return time.perf_counter() - self._started

    def finish(self, message: str = "完成"):
        self.logger.info(
            f"{self.description}: {self.current_item}/{self.total_items} - {message}，用时 {self.elapsed:.2f}s"
        )


class ColoredFormatter(logging.Formatter):
    """彩色日志格式化器（--verbose 时的控制台输出）"""

    COLORS = {
        "DEBUG": Fore.CYAN,
        "INFO": Fore.GREEN,
        "WARNING": Fore.YELLOW,
        "ERROR": Fore.RED,
        "CRITICAL": Fore.MAGENTA,
    }

    def format(self, record):
        original = record.levelname
        if original in self.COLORS:
            record.levelname = f"{self.COLORS[original]}{original}{Style.RESET_ALL}"
        try:
            return super().format(record)
        finally:
            record.levelname = original
