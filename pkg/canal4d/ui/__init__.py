"""
用户界面模块
提供命令行参数解析和终端美化功能
"""

from canal4d.ui import terminal_ui
from canal4d.ui.cli import build_parser, parse_args

__all__ = ["build_parser", "parse_args", "terminal_ui"]
