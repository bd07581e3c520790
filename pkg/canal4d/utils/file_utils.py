"""
文件操作工具

提供输出文件与目录操作的工具函数，失败时统一抛出 IoError。
"""

import json
import logging
import os
from typing import Any

from canal4d.exceptions import IoError

logger = logging.getLogger(__name__)


class FileUtils:
    """文件操作工具类"""

    @staticmethod
    def ensure_directory_exists(directory: str):
        """
        确保目录存在，如果不存在则创建

        Args:
            directory: 目录路径

        Raises:
            IoError: 路径被普通文件占用或无法创建
        """
        if not directory:
            return
        if os.path.exists(directory):
            if not os.path.isdir(directory):
                raise IoError("输出路径已存在且不是目录", directory)
            return
        try:
            os.makedirs(directory, exist_ok=True)
            logger.info(f"创建目录: {directory}")
        except OSError as e:
            raise IoError("创建目录失败", f"{directory}: {e}")

    @staticmethod
    def ensure_parent_dir(file_path: str):
        """确保文件所在目录存在"""
        FileUtils.ensure_directory_exists(os.path.dirname(os.path.abspath(file_path)))

    @staticmethod
    def write_text(file_path: str, content: str):
        """
        以 UTF-8 与 LF 换行写入文本文件

        Args:
            file_path: 文件路径
            content: 文件内容
        """
        FileUtils.ensure_parent_dir(file_path)
        try:
            with open(file_path, "w", encoding="utf-8", newline="\n") as f:
                f.write(content)
        except OSError as e:
            raise IoError("写入文件失败", f"{file_path}: {e}")
        logger.debug(f"已写入文件: {file_path} ({len(content)} 字符)")

    @staticmethod
    def write_json(file_path: str, data: Any):
        """写入带缩进的 JSON 文件"""
        FileUtils.write_text(file_path, json.dumps(data, ensure_ascii=False, indent=2) + "\n")

    @staticmethod
    def safe_filename(filename: str) -> str:
        """
        生成安全的文件名（替换非法字符）

        Args:
            filename: 原文件名

        Returns:
            str: 安全的文件名
        """
        safe_name = filename
        for char in '<>:"/\\|?* ':
            safe_name = safe_name.replace(char, "_")
        safe_name = safe_name.strip("._")
        return safe_name or "unnamed"
