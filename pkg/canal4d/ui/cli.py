"""
命令行参数解析

子命令：frame、surface、check、figures；全局选项 --strict、--verbose、--workers。
"""

import argparse
from typing import List, Optional

from canal4d import __version__
from canal4d.analysis.suites import SUITES


def build_parser() -> argparse.ArgumentParser:
    """构造命令行解析器"""
    parser = argparse.ArgumentParser(
        prog="canal4d",
        description="四维欧氏空间运河曲面：平行传输标架、曲率检验与网格导出",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--strict",
        action="store_true",
        help="遇到不正则点、公式不一致或检验未通过时以退出码 2 结束",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="在控制台输出详细日志")
    parser.add_argument("--workers", type=int, default=None, help="网格采样线程数（默认取 CANAL4D_WORKERS）")

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    frame = sub.add_parser("frame", help="积分平行传输标架并导出 CSV")
    frame.add_argument("--config", required=True, help="运行配置 JSON")
    frame.add_argument("--out", required=True, help="标架 CSV 输出路径")

    surface = sub.add_parser("surface", help="采样曲面并导出 OBJ 网格")
    surface.add_argument("--config", required=True, help="运行配置 JSON")
    surface.add_argument("--out", required=True, help="OBJ 输出路径")
    surface.add_argument("--fields", default=None, help="曲率场 CSV 输出路径（可选）")
    surface.add_argument("--points", default=None, help="gnuplot 点文件输出路径（可选）")

    check = sub.add_parser("check", help="运行检验套件并写出 JSON 报告")
    check.add_argument("--config", required=True, help="运行配置 JSON")
    check.add_argument("--suite", required=True, choices=list(SUITES), help="检验套件")
    check.add_argument("--out", required=True, help="JSON 报告输出路径")

    figures = sub.add_parser("figures", help="生成示例图的 OBJ 网格")
    figures.add_argument("--out", required=True, help="输出目录")

    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """
    解析命令行参数

    Args:
        argv: 参数列表，默认取 sys.argv[1:]

    Returns:
        argparse.Namespace: 解析结果
    """
    return build_parser().parse_args(argv)
