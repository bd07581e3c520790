"""
终端界面美化模块
提供颜色、面板、表格等输出功能
"""

import math
from typing import Iterable, List, Optional

import colorama
from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from canal4d import __version__

# 初始化 colorama（Windows 兼容）
colorama.init()

# 结果输出到标准输出，日志走标准错误
console = Console()


class Colors:
    """自定义颜色方案"""

    SUCCESS = "#4ade80"  # 绿色
    WARNING = "#fbbf24"  # 黄色
    ERROR = "#f87171"  # 红色
    MUTED = "#9ca3af"  # 浅灰


class Icons:
    """Unicode 图标"""

    SUCCESS = "✅"
    ERROR = "❌"
    WARNING = "⚠️"
    DATA = "📊"
    FOLDER = "📁"
    CHECKMARK = "✓"
    CROSS = "✗"


def _panel_message(message: str, icon: str, color: str):
    text = Text()
    text.append(f"{icon} {message}", style=f"bold {color}")
    console.print(Panel(text, border_style=color, box=box.ROUNDED, padding=(0, 1)))


def print_success(message: str):
    """打印成功信息"""
    _panel_message(message, Icons.SUCCESS, Colors.SUCCESS)


def print_error(message: str):
    """打印错误信息"""
    _panel_message(message, Icons.ERROR, Colors.ERROR)


def print_warning(message: str):
    """打印警告信息"""
    _panel_message(message, Icons.WARNING, Colors.WARNING)


def print_welcome(command: str):
    """打印程序标题"""
    title = Text(f"canal4d {__version__}", style="bold bright_white")
    title.append(f"  ·  {command}", style=Colors.MUTED)
    console.print(Panel(title, box=box.ROUNDED, border_style="bright_cyan", expand=False))


def _fmt_value(value: Optional[float]) -> str:
    if value is None:
        return "-"
    if isinstance(value, float) and math.isnan(value):
        return "NaN"
    return f"{value:.3e}"


def _status(passed: Optional[bool]) -> str:
    if passed is None:
        return "[dim]参考[/dim]"
    if passed:
        return f"[bold green]{Icons.CHECKMARK} 通过[/bold green]"
    return f"[bold red]{Icons.CROSS} 未通过[/bold red]"


def print_check_table(results: Iterable[dict], title: str = "检验结果"):
    """
    使用表格显示检验结果

    Args:
        results: CheckResult.to_dict() 的序列
        title: 面板标题
    """
    rows: List[dict] = list(results)
    table = Table(show_header=True, header_style="bold cyan", box=None, padding=(0, 1))
    table.add_column("检验", style="white")
    table.add_column("最大残差", justify="right")
    table.add_column("阈值", justify="right", style=Colors.MUTED)
    table.add_column("结果", justify="center")

    for row in rows:
        table.add_row(
            row["check"],
            _fmt_value(row["max_residual"]),
            _fmt_value(row["tolerance"]),
            _status(row["pass"]),
        )

    failed = sum(1 for row in rows if row["pass"] is False)
    panel = Panel(
        table,
        title=f"[bold]{Icons.DATA} {title}[/bold]",
        subtitle=f"[dim]共 {len(rows)} 项 | 未通过 {failed} 项[/dim]",
        border_style=Colors.ERROR if failed else Colors.SUCCESS,
        box=box.ROUNDED,
        padding=(0, 1),
    )
    console.print(panel)


def print_mesh_summary(
    path: str,
    vertices: int,
    faces: int,
    irregular: int = 0,
    extra: Optional[dict] = None,
):
    """显示网格导出摘要面板"""
    summary = Text()
    summary.append(f"{Icons.FOLDER} 输出文件: ", style="bold yellow")
    summary.append(f"{path}\n", style="white")
    summary.append("  • 顶点数: ", style="white")
    summary.append(f"{vertices}\n", style="bold cyan")
    summary.append("  • 三角面: ", style="white")
    summary.append(f"{faces}", style="bold cyan")
    if irregular:
        summary.append("\n  • 不正则点: ", style="white")
        summary.append(f"{irregular}", style="bold red")
    for key, value in (extra or {}).items():
        summary.append(f"\n  • {key}: ", style="white")
        summary.append(str(value), style="bold cyan")

    console.print(
        Panel(summary, title="[bold]网格导出完成[/bold]", border_style=Colors.SUCCESS, box=box.ROUNDED, padding=(0, 2))
    )
