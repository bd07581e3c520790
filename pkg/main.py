#!/usr/bin/env python3
"""
四维欧氏空间运河曲面工具

主程序入口点：frame / surface / check / figures 四个子命令。

退出码：0 成功，1 输入错误，2 数值失败（--strict 下遇到不正则点或检验未通过）。
"""

import logging
import os
import sys
from typing import List, Optional

from canal4d.config import AppSettings, EnvManager, RunConfig, load_run_config
from canal4d.exceptions import (
    CanalGeometryError,
    Irregular,
    TubeSingular,
    exit_code_for,
    friendly_error_message,
)
from canal4d.utils import LoggerUtils

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2


class Canal4dApp:
    """运河曲面应用主类"""

    def __init__(
        self,
        env_manager: Optional[EnvManager] = None,
        settings: Optional[AppSettings] = None,
    ):
        """初始化应用

        Args:
            env_manager: 环境管理器实例（可选，默认创建新实例）
            settings: 应用设置（可选，默认从环境变量读取）
        """
        self.env_manager = env_manager if env_manager is not None else EnvManager()
        self.settings = settings if settings is not None else self.env_manager.get_app_settings()
        self.strict = False
        self.workers = self.settings.workers

    def initialize(
        self,
        verbose: bool = False,
        strict: bool = False,
        workers: Optional[int] = None,
        command: Optional[str] = None,
    ):
        """
        初始化日志与运行选项

        Args:
            verbose: 控制台输出详细日志
            strict: 严格模式
            workers: 命令行指定的采样线程数，覆盖环境变量
            command: 子命令名（记入运行上下文日志）
        """
        LoggerUtils.setup_logging(
            log_level="DEBUG" if verbose else self.settings.log_level,
            log_dir=self.settings.log_dir,
            quiet_console=self.settings.quiet_console and not verbose,
        )
        self.strict = strict
        if workers is not None:
            if workers < 1:
                logger.warning(f"无效的线程数 {workers}，使用 1")
                workers = 1
            self.workers = workers
        LoggerUtils.log_run_context(command, strict=self.strict, workers=self.workers)

    # ------------------------------------------------------------ 子命令

    def run_frame(self, config_path: str, out: str) -> int:
        """积分标架并写出 CSV"""
        from canal4d.meshio.writers import write_framed_csv
        from canal4d.ui.terminal_ui import print_success

        config = load_run_config(config_path)
        fc = config.build_framed_curve()
        write_framed_csv(fc, out)

        defect = max(fc.frame(i).orthonormality_defect() for i in range(len(fc)))
        logger.info(f"标架最大正交性偏差 {defect:.3e}，积分漂移 {fc.max_drift:.3e}")
        print_success(f"标架已写入 {out}（{len(fc)} 个节点，最大正交性偏差 {defect:.2e}）")
        return EXIT_OK

    def run_surface(
        self,
        config_path: str,
        out: str,
        fields: Optional[str] = None,
        points: Optional[str] = None,
    ) -> int:
        """采样曲面，写出 OBJ 网格及可选的曲率场与点文件"""
        from canal4d.meshio.sampling import build_mesh, sample_patch
        from canal4d.meshio.writers import write_csv_fields, write_obj, write_points
        from canal4d.ui.terminal_ui import print_mesh_summary, print_warning

        config = load_run_config(config_path)
        fc = config.build_framed_curve()
        grid = config.grid_spec(fc)
        rad = config.build_radius(grid)

        with_curvature = fields is not None or self.strict
        sample = sample_patch(fc, rad, grid, with_curvature=with_curvature, workers=self.workers)
        mesh = build_mesh(sample)
        write_obj(mesh, out)
        if fields is not None:
            write_csv_fields(sample, fields)
        if points is not None:
            write_points(sample, points)

        print_mesh_summary(out, len(mesh.vertices), len(mesh.faces), sample.irregular_count)
        if self.strict:
            if sample.irregular_count:
                print_warning(f"严格模式：曲面有 {sample.irregular_count} 个不正则点")
                return EXIT_NUMERICAL
            self._check_scalar_formula(config, fc, rad, grid)
        return EXIT_OK

    def _check_scalar_formula(self, config: RunConfig, fc, rad, grid):
        """严格模式下逐点比较 |H⃗| 与标量公式，不一致时抛出 FormulaMismatch"""
        from canal4d.geometry.canal import mean_scalar, surface_jet

        for u in grid.us:
            for v in grid.vs:
                try:
                    mean_scalar(surface_jet(fc, rad, float(u), float(v)), "general")
                except (Irregular, TubeSingular):
                    continue
        logger.info(f"标量平均曲率公式一致性检验通过（{config.source}）")

    def run_check(self, config_path: str, suite: str, out: str) -> int:
        """运行检验套件并写出 JSON 报告"""
        from canal4d.analysis.suites import SuiteContext, run_suite
        from canal4d.meshio.writers import write_report
        from canal4d.ui.terminal_ui import print_check_table

        config = load_run_config(config_path)
        fc = config.build_framed_curve()
        grid = config.grid_spec(fc)
        rad = config.build_radius(grid)
        ctx = SuiteContext(
            fc=fc,
            rad=rad,
            grid=grid,
            oracle=config.oracle.to_oracle_config(),
            k=config.checks.k,
            weingarten_tol=config.checks.weingarten_tol,
            oracle_tol=config.checks.oracle_tol,
            minimal_params=config.radius.minimal_params,
            workers=self.workers,
        )

        report = [r.to_dict() for r in run_suite(suite, ctx)]
        write_report(report, out)
        LoggerUtils.log_check_results(suite, report)
        print_check_table(report, title=f"检验套件 {suite}")

        if self.strict and any(r["pass"] is False for r in report):
            return EXIT_NUMERICAL
        return EXIT_OK

    def run_figures(self, out_dir: str) -> int:
        """生成示例图网格"""
        from canal4d.meshio.figures import generate_figures
        from canal4d.ui.terminal_ui import print_mesh_summary, print_success

        entries = generate_figures(out_dir, workers=self.workers)
        for entry in entries:
            print_mesh_summary(
                os.path.join(out_dir, entry["obj"]),
                entry["vertices"],
                entry["faces"],
                extra={"半径": entry["radius_expr"], "u 窗口": entry["u_range"]},
            )
        print_success(f"已生成 {len(entries)} 个示例网格，清单见 {os.path.join(out_dir, 'manifest.json')}")
        return EXIT_OK

    def run(self, args) -> int:
        """按子命令分发"""
        from canal4d.ui.terminal_ui import print_welcome

        if not self.settings.quiet_console:
            print_welcome(args.command)
        if args.command == "frame":
            return self.run_frame(args.config, args.out)
        if args.command == "surface":
            return self.run_surface(args.config, args.out, args.fields, args.points)
        if args.command == "check":
            return self.run_check(args.config, args.suite, args.out)
        if args.command == "figures":
            return self.run_figures(args.out)
        raise ValueError(f"未知的子命令: {args.command}")


def main(argv: Optional[List[str]] = None) -> int:
    """
    主程序入口

    Args:
        argv: 命令行参数，默认取 sys.argv[1:]

    Returns:
        int: 退出码
    """
    from canal4d.ui.cli import parse_args
    from canal4d.ui.terminal_ui import print_error, print_warning

    try:
        args = parse_args(argv)
    except SystemExit as e:
        # argparse 的用法错误按输入错误处理
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT

    try:
        app = Canal4dApp()
        app.initialize(verbose=args.verbose, strict=args.strict, workers=args.workers, command=args.command)
        return app.run(args)
    except CanalGeometryError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print_error(friendly_error_message(e))
        return exit_code_for(e)
    except KeyboardInterrupt:
        print_warning("用户取消操作，程序退出")
        return EXIT_INPUT
    except Exception as e:
        logger.exception(f"程序运行时发生未捕获的异常: {e}")
        print_error(f"程序运行出错: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
