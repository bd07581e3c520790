import logging
import os
import threading

from canal4d.utils.logger_utils import ColoredFormatter, LoggerUtils, ProgressLogger


def test_get_log_directory_and_setup_logging(tmp_path, monkeypatch):
    # 强制在当前工作目录下创建日志目录
    monkeypatch.chdir(tmp_path)

    log_dir = LoggerUtils._get_log_directory("logs")
    assert os.path.isdir(log_dir)

    log_path = LoggerUtils.setup_logging(log_level="DEBUG", log_dir="logs", log_file="test.log")
    assert log_path == os.path.join(log_dir, "test.log")

    logger = logging.getLogger("canal4d.test")
    logger.debug("debug message")
    for handler in logging.getLogger().handlers:
        handler.flush()
    with open(log_path, encoding="utf-8") as f:
        assert "debug message" in f.read()


def test_quiet_console_only_shows_warnings(tmp_path):
    LoggerUtils.setup_logging(log_level="INFO", log_dir=str(tmp_path / "logs"), quiet_console=True)
    root = logging.getLogger()
    console = [h for h in root.handlers if type(h) is logging.StreamHandler]
    assert console and console[0].level == logging.WARNING


def test_setup_logging_replaces_handlers(tmp_path):
    LoggerUtils.setup_logging(log_dir=str(tmp_path / "a"))
    LoggerUtils.setup_logging(log_dir=str(tmp_path / "b"))
    # 一个文件处理器加一个控制台处理器
    assert len(logging.getLogger().handlers) == 2


def test_unwritable_log_directory_falls_back(tmp_path, monkeypatch):
    blocker = tmp_path / "blocker"
    blocker.write_text("x", encoding="utf-8")
    monkeypatch.setenv("HOME", str(tmp_path / "home"))

    log_dir = LoggerUtils._get_log_directory(str(blocker / "logs"))

    assert log_dir == os.path.join(str(tmp_path / "home"), ".canal4d", "logs")
    assert os.path.isdir(log_dir)


def test_log_run_context_records_options(tmp_path):
    log_path = LoggerUtils.setup_logging(log_level="DEBUG", log_dir=str(tmp_path / "logs"))
    LoggerUtils.log_run_context("surface", strict=True, workers=3)
    for handler in logging.getLogger().handlers:
        handler.flush()
    with open(log_path, encoding="utf-8") as f:
        text = f.read()
    assert "=== canal4d surface ===" in text
    assert "strict = True" in text
    assert "workers = 3" in text
    assert "numpy" in text


def test_log_check_results_counts_and_levels(caplog):
    report = [
        {"check": "equivalence.K", "max_residual": 1e-9, "tolerance": 1e-5, "pass": True, "params": {}},
        {"check": "flat", "max_residual": 0.2, "tolerance": 1e-9, "pass": False, "params": {}},
        {"check": "weingarten.jacobian", "max_residual": 0.3, "tolerance": None, "pass": None, "params": {}},
        {
            "check": "collapse.tube",
            "max_residual": None,
            "tolerance": 1e-12,
            "pass": False,
            "params": {"error": "WrongMode"},
        },
    ]
    with caplog.at_level(logging.DEBUG):
        counts = LoggerUtils.log_check_results("equivalence", report)
    assert counts == (1, 2, 1)
    warnings = [r.getMessage() for r in caplog.records if r.levelno == logging.WARNING]
    assert len(warnings) == 2
    assert any("max_residual=null" in w and "WrongMode" in w for w in warnings)
    assert "通过 1，未通过 2，仅供参考 1" in caplog.records[-1].getMessage()


def test_progress_logger_is_thread_safe():
    progress = ProgressLogger(400, "曲面采样")

    def work():
        for _ in range(100):
            progress.update()

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert progress.current_item == 400
    assert progress.elapsed >= 0.0
    progress.finish()


def test_progress_logger_zero_total():
    progress = ProgressLogger(0)
    assert progress.total_items == 1


def test_colored_formatter_restores_levelname():
    formatter = ColoredFormatter("%(levelname)s: %(message)s")
    record = logging.LogRecord("x", logging.WARNING, __file__, 1, "msg", None, None)
    text = formatter.format(record)
    assert "\033[33m" in text
    assert record.levelname == "WARNING"
