"""异常模块的单元测试"""

import pytest

from canal4d.exceptions import (
    BranchViolation,
    CanalGeometryError,
    ConfigError,
    FormulaMismatch,
    FrenetUndefined,
    InputError,
    Irregular,
    IoError,
    NonpositiveRadius,
    NumericalError,
    OutOfDomain,
    RankDeficient,
    StepTooLarge,
    TubeSingular,
    exit_code_for,
    friendly_error_message,
)


class TestExceptions:
    """测试异常类"""

    def test_base_exception(self):
        """测试基础异常"""
        exc = CanalGeometryError("测试错误")
        assert str(exc) == "测试错误"
        assert exc.message == "测试错误"

    def test_exception_with_details(self):
        """测试带详情的异常"""
        exc = CanalGeometryError("错误消息", details="详细信息")
        assert str(exc) == "错误消息 - 详细信息"

    @pytest.mark.parametrize("cls", [ConfigError, OutOfDomain, StepTooLarge, BranchViolation, IoError])
    def test_input_errors(self, cls):
        """输入类错误"""
        exc = cls("错误")
        assert isinstance(exc, InputError)
        assert isinstance(exc, CanalGeometryError)

    @pytest.mark.parametrize("cls", [Irregular, TubeSingular, FormulaMismatch])
    def test_numerical_errors(self, cls):
        """数值类错误"""
        assert isinstance(cls("错误"), NumericalError)

    def test_rank_deficient_step(self):
        """秩亏异常记录步数"""
        exc = RankDeficient(3, "u=1.0")
        assert exc.step == 3
        assert "第 3 步" in str(exc)
        assert isinstance(exc, NumericalError)

    def test_frenet_undefined_step(self):
        exc = FrenetUndefined(2)
        assert exc.step == 2
        assert exc.details == ""

    def test_nonpositive_radius_location(self):
        exc = NonpositiveRadius("半径非正", u=1.25)
        assert exc.u == 1.25


class TestExitCode:
    """测试退出码映射"""

    def test_input_error(self):
        assert exit_code_for(ConfigError("x")) == 1

    def test_numerical_error(self):
        assert exit_code_for(Irregular("x")) == 2

    def test_foreign_error(self):
        assert exit_code_for(ValueError("x")) == 1


class TestFriendlyErrorMessage:
    """测试友好错误信息"""

    def test_config_error(self):
        msg = friendly_error_message(ConfigError("缺少 curve 字段"))
        assert "配置文件有误" in msg
        assert "缺少 curve 字段" in msg

    def test_io_error(self):
        assert "文件读写失败" in friendly_error_message(IoError("无法写入", "/tmp/x"))

    def test_nonpositive_radius(self):
        msg = friendly_error_message(NonpositiveRadius("半径非正", u=1.5))
        assert "u=1.5" in msg

    def test_irregular(self):
        assert "不正则" in friendly_error_message(Irregular("W² 过小"))

    def test_formula_mismatch(self):
        assert "不一致" in friendly_error_message(FormulaMismatch("H 不一致"))

    def test_other_project_error(self):
        assert friendly_error_message(StepTooLarge("步长过大", "h=1")) == "步长过大 - h=1"

    def test_unknown_error(self):
        assert friendly_error_message(ValueError("boom")) == "ValueError: boom"
