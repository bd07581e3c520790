import math
import os
import sys

import pytest

# Ensure project root is on sys.path so `canal4d` and `main` can be imported
PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from canal4d.geometry.curves import CurveSpec, make_curve  # noqa: E402
from canal4d.geometry.frames import frame_curve  # noqa: E402

CONFIG_DIR = os.path.join(PROJECT_ROOT, "configs")
KAPPA_EXAMPLE = math.sqrt(2.92)


def straight_spine(lo: float = -1.5, hi: float = 2.5, h: float = 0.01):
    """沿 e₁ 的直线脊线及其标架（标架为 e₁..e₄）"""
    curve = make_curve(CurveSpec.line((0, 0, 0, 0), (1, 0, 0, 0), (lo, hi)))
    return frame_curve(curve, lo, hi, h)


@pytest.fixture(scope="session")
def torus_curve():
    return make_curve(CurveSpec.torus_curve(0.6, 0.4, 1.0, 2.0))


@pytest.fixture(scope="session")
def torus_framed(torus_curve):
    """示例脊线在 [0, 2π] 上、步长 1e-3 的标架"""
    return frame_curve(torus_curve, 0.0, 2.0 * math.pi, 1e-3)


@pytest.fixture(scope="session")
def torus_framed_coarse(torus_curve):
    """步长 1e-2 的标架，供曲面相关测试使用"""
    return frame_curve(torus_curve, 0.0, 2.0 * math.pi, 1e-2)


@pytest.fixture(scope="session")
def straight_framed():
    return straight_spine()


@pytest.fixture
def isolated_env(monkeypatch, tmp_path):
    """清除 CANAL4D_ 环境变量并把日志写入临时目录"""
    for key in list(os.environ):
        if key.startswith("CANAL4D_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.setenv("CANAL4D_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.chdir(tmp_path)
    return tmp_path
