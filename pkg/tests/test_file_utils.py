import json
import os

import pytest

from canal4d.exceptions import IoError
from canal4d.utils.file_utils import FileUtils


def test_ensure_directory_exists_creates(tmp_path):
    target_dir = tmp_path / "a" / "b"
    assert not target_dir.exists()

    FileUtils.ensure_directory_exists(str(target_dir))

    assert target_dir.is_dir()


def test_ensure_directory_exists_ignores_empty_path():
    # 空路径表示当前目录，不做任何事
    FileUtils.ensure_directory_exists("")


def test_ensure_directory_exists_rejects_file(tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x", encoding="utf-8")
    with pytest.raises(IoError):
        FileUtils.ensure_directory_exists(str(blocker))


def test_write_text_uses_lf_and_creates_parent(tmp_path):
    path = tmp_path / "out" / "note.txt"
    FileUtils.write_text(str(path), "第一行\n第二行\n")
    assert path.read_bytes() == "第一行\n第二行\n".encode("utf-8")


def test_write_text_into_file_path_fails(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("x", encoding="utf-8")
    with pytest.raises(IoError):
        FileUtils.write_text(os.path.join(str(blocker), "child.txt"), "content")


def test_write_json(tmp_path):
    path = tmp_path / "data.json"
    FileUtils.write_json(str(path), {"名称": "figure1", "nu": 60})
    assert json.loads(path.read_text(encoding="utf-8")) == {"名称": "figure1", "nu": 60}


def test_safe_filename():
    assert FileUtils.safe_filename('fig:1/a*b?.obj') == "fig_1_a_b_.obj"
    assert FileUtils.safe_filename("...") == "unnamed"
