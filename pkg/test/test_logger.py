import pytest

from timelaw import set_logger
from timelaw._logger._null_logger import NullLogger
from timelaw.cli import main


class Test_set_logger:
    @pytest.mark.parametrize(["value"], [[True], [False]])
    def test_smoke(self, value):
        set_logger(value)


class Test_NullLogger:
    @pytest.mark.parametrize(["value"], [[True], [False]])
    def test_smoke(self, value, monkeypatch):
        monkeypatch.setattr("timelaw._logger._logger.logger", NullLogger())
        set_logger(value)

    def test_smoke_verbose_run(self, tmp_path, monkeypatch):
        monkeypatch.setattr("timelaw.cli.logger", NullLogger())
        config = tmp_path / "config.json"
        config.write_text(
            '{"curve": {"kind": "line", "params": {"k": 0}}, "alpha": 0.1, "p0": 0, "p1": 1}'
        )

        assert main(["validate", "--config", str(config), "--out-dir", str(tmp_path), "-vv"]) == 0
        set_logger(False)
