import json
import logging

import pytest

from pupil_labs.rel_frobenius.logger import setup_logging
from pupil_labs.rel_frobenius.settings import GeneralSettings, load_settings, save_settings


def test_defaults():
    settings = GeneralSettings()
    assert settings.jobs == 1
    assert settings.log_level == "INFO"
    assert settings.to_dict()["chunk_size"] == 8192


@pytest.mark.parametrize(
    "kwargs",
    [{"jobs": 0}, {"chunk_size": 0}, {"log_level": "chatty"}],
)
def test_invalid_values_are_rejected(kwargs):
    with pytest.raises(ValueError):
        GeneralSettings(**kwargs)


def test_log_level_is_normalised():
    assert GeneralSettings(log_level="debug").log_level == "DEBUG"


def test_round_trip(tmp_path):
    path = tmp_path / "settings.json"
    settings = GeneralSettings(jobs=4, show_progress=False, log_to_file=True)
    save_settings(settings, path)
    assert json.loads(path.read_text())["jobs"] == 4
    assert load_settings(path) == settings


def test_missing_file_gives_defaults(tmp_path, caplog):
    with caplog.at_level(logging.WARNING):
        assert load_settings(tmp_path / "absent.json") == GeneralSettings()
    assert "Settings file not found" in caplog.text


def test_broken_file_gives_defaults(tmp_path, caplog):
    path = tmp_path / "settings.json"
    path.write_text("{not json")
    assert load_settings(path) == GeneralSettings()
    assert "Failed to load settings" in caplog.text


def test_unknown_keys_are_ignored(tmp_path, caplog):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"jobs": 2, "colour": "red"}))
    assert load_settings(path).jobs == 2
    assert "Ignoring unknown setting: colour" in caplog.text


def test_file_logging(tmp_path):
    root = logging.getLogger()
    setup_logging(GeneralSettings(log_to_file=True), "DEBUG", log_dir=tmp_path)
    try:
        tagged = [h for h in root.handlers if getattr(h, "_rel_frobenius", False)]
        assert len(tagged) == 2
        assert root.level == logging.DEBUG
        assert (tmp_path / "rel_frobenius.log").exists()

        setup_logging(GeneralSettings())
        tagged = [h for h in root.handlers if getattr(h, "_rel_frobenius", False)]
        assert len(tagged) == 1
    finally:
        for handler in [h for h in root.handlers if getattr(h, "_rel_frobenius", False)]:
            root.removeHandler(handler)
            handler.close()
