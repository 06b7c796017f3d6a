import json

import pytest

from milnorkit.core.constants import DEFAULT_SAMPLES, THREADS_ENV_VAR
from milnorkit.core.exceptions import InputError
from milnorkit.core.models import AppConfig
from milnorkit.services import ConfigManager


def _write(path, settings):
    path.write_text(json.dumps({"app_settings": settings}), encoding="utf-8")
    return path


def test_defaults_without_file(tmp_path):
    config = ConfigManager(tmp_path / "absent.json", environ={}).load_config()
    assert config == AppConfig()


def test_file_then_environment(tmp_path):
    path = _write(tmp_path / "milnorkit.json", {"samples": 7, "threads": 2})
    config = ConfigManager(path, environ={THREADS_ENV_VAR: "5"}).load_config()
    assert config.samples == 7
    assert config.threads == 5


def test_cli_overrides_win(tmp_path):
    path = _write(tmp_path / "milnorkit.json", {"samples": 7, "seed": 3})
    job = ConfigManager(path, environ={}).build_job("codim", {"samples": 11, "seed": None, "q": 3, "n": 0, "r": 2})
    assert (job.samples, job.seed, job.q) == (11, 3, 3)


def test_unknown_setting(tmp_path):
    path = _write(tmp_path / "milnorkit.json", {"sampels": 7})
    with pytest.raises(InputError, match="sampels"):
        ConfigManager(path, environ={}).load_config()


def test_bad_thread_variable(tmp_path):
    with pytest.raises(InputError):
        ConfigManager(tmp_path / "absent.json", environ={THREADS_ENV_VAR: "many"}).load_config()


def test_malformed_file_line(tmp_path):
    path = tmp_path / "milnorkit.json"
    path.write_text('{\n  "app_settings": {,}\n}', encoding="utf-8")
    with pytest.raises(InputError) as info:
        ConfigManager(path, environ={}).load_config()
    assert info.value.line == 2


def test_save_round_trip(tmp_path):
    manager = ConfigManager(tmp_path / "milnorkit.json", environ={})
    assert manager.save_config(AppConfig(samples=9))
    assert manager.load_config().samples == 9
    assert AppConfig().samples == DEFAULT_SAMPLES


@pytest.mark.parametrize("command, overrides", [
    ("milnor", {}),
    ("codim", {"q": 3, "n": 0}),
    ("incidence", {"q": 3, "n": 0, "r": 1}),
    ("compactify", {"inputs": ["g.json"], "q": 4}),
    ("milnor", {"inputs": ["g.json"], "lam": 0}),
])
def test_invalid_jobs(tmp_path, command, overrides):
    with pytest.raises(InputError):
        ConfigManager(tmp_path / "absent.json", environ={}).build_job(command, overrides)
