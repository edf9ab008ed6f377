"""Tests for environment configuration and .env loading."""
import json

import pytest
import pytz

from curvkit import instance as instance_module
from curvkit import settings
from curvkit.cli import run_cli

CURVKIT_VARS = (
    "CURVKIT_MAX_DIM",
    "CURVKIT_WORKERS",
    "CURVKIT_HTTP_TIMEOUT",
    "CURVKIT_PORT",
    "CURVKIT_BIND",
    "CURVKIT_TZ",
)


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    """No CURVKIT_* variables, cwd in tmp_path; anything a .env load sets is undone afterwards."""
    for name in CURVKIT_VARS:
        monkeypatch.setenv(name, "")
        monkeypatch.delenv(name)
    monkeypatch.chdir(tmp_path)
    return tmp_path


class OkResponse:
    def __init__(self, text):
        self.text = text

    def raise_for_status(self):
        pass


class TestEnvFile:
    def test_missing_file(self, clean_env):
        assert settings.load_env_file() == []

    def test_values_reach_settings(self, clean_env):
        (clean_env / ".env").write_text(
            "# curvkit settings\n"
            "CURVKIT_WORKERS=7  # worker processes\n"
            'export CURVKIT_HTTP_TIMEOUT="99"\n'
            "CURVKIT_TZ='Europe/Paris'\n"
            "not a setting\n"
        )
        loaded = settings.load_env_file()
        assert sorted(loaded) == ["CURVKIT_HTTP_TIMEOUT", "CURVKIT_TZ", "CURVKIT_WORKERS"]
        assert settings.workers() == 7
        assert settings.http_timeout() == 99
        assert settings.report_timezone().zone == "Europe/Paris"

    def test_environment_wins(self, clean_env, monkeypatch):
        monkeypatch.setenv("CURVKIT_WORKERS", "3")
        (clean_env / ".env").write_text("CURVKIT_WORKERS=7\n")
        assert settings.load_env_file() == []
        assert settings.workers() == 3


class TestDefaults:
    def test_defaults(self, clean_env):
        assert settings.max_dim() == settings.DEFAULT_MAX_DIM
        assert settings.workers() == 1
        assert settings.http_timeout() == 10
        assert settings.api_port() == 8080
        assert settings.api_bind() == "127.0.0.1"
        assert settings.report_timezone() is pytz.utc

    @pytest.mark.parametrize("raw, expected", [("many", 1), ("0", 1), ("-4", 1), ("4 # four", 4)])
    def test_worker_parsing(self, clean_env, monkeypatch, raw, expected):
        monkeypatch.setenv("CURVKIT_WORKERS", raw)
        assert settings.workers() == expected

    def test_unknown_timezone(self, clean_env, monkeypatch):
        monkeypatch.setenv("CURVKIT_TZ", "Mars/Olympus_Mons")
        assert settings.report_timezone() is pytz.utc


class TestCommandLineUsesEnvFile:
    def test_suite_workers(self, clean_env, capsys):
        (clean_env / ".env").write_text("CURVKIT_WORKERS=7\n")
        assert run_cli(["suite", "--count", "0", "--json"]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["workers"] == 7
        assert summary["count"] == 0

    def test_workers_flag_overrides(self, clean_env, capsys):
        (clean_env / ".env").write_text("CURVKIT_WORKERS=7\n")
        assert run_cli(["suite", "--count", "0", "--workers", "2", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["workers"] == 2

    def test_fetch_timeout(self, clean_env, monkeypatch, constant_document, capsys):
        (clean_env / ".env").write_text("CURVKIT_HTTP_TIMEOUT=99\n")
        seen = {}

        def fake_get(url, timeout):
            seen["timeout"] = timeout
            return OkResponse(constant_document)

        monkeypatch.setattr(instance_module.requests, "get", fake_get)
        assert run_cli(["analyze", "https://example.org/k.json", "--json"]) == 0
        assert seen["timeout"] == 99
        assert json.loads(capsys.readouterr().out)["dimension"] == 2

    def test_max_dim(self, clean_env, constant_document):
        (clean_env / "k.json").write_text(constant_document)
        (clean_env / ".env").write_text("CURVKIT_MAX_DIM=1\n")
        assert run_cli(["analyze", "k.json"]) == 1
