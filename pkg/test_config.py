#!/usr/bin/env python3
"""
Gateway configuration, upstream addressing and logging setup
"""

import io
import json
import logging

import pytest

from rosetta.config.defaults import budget_to_effort
from rosetta.converters.context import MetadataMode
from rosetta.converters.errors import GatewayConfigError
from rosetta.gateway.config import config_from_dict, interpolate, load_config
from rosetta.gateway.logs import configure_logging
from rosetta.gateway.upstream import UpstreamError, upstream_headers, upstream_url
from rosetta.ir.types import ProviderFormat

ROUTE = {"client_format": "openai_chat", "upstream_format": "anthropic", "upstream_base_url": "https://api.anthropic.com/"}

YAML = """\
listen:
  port: 9000
metadata_mode: preserve
routes:
  - client_format: openai_chat
    upstream_format: anthropic
    upstream_base_url: ${ANTHROPIC_BASE_URL:-https://api.anthropic.com}
    api_key_env: ANTHROPIC_API_KEY
  - client_format: auto
    path_prefix: /any
    upstream_format: google
    upstream_base_url: https://generativelanguage.googleapis.com
    google_stream_mode: incremental
"""


class TestConfig:
    def test_defaults(self):
        config = config_from_dict({"routes": [ROUTE]}, environ={})
        assert config.listen.host == "127.0.0.1"
        assert config.listen.port == 8080
        assert config.metadata_mode == MetadataMode.STRIP
        assert config.max_request_bytes == 10 * 1024 * 1024
        [route] = config.routes
        assert route.path_prefix == "/v1/chat/completions"
        assert route.upstream_base_url == "https://api.anthropic.com"
        assert route.upstream_format == ProviderFormat.ANTHROPIC

    def test_environment_overrides(self):
        environ = {"ROSETTA_HOST": "0.0.0.0", "ROSETTA_PORT": "9100", "ROSETTA_LOG_LEVEL": "debug"}
        config = config_from_dict({"routes": [ROUTE]}, environ=environ)
        assert (config.listen.host, config.listen.port, config.log_level) == ("0.0.0.0", 9100, "DEBUG")

    def test_load_yaml(self, tmp_path, monkeypatch):
        monkeypatch.delenv("ANTHROPIC_BASE_URL", raising=False)
        for name in ("ROSETTA_HOST", "ROSETTA_PORT", "ROSETTA_LOG_LEVEL"):
            monkeypatch.delenv(name, raising=False)
        path = tmp_path / "gateway.yaml"
        path.write_text(YAML)
        config = load_config(path)
        assert config.listen.port == 9000
        assert config.metadata_mode == MetadataMode.PRESERVE
        assert config.routes[0].upstream_base_url == "https://api.anthropic.com"
        assert config.routes[1].auto
        assert config.routes[1].google_stream_mode == "incremental"

    def test_model_aliases(self):
        config = config_from_dict({"routes": [{**ROUTE, "model_aliases": {"gpt-4o": "claude-opus"}}]}, environ={})
        assert config.routes[0].model_for("gpt-4o") == "claude-opus"
        assert config.routes[0].model_for("other") == "other"

    @pytest.mark.parametrize(
        "data",
        [
            {"routes": []},
            {"routes": [ROUTE, ROUTE]},
            {"routes": [{**ROUTE, "client_format": "auto"}]},
            {"routes": [{**ROUTE, "path_prefix": "chat"}]},
            {"routes": [{**ROUTE, "upstream_format": "cohere"}]},
            {"routes": [ROUTE], "log_level": "loud"},
            {"routes": [ROUTE], "listen": {"port": 70000}},
            {"routes": [ROUTE], "surprise": True},
        ],
    )
    def test_invalid(self, data):
        with pytest.raises(GatewayConfigError):
            config_from_dict(data, environ={})

    def test_error_names_location(self):
        with pytest.raises(GatewayConfigError) as e:
            config_from_dict({"routes": [ROUTE], "listen": {"port": 70000}}, environ={})
        assert e.value.json_path == "$.listen.port"

    def test_missing_file(self, tmp_path):
        with pytest.raises(GatewayConfigError, match="not found"):
            load_config(tmp_path / "absent.yaml")

    @pytest.mark.parametrize("text", ["routes: [", "- just\n- a list\n"])
    def test_bad_yaml(self, tmp_path, text):
        path = tmp_path / "gateway.yaml"
        path.write_text(text)
        with pytest.raises(GatewayConfigError):
            load_config(path)


class TestInterpolate:
    def test_nested(self):
        doc = {"a": ["${X}", {"b": "pre-${X}-post"}], "n": 3}
        assert interpolate(doc, {"X": "1"}) == {"a": ["1", {"b": "pre-1-post"}], "n": 3}

    def test_default(self):
        assert interpolate("${MISSING:-fallback}", {}) == "fallback"
        assert interpolate("${MISSING:-}", {}) == ""

    def test_missing_variable(self):
        with pytest.raises(GatewayConfigError, match="MISSING"):
            interpolate("${MISSING}", {})


class TestUpstream:
    def route(self, **overrides):
        return config_from_dict({"routes": [{**ROUTE, **overrides}]}, environ={}).routes[0]

    def test_urls(self):
        route = self.route(upstream_format="google", upstream_base_url="https://g.example")
        assert upstream_url(route, "gemini-2.0-flash", False) == "https://g.example/v1beta/models/gemini-2.0-flash:generateContent"
        assert upstream_url(route, "gemini-2.0-flash", True).endswith(":streamGenerateContent?alt=sse")
        assert upstream_url(self.route(), "claude", True) == "https://api.anthropic.com/v1/messages"

    def test_headers(self, monkeypatch):
        monkeypatch.setenv("ROSETTA_TEST_KEY", "k-123")
        headers = upstream_headers(self.route(api_key_env="ROSETTA_TEST_KEY"), True)
        assert headers["x-api-key"] == "k-123"
        assert headers["anthropic-version"] == "2023-06-01"
        assert headers["Accept"] == "text/event-stream"
        openai = upstream_headers(self.route(upstream_format="openai_chat", api_key_env="ROSETTA_TEST_KEY"), False)
        assert openai["Authorization"] == "Bearer k-123"
        assert "Accept" not in openai

    def test_missing_key_forwards_without_credentials(self, monkeypatch):
        monkeypatch.delenv("ROSETTA_UNSET_KEY", raising=False)
        headers = upstream_headers(self.route(api_key_env="ROSETTA_UNSET_KEY"), False)
        assert "x-api-key" not in headers

    def test_error_body(self):
        error = UpstreamError("upstream returned 429", 429, {"error": "slow down"})
        assert error.to_dict() == {"error": "upstream_error", "message": "upstream returned 429",
                                   "upstream_status": 429, "upstream_body": {"error": "slow down"}}
        assert UpstreamError("timed out").to_dict() == {"error": "upstream_error", "message": "timed out"}


def test_json_log_lines():
    stream = io.StringIO()
    configure_logging("INFO", stream)
    try:
        logging.getLogger("rosetta.gateway.server").info("request", extra={"status": 200, "route": "/v1/messages"})
        logging.getLogger("rosetta.gateway.server").debug("hidden")
    finally:
        root = logging.getLogger("rosetta")
        root.handlers[:] = []
        root.propagate = True
    [line] = stream.getvalue().splitlines()
    entry = json.loads(line)
    assert entry["level"] == "INFO"
    assert entry["message"] == "request"
    assert entry["status"] == 200
    assert entry["route"] == "/v1/messages"
    assert entry["ts"].endswith("Z")


@pytest.mark.parametrize("budget, effort", [(0, "low"), (1024, "low"), (1025, "medium"), (8192, "medium"), (30000, "high")])
def test_budget_to_effort(budget, effort):
    assert budget_to_effort(budget) == effort
