#!/usr/bin/env python3
"""
Command line tests
"""

import json

import pytest
from click.testing import CliRunner

from rosetta import __version__, sse
from rosetta.cli import cli
from rosetta.converters.context import StreamContext
from rosetta.converters.registry import default_registry
from rosetta.corpus import entry, write_corpus
from rosetta.ir.events import reassembled_text
from rosetta.ir.serialize import parse_request
from rosetta.ir.validate import validate_ir_request
from rosetta.ir.types import ProviderFormat


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write_json(tmp_path):
    def write(name, body):
        path = tmp_path / name
        path.write_text(json.dumps(body), encoding="utf-8")
        return str(path)
    return write


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    write_corpus(root)
    return root


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


class TestConvert:
    def test_chat_to_anthropic(self, runner, write_json, tmp_path):
        source = write_json("chat.json", entry("openai_chat/content/text_string").load())
        out = tmp_path / "out.json"
        result = runner.invoke(cli, ["convert", source, "--from", "openai_chat", "--to", "anthropic", "-o", str(out)])
        assert result.exit_code == 0, result.output
        body = json.loads(out.read_text())
        assert body["messages"] == [{"role": "user", "content": "Hello!"}]
        assert body["max_tokens"] == 4096
        assert "UNMAPPED_PARAMETER_DEFAULTED" in result.output

    def test_auto_to_ir_and_back(self, runner, write_json, tmp_path):
        source = write_json("anthropic.json", entry("anthropic/tools/tool_round_trip").load())
        ir_path = tmp_path / "ir.json"
        result = runner.invoke(cli, ["convert", source, "--from", "auto", "--to", "ir", "-o", str(ir_path)])
        assert result.exit_code == 0, result.output
        ir = parse_request(json.loads(ir_path.read_text()))
        assert ir.model == "claude-sonnet-4-20250514"
        assert validate_ir_request(ir).ok

        out = tmp_path / "responses.json"
        result = runner.invoke(cli, ["convert", str(ir_path), "--from", "ir", "--to", "openai_responses",
                                     "-o", str(out)])
        assert result.exit_code == 0, result.output
        types = [item.get("type") for item in json.loads(out.read_text())["input"]]
        assert "function_call" in types
        assert "function_call_output" in types

    def test_preserve_identity_is_exact(self, runner, write_json, tmp_path):
        body = entry("anthropic/tools/tool_round_trip").load()
        source = write_json("anthropic.json", body)
        outputs = []
        for name in ("first.json", "second.json"):
            out = tmp_path / name
            result = runner.invoke(cli, ["convert", source, "--from", "anthropic", "--to", "anthropic",
                                         "--mode", "preserve", "-o", str(out)])
            assert result.exit_code == 0, result.output
            outputs.append(out.read_bytes())
        assert json.loads(outputs[0]) == body
        assert outputs[0] == outputs[1]
        assert outputs[0].endswith(b"}\n")

    def test_stdin_to_stdout(self, runner):
        body = json.dumps(entry("openai_chat/content/text_string").load())
        result = runner.invoke(cli, ["convert", "--from", "openai_chat", "--to", "openai_chat"], input=body)
        assert result.exit_code == 0
        assert json.loads(result.output)["messages"] == [{"role": "user", "content": "Hello!"}]

    def test_google_needs_model(self, runner, write_json, tmp_path):
        source = write_json("google.json", entry("google/content/text").load())
        result = runner.invoke(cli, ["convert", source, "--from", "google", "--to", "openai_chat"])
        assert result.exit_code == 1
        assert '"json_path": "$.model"' in result.output

        out = tmp_path / "out.json"
        result = runner.invoke(cli, ["convert", source, "--from", "google", "--to", "openai_chat",
                                     "--model", "gemini-2.0-flash", "-o", str(out)])
        assert result.exit_code == 0, result.output
        assert json.loads(out.read_text())["model"] == "gemini-2.0-flash"

    def test_invalid_json(self, runner):
        result = runner.invoke(cli, ["convert", "--from", "openai_chat", "--to", "anthropic"], input="{nope")
        assert result.exit_code == 1
        assert "malformed_input" in result.output

    def test_undetectable_input(self, runner):
        result = runner.invoke(cli, ["convert", "--from", "auto", "--to", "anthropic"], input='{"prompt": "hi"}')
        assert result.exit_code == 1
        assert "could not detect" in result.output

    def test_unknown_format_is_usage_error(self, runner):
        result = runner.invoke(cli, ["convert", "--from", "cohere", "--to", "anthropic"], input="{}")
        assert result.exit_code == 2


class TestDetect:
    def test_known(self, runner):
        body = json.dumps(entry("anthropic/tools/tool_round_trip").load())
        result = runner.invoke(cli, ["detect"], input=body)
        assert result.exit_code == 0
        assert json.loads(result.output)["format"] == "anthropic"

    def test_google(self, runner):
        result = runner.invoke(cli, ["detect"], input=json.dumps(entry("google/content/text").load()))
        assert json.loads(result.output) == {"format": "google", "confidence": "exact", "signals": ["contents.parts"]}

    def test_unknown(self, runner):
        result = runner.invoke(cli, ["detect"], input='{"prompt": "hi"}')
        assert result.exit_code == 1
        assert json.loads(result.output)["format"] == "unknown"


class TestRoundtrip:
    def test_shipped_corpus(self, runner, tmp_path):
        report = tmp_path / "report.json"
        result = runner.invoke(cli, ["roundtrip", "--format", "google", "-o", str(report)])
        assert result.exit_code == 0, result.output
        assert "passed in preserve mode" in result.output
        data = json.loads(report.read_text())
        assert data["passed"] == data["total"] > 0
        assert {item["status"] for item in data["results"]} == {"pass"}

    def test_strip_mode(self, runner):
        result = runner.invoke(cli, ["roundtrip", "--format", "anthropic", "--mode", "strip"])
        assert result.exit_code == 0, result.output
        assert "passed in strip mode" in result.output

    def test_failures_exit_nonzero(self, runner, tmp_path):
        target = tmp_path / "openai_chat" / "content"
        target.mkdir(parents=True)
        (target / "broken.request.json").write_text("{", encoding="utf-8")
        result = runner.invoke(cli, ["roundtrip", "--corpus", str(tmp_path)])
        assert result.exit_code == 1
        assert "MALFORMED" in result.output

    def test_empty_selection(self, runner, tmp_path):
        result = runner.invoke(cli, ["roundtrip", "--corpus", str(tmp_path)])
        assert result.exit_code == 2


def test_corpus_export(runner, tmp_path):
    result = runner.invoke(cli, ["corpus", str(tmp_path / "out")])
    assert result.exit_code == 0
    assert (tmp_path / "out" / "google" / "content" / "text.request.json").exists()
    assert (tmp_path / "out" / "traces" / "openai_chat" / "simple_text.sse").exists()


class TestStream:
    def test_anthropic_to_chat(self, runner, corpus_dir, tmp_path):
        out = tmp_path / "chat.sse"
        trace = corpus_dir / "traces" / "anthropic" / "simple_text.sse"
        result = runner.invoke(cli, ["stream", str(trace), "--to", "openai_chat", "-o", str(out)])
        assert result.exit_code == 0, result.output
        raw = out.read_bytes()
        assert raw.endswith(b"data: [DONE]\n\n")
        ctx = StreamContext(source_format=ProviderFormat.OPENAI_CHAT)
        converter = default_registry().get("openai_chat")
        events = list(converter.stream_response_from_provider(sse.payloads(sse.parse_bytes(raw)), ctx))
        assert reassembled_text(events) == "Hello!"

    def test_google_trace_to_ir(self, runner, corpus_dir, tmp_path):
        out = tmp_path / "events.jsonl"
        trace = corpus_dir / "traces" / "google" / "incremental_text.sse"
        result = runner.invoke(cli, ["stream", str(trace), "--to", "ir", "-o", str(out)])
        assert result.exit_code == 0, result.output
        events = [json.loads(line) for line in out.read_text().splitlines()]
        assert events[0]["type"] == "stream_start"
        assert events[-1]["type"] == "stream_end"
        assert "".join(e["text"] for e in events if e["type"] == "text_delta") == "Hello world!"

    def test_headerless_trace_needs_from(self, runner):
        result = runner.invoke(cli, ["stream", "--to", "anthropic"], input=b'data: {}\n\n')
        assert result.exit_code == 2

    def test_protocol_violation(self, runner):
        raw = b'data: {"type":"content_block_delta","index":3,"delta":{"type":"text_delta","text":"x"}}\n\n'
        result = runner.invoke(cli, ["stream", "--from", "anthropic", "--to", "openai_chat"], input=raw)
        assert result.exit_code == 1
        assert "protocol_violation" in result.output


def test_bench(runner, tmp_path):
    report = tmp_path / "bench.json"
    result = runner.invoke(cli, ["bench", "--no-pin", "--iterations", "3", "--payload", "simple",
                                 "--format", "openai_chat", "--format", "google", "-o", str(report)])
    assert result.exit_code == 0, result.output
    assert "median µs" in result.output
    data = json.loads(report.read_text())
    assert [(row["payload"], row["format"]) for row in data["results"]] == [
        ("simple", "openai_chat"), ("simple", "google"),
    ]
    assert data["pinned_core"] is None


def test_serve_reports_bad_config(runner, tmp_path):
    config = tmp_path / "gateway.yaml"
    config.write_text("routes: []\n", encoding="utf-8")
    result = runner.invoke(cli, ["serve", "--config", str(config)])
    assert result.exit_code == 1
    assert "gateway_config_error" in result.output
