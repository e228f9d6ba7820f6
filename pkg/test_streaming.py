#!/usr/bin/env python3
"""
Recorded SSE traces decode into well-formed event streams and relay into every dialect
"""

import pytest

from rosetta import sse
from rosetta.converters.context import StreamContext
from rosetta.converters.errors import ProtocolViolation
from rosetta.corpus import split_trace, trace_payloads, traces
from rosetta.corpus.traces import CAPTURED, DIALECT
from rosetta.ir.events import check_event_grammar, reassemble, reassembled_text
from rosetta.ir.types import ProviderFormat

TRACES = traces()
TARGETS = [fmt.value for fmt in ProviderFormat]


def trace_id(trace):
    return f"{trace.format.value}/{trace.name}"


def decode(registry, fmt, raw, cursor):
    fmt = ProviderFormat(fmt)
    ctx = StreamContext(source_format=fmt, provider_cursor=dict(cursor))
    payloads = sse.payloads(sse.parse_bytes(raw))
    return list(registry.get(fmt).stream_response_from_provider(payloads, ctx))


@pytest.mark.parametrize("fmt", list(ProviderFormat))
def test_at_least_six_traces_per_provider(fmt):
    assert len(traces(fmt)) >= 6


@pytest.mark.parametrize("trace", TRACES, ids=trace_id)
def test_trace_decodes(registry, trace):
    events = decode(registry, trace.format, trace.body(), trace.cursor)
    assert check_event_grammar(events) == []
    assert reassembled_text(events) == trace.text
    assert events[0].type == "stream_start"
    assert events[-1].type == "stream_end"


@pytest.mark.parametrize("target", TARGETS)
@pytest.mark.parametrize("trace", TRACES, ids=trace_id)
def test_trace_relays_to_target(registry, trace, target):
    translator = registry.stream_translator(trace.format, target, **trace.cursor)
    relayed = list(translator.run(sse.payloads(sse.parse_bytes(trace.body()))))
    raw = sse.encode_stream(relayed, DIALECT[ProviderFormat(target)])
    events = decode(registry, target, raw, trace.cursor)
    assert check_event_grammar(events) == []
    assert reassembled_text(events) == trace.text
    assert translator.finished


@pytest.mark.parametrize("trace", [t for t in TRACES if t.text == ""], ids=trace_id)
def test_tool_traces_keep_their_calls(registry, trace):
    response = reassemble(decode(registry, trace.format, trace.body(), trace.cursor))
    calls = [part for part in response.choices[0].message.content if part.type == "tool_call"]
    assert calls
    assert calls[0].tool_name == "get_weather"
    assert calls[0].tool_input["city"] == "Paris"
    assert response.choices[0].finish_reason == "tool_calls"


def test_max_tokens_becomes_length(registry):
    for trace in TRACES:
        if trace.name in ("max_tokens", "length_crlf", "incomplete"):
            response = reassemble(decode(registry, trace.format, trace.body(), trace.cursor))
            assert response.choices[0].finish_reason == "length", trace_id(trace)


@pytest.mark.parametrize("trace", [t for t in TRACES if "late_delta" in t.tags], ids=trace_id)
def test_late_delta_keeps_finish_last(registry, trace):
    events = decode(registry, trace.format, trace.body(), trace.cursor)
    kinds = [event.type for event in events]
    assert kinds.index("finish") > max(i for i, kind in enumerate(kinds) if kind == "text_delta")


class TestTraceFiles:
    @pytest.mark.parametrize("trace", TRACES, ids=trace_id)
    def test_header_and_body(self, trace):
        header, body = split_trace(trace.render())
        assert header["format"] == trace.format.value
        assert header["name"] == trace.name
        assert header["captured"] == CAPTURED
        assert body == trace.body()
        assert trace_payloads(trace.render()) == list(trace.payloads)

    def test_headerless_file(self):
        assert split_trace(b"data: {}\n\n") == ({}, b"data: {}\n\n")

    def test_google_mode_in_header(self):
        [trace] = [t for t in traces(ProviderFormat.GOOGLE) if t.name == "incremental_text"]
        assert split_trace(trace.render())[0]["google_stream_mode"] == "incremental"

    def test_written_traces(self, tmp_path):
        from rosetta.corpus import write_corpus

        write_corpus(tmp_path)
        written = sorted(p.relative_to(tmp_path).as_posix() for p in (tmp_path / "traces").rglob("*.sse"))
        assert "traces/anthropic/tool_use.sse" in written
        assert len(written) == len(TRACES)


class TestTranslatorFailures:
    def test_upstream_violation_propagates(self, registry):
        translator = registry.stream_translator("anthropic", "openai_chat")
        with pytest.raises(ProtocolViolation):
            translator.feed({"type": "content_block_delta", "index": 4, "delta": {"type": "text_delta", "text": "x"}})

    @pytest.mark.parametrize(
        "target, last",
        [
            ("openai_chat", sse.DONE),
            ("anthropic", {"type": "error", "error": {"type": "api_error", "message": "boom"}}),
            ("google", {"error": {"code": 500, "message": "boom", "status": "INTERNAL"}}),
        ],
    )
    def test_fail_ends_client_stream(self, registry, target, last):
        translator = registry.stream_translator("openai_chat", target)
        assert translator.fail("boom")[-1] == last

    def test_responses_fail_reports_failed_response(self, registry):
        translator = registry.stream_translator("anthropic", "openai_responses")
        translator.feed({"type": "message_start", "message": {"id": "msg_1", "model": "claude", "usage": {}}})
        kinds = [event["type"] for event in translator.fail("boom")]
        assert kinds == ["error", "response.failed"]
