#!/usr/bin/env python3
"""
Google GenAI converter tests
"""

import pytest

from rosetta.converters.context import MetadataMode, StreamContext, WarningCode
from rosetta.converters.errors import MalformedInput, ProtocolViolation, UnsupportedConstruct
from rosetta.corpus import GOOGLE_MODEL
from rosetta.ir.events import is_grammar_valid, reassemble, reassembled_text
from rosetta.ir.types import (
    CitationPart,
    CitationSpan,
    IRRequest,
    ProviderFormat,
    ReasoningConfig,
    SystemMessage,
    TextPart,
    ToolDefinition,
    UserMessage,
)

FMT = "google"


def codes(warnings):
    return [warning.code for warning in warnings]


class TestRequests:
    def test_model_comes_from_hint(self, registry, payload):
        ir = registry.to_ir(payload("google/content/text"), FMT, model_hint=GOOGLE_MODEL).ir
        assert ir.model == GOOGLE_MODEL
        assert ir.messages == [UserMessage(content=[TextPart(text="Hello!")])]

    def test_model_required(self, registry, payload):
        with pytest.raises(MalformedInput) as e:
            registry.to_ir(payload("google/content/text"), FMT)
        assert e.value.json_path == "$.model"

    def test_model_in_body_round_trip(self, round_trip, payload):
        body = payload("google/messages/model_in_body")
        back, _, ir = round_trip(body, FMT)
        assert ir.model == "models/gemini-2.0-flash"
        assert back == body

    def test_system_instruction(self, registry, payload):
        ir = registry.to_ir(payload("google/messages/system_instruction"), FMT, model_hint=GOOGLE_MODEL).ir
        assert ir.system == SystemMessage(content=[TextPart(text="You are terse.")])

    def test_system_role_entry_round_trip(self, round_trip):
        body = {"contents": [
            {"role": "system", "parts": [{"text": "Be brief."}]},
            {"role": "user", "parts": [{"text": "Hi"}]},
        ]}
        back, _, ir = round_trip(body, FMT, model_hint=GOOGLE_MODEL)
        assert ir.system.content == [TextPart(text="Be brief.")]
        assert len(ir.messages) == 1
        assert back == body

    def test_synthetic_call_ids_pair_results(self, registry, payload):
        ir = registry.to_ir(payload("google/tools/parallel_calls"), FMT, model_hint=GOOGLE_MODEL).ir
        calls = ir.messages[1].content
        results = ir.messages[2].content
        assert [call.tool_call_id for call in calls] == ["call_1", "call_2"]
        assert [result.tool_call_id for result in results] == ["call_1", "call_2"]
        assert results[1].content == [TextPart(text='{"time":"21:04"}')]

    def test_result_ids_reach_openai_chat(self, registry, payload):
        body = payload("google/tools/function_round_trip")
        result = registry.translate(body, FMT, "openai_chat", model_hint=GOOGLE_MODEL)
        assistant, tool = result.body["messages"][1:]
        assert assistant["tool_calls"][0]["id"] == tool["tool_call_id"] == "call_1"

    def test_result_without_call_keeps_its_name(self, round_trip):
        body = {"contents": [
            {"role": "user", "parts": [{"functionResponse": {"name": "lookup", "response": {"hits": 3}}}]},
        ]}
        back, _, ir = round_trip(body, FMT, model_hint=GOOGLE_MODEL)
        assert ir.messages[0].role == "tool"
        assert back == body

    def test_error_response(self, registry, payload):
        ir = registry.to_ir(payload("google/tools/error_response"), FMT, model_hint=GOOGLE_MODEL).ir
        result = ir.messages[2].content[0]
        assert result.is_error is True
        assert result.content == [TextPart(text="station offline")]

    def test_openapi_types_normalized(self, registry, round_trip, payload):
        body = payload("google/tools/openapi_types")
        ir = registry.to_ir(body, FMT, model_hint=GOOGLE_MODEL).ir
        assert ir.tools[0].parameters["properties"]["city"] == {"type": "string"}
        assert round_trip(body, FMT, model_hint=GOOGLE_MODEL)[0] == body

    def test_foreign_schema_sanitized(self, registry):
        request = IRRequest(model="m", messages=[UserMessage(content=[TextPart(text="hi")])], tools=[
            ToolDefinition(name="f", parameters={
                "type": "object", "additionalProperties": False,
                "properties": {"x": {"type": ["string", "null"]}},
            }),
        ])
        result = registry.from_ir(request, FMT)
        declaration = result.body["tools"][0]["functionDeclarations"][0]
        assert declaration["parameters"] == {"type": "object", "properties": {"x": {"type": "string", "nullable": True}}}
        assert [warning.json_path for warning in result.warnings] == ["$.tools[0].parameters.additionalProperties"]

    def test_named_tool_choice(self, registry, payload):
        ir = registry.to_ir(payload("google/tools/tool_choice_named"), FMT, model_hint=GOOGLE_MODEL).ir
        assert (ir.tool_choice.mode, ir.tool_choice.tool_name) == ("tool", "get_weather")

    def test_hosted_tool_dropped_for_other_formats(self, registry, payload):
        body = payload("google/tools/search_grounding")
        result = registry.translate(body, FMT, "anthropic", model_hint=GOOGLE_MODEL)
        assert [tool["name"] for tool in result.body["tools"]] == ["get_weather"]
        assert WarningCode.DROPPED_PROVIDER_FEATURE in codes(result.warnings)

    @pytest.mark.parametrize("name, expected", [
        ("thinking_budget", ReasoningConfig(enabled=True, budget_tokens=1024)),
        ("thinking_off", ReasoningConfig(enabled=False)),
        ("thinking_dynamic", ReasoningConfig(enabled=True)),
    ])
    def test_thinking_budget(self, registry, payload, name, expected):
        ir = registry.to_ir(payload(f"google/config/{name}"), FMT, model_hint=GOOGLE_MODEL).ir
        assert ir.reasoning == expected

    def test_effort_approximated_as_budget(self, registry):
        request = IRRequest(model="m", messages=[UserMessage(content=[TextPart(text="hi")])],
                            reasoning=ReasoningConfig(effort="low"))
        result = registry.from_ir(request, FMT)
        assert result.body["generationConfig"] == {"thinkingConfig": {"thinkingBudget": 1024}}
        assert codes(result.warnings) == [WarningCode.UNMAPPED_PARAMETER]

    def test_unknown_generation_keys_pass_through(self, registry, payload):
        ir = registry.to_ir(payload("google/config/candidate_count"), FMT, model_hint=GOOGLE_MODEL).ir
        assert ir.provider_extensions == {"google": {"generationConfig": {"candidateCount": 2}}}
        assert ir.generation.temperature == 1.0

    def test_system_message_in_conversation(self, registry):
        request = IRRequest(model="m", messages=[
            UserMessage(content=[TextPart(text="hi")]),
            SystemMessage(content=[TextPart(text="be nice")]),
        ])
        result = registry.from_ir(request, FMT)
        assert [item["role"] for item in result.body["contents"]] == ["user", "user"]
        assert result.warnings[0].json_path == "$.messages[1]"

    def test_unsupported_role(self, registry):
        body = {"contents": [{"role": "assistant", "parts": [{"text": "x"}]}]}
        with pytest.raises(MalformedInput) as e:
            registry.to_ir(body, FMT, model_hint=GOOGLE_MODEL)
        assert e.value.json_path == "$.contents[0].role"


class TestResponses:
    def test_function_call_finish(self, registry, payload):
        body = payload("google/full/function_call_response")
        ir = registry.to_ir(body, FMT, "response").ir
        assert ir.choices[0].finish_reason == "tool_calls"
        translated = registry.translate(body, FMT, "openai_chat", "response")
        assert translated.body["choices"][0]["finish_reason"] == "tool_calls"

    def test_thought_tokens_count_as_completion(self, registry, payload):
        usage = registry.to_ir(payload("google/full/thought_response"), FMT, "response").ir.usage
        assert (usage.prompt_tokens, usage.completion_tokens, usage.reasoning_tokens) == (12, 10, 6)

    def test_citations(self, registry, payload):
        result = registry.to_ir(payload("google/full/citation_response"), FMT, "response")
        citation = result.ir.choices[0].message.content[1]
        assert citation == CitationPart(url="https://en.wikipedia.org/wiki/Paris", span=CitationSpan(start=0, end=31))
        assert result.warnings == []

    def test_blocked_candidate(self, registry, round_trip, payload):
        body = payload("google/full/blocked_response")
        ir = registry.to_ir(body, FMT, "response").ir
        assert ir.choices[0].finish_reason == "content_filter"
        assert ir.choices[0].message.content == []
        assert round_trip(body, FMT, "response")[0] == body

    def test_prompt_blocked_has_no_candidates(self, round_trip, payload):
        body = payload("google/full/prompt_blocked_response")
        back, _, ir = round_trip(body, FMT, "response")
        assert ir.choices == []
        assert back == body

    def test_create_time(self, registry, round_trip, payload):
        body = payload("google/full/timestamped_response")
        assert registry.to_ir(body, FMT, "response").ir.created == 1748781045
        assert round_trip(body, FMT, "response")[0]["createTime"] == "2025-06-01T12:30:45.123456Z"
        assert round_trip(body, FMT, "response", mode="strip")[0]["createTime"] == "2025-06-01T12:30:45Z"


def chunk(parts, finish=None, **extra):
    candidate = {"content": {"role": "model", "parts": parts}, "index": 0}
    if finish:
        candidate["finishReason"] = finish
    return {"candidates": [candidate], "modelVersion": GOOGLE_MODEL, "responseId": "r1", **extra}


USAGE = {"promptTokenCount": 4, "candidatesTokenCount": 3, "totalTokenCount": 7}


class TestStreaming:
    def events(self, registry, chunks, **cursor):
        ctx = StreamContext(source_format=ProviderFormat.GOOGLE, provider_cursor=cursor)
        return list(registry.get(FMT).stream_response_from_provider(chunks, ctx)), ctx

    def test_accumulated_chunks_are_differenced(self, registry):
        chunks = [
            chunk([{"text": "Hel"}]),
            chunk([{"text": "Hello"}]),
            chunk([{"text": "Hello there."}], "STOP", usageMetadata=USAGE),
        ]
        events, ctx = self.events(registry, chunks)
        assert [event.type for event in events] == [
            "stream_start", "content_block_start", "text_delta", "text_delta", "text_delta",
            "content_block_end", "finish", "usage", "stream_end",
        ]
        assert [event.text for event in events if event.type == "text_delta"] == ["Hel", "lo", " there."]
        assert events[-2].usage.total_tokens == 7
        assert ctx.warnings == []

    @pytest.mark.parametrize("mode, second", [("accumulated", "Almost done."), ("incremental", " done.")])
    def test_finish_before_last_text(self, registry, mode, second):
        chunks = [chunk([{"text": "Almost"}], "STOP"), chunk([{"text": second}], usageMetadata=USAGE)]
        events, ctx = self.events(registry, chunks, google_stream_mode=mode)
        assert is_grammar_valid(events)
        assert [event.type for event in events][-6:] == [
            "text_delta", "text_delta", "content_block_end", "finish", "usage", "stream_end",
        ]
        assert [event.type for event in events].count("content_block_start") == 1
        assert reassembled_text(events) == "Almost done."
        assert codes(ctx.warnings) == [WarningCode.DEFERRED_REORDER]

    def test_signature_kept_on_last_block(self, registry):
        chunks = [chunk([{"text": "Hi", "thoughtSignature": "c2ln"}], "STOP")]
        ctx = StreamContext(source_format=ProviderFormat.GOOGLE, mode=MetadataMode.PRESERVE)
        events = list(registry.get(FMT).stream_response_from_provider(chunks, ctx))
        [end] = [event for event in events if event.type == "content_block_end"]
        assert end.provider_metadata == {"google": {"thoughtSignature": "c2ln"}}

    def test_incremental_chunks(self, registry):
        chunks = [
            chunk([{"text": "Hel"}]),
            chunk([{"text": "lo"}]),
            chunk([{"text": "Let me think", "thought": True}]),
            chunk([], "STOP"),
        ]
        events, _ = self.events(registry, chunks, google_stream_mode="incremental")
        assert is_grammar_valid(events)
        assert reassembled_text(events) == "Hello"
        assert [event.block_kind for event in events if event.type == "content_block_start"] == ["text", "reasoning"]

    def test_accumulated_text_must_extend(self, registry):
        with pytest.raises(ProtocolViolation):
            self.events(registry, [chunk([{"text": "Hello"}]), chunk([{"text": "Help"}])])

    def test_function_call_arrives_whole(self, registry):
        chunks = [chunk([{"functionCall": {"name": "get_weather", "args": {"city": "Paris"}}}], "STOP")]
        events, _ = self.events(registry, chunks)
        assert is_grammar_valid(events)
        response = reassemble(events)
        call = response.choices[0].message.content[0]
        assert (call.tool_name, call.tool_input) == ("get_weather", {"city": "Paris"})
        assert response.choices[0].finish_reason == "tool_calls"

    def test_multiple_candidates(self, registry):
        two = chunk([{"text": "a"}])
        two["candidates"].append({"content": {"role": "model", "parts": [{"text": "b"}]}, "index": 1})
        with pytest.raises(UnsupportedConstruct):
            self.events(registry, [two])

    def test_error_payload(self, registry):
        with pytest.raises(ProtocolViolation, match="quota"):
            self.events(registry, [{"error": {"code": 429, "message": "quota exhausted", "status": "RESOURCE_EXHAUSTED"}}])

    @staticmethod
    def chat_chunks():
        def chat(delta, finish=None):
            return {"id": "c1", "model": "gpt-4o", "choices": [{"index": 0, "delta": delta, "finish_reason": finish}]}
        return [chat({"role": "assistant", "content": "Hel"}), chat({"content": "lo"}), chat({}, "stop"), "[DONE]"]

    def test_encoding_accumulated(self, registry):
        out = list(registry.stream_translator("openai_chat", FMT).run(self.chat_chunks()))
        texts = [item["candidates"][0]["content"]["parts"] for item in out]
        assert texts[-2:] == [[{"text": "Hello"}], [{"text": "Hello"}]]
        assert out[-1]["candidates"][0]["finishReason"] == "STOP"
        assert "finishReason" not in out[0]["candidates"][0]

    def test_encoding_incremental(self, registry):
        translator = registry.stream_translator("openai_chat", FMT, google_stream_mode="incremental")
        out = list(translator.run(self.chat_chunks()))
        text = "".join(part["text"] for item in out[:-1] for part in item["candidates"][0]["content"]["parts"])
        assert text == "Hello"
        assert out[-1]["candidates"][0]["content"]["parts"] == []
