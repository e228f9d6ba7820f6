#!/usr/bin/env python3
"""
Anthropic Messages converter tests
"""

import pytest

from rosetta.config.defaults import DEFAULT_ANTHROPIC_MAX_TOKENS
from rosetta.converters.context import StreamContext, WarningCode
from rosetta.converters.errors import MalformedInput, ProtocolViolation
from rosetta.ir.types import (
    AssistantMessage,
    ChoiceInfo,
    CitationPart,
    CitationSpan,
    IRRequest,
    IRResponse,
    ProviderFormat,
    ReasoningConfig,
    TextPart,
    ToolMessage,
    UserMessage,
)

FMT = "anthropic"


def codes(warnings):
    return [warning.code for warning in warnings]


def ir_request(**extra):
    return IRRequest(model="claude-sonnet-4-20250514", messages=[UserMessage(content=[TextPart(text="hi")])], **extra)


class TestRequests:
    def test_system_blocks_round_trip(self, registry, round_trip, payload):
        body = payload("anthropic/messages/system_blocks")
        assert round_trip(body, FMT)[0] == body
        ir = registry.to_ir(body, FMT).ir
        assert ir.system.content == [TextPart(text="You are a careful assistant.\nCite your sources.")]

    def test_tool_results_become_tool_messages(self, registry, payload):
        ir = registry.to_ir(payload("anthropic/tools/tool_result_and_text"), FMT).ir
        assert [message.role for message in ir.messages] == ["user", "assistant", "tool", "user"]
        assert ir.messages[2].content[0].tool_call_id == "toolu_01A"
        assert ir.messages[3].content == [TextPart(text="Also, should I bring an umbrella?")]

    def test_tool_result_error_flag(self, registry, payload):
        ir = registry.to_ir(payload("anthropic/tools/tool_result_blocks"), FMT).ir
        result = ir.messages[2].content[0]
        assert result.is_error is True
        assert result.content == [TextPart(text="station offline")]

    def test_consecutive_tool_messages_fold_into_one_user_turn(self, registry):
        from rosetta.ir.types import ToolCallPart, ToolResultPart

        request = IRRequest(model="claude", messages=[
            UserMessage(content=[TextPart(text="both?")]),
            AssistantMessage(content=[
                ToolCallPart(tool_call_id="a", tool_name="f"), ToolCallPart(tool_call_id="b", tool_name="f"),
            ]),
            ToolMessage(content=[ToolResultPart(tool_call_id="a", content=[TextPart(text="1")])]),
            ToolMessage(content=[ToolResultPart(tool_call_id="b", content=[TextPart(text="2")])]),
        ])
        messages = registry.from_ir(request, FMT).body["messages"]
        assert len(messages) == 3
        assert [block["tool_use_id"] for block in messages[2]["content"]] == ["a", "b"]

    def test_thinking_config(self, registry, payload):
        ir = registry.to_ir(payload("anthropic/config/thinking_enabled"), FMT).ir
        assert ir.reasoning == ReasoningConfig(enabled=True, budget_tokens=4096)
        ir = registry.to_ir(payload("anthropic/config/thinking_disabled"), FMT).ir
        assert ir.reasoning.enabled is False

    def test_thinking_signature(self, registry, round_trip, payload):
        body = payload("anthropic/messages/thinking_history")
        stripped = registry.to_ir(body, FMT)
        assert stripped.ir.messages[1].content[0].signature is None
        assert WarningCode.DROPPED_PROVIDER_FEATURE in codes(stripped.warnings)
        assert round_trip(body, FMT)[0] == body

    def test_cache_control_warns_in_strip_mode(self, registry, payload):
        result = registry.to_ir(payload("anthropic/content/cache_control_text"), FMT)
        assert [warning.json_path for warning in result.warnings] == ["$.messages[0].content[0].cache_control"]

    def test_hosted_tool(self, registry, round_trip, payload):
        body = payload("anthropic/tools/hosted_tool")
        assert round_trip(body, FMT)[0] == body
        ir = registry.to_ir(body, FMT).ir
        assert [tool.name for tool in ir.tools] == ["get_weather"]
        result = registry.translate(body, FMT, "openai_chat")
        assert [tool["function"]["name"] for tool in result.body["tools"]] == ["get_weather"]
        assert WarningCode.DROPPED_PROVIDER_FEATURE in codes(result.warnings)

    def test_serial_tool_use(self, registry, payload):
        ir = registry.to_ir(payload("anthropic/tools/tool_choice_any_serial"), FMT).ir
        assert ir.tool_choice.mode == "any"
        assert ir.tool_call_config.parallel_tool_calls is False


class TestMalformed:
    def test_unsupported_role(self, registry):
        with pytest.raises(MalformedInput) as e:
            registry.to_ir({"model": "claude", "max_tokens": 10, "messages": [{"role": "system", "content": "x"}]}, FMT)
        assert e.value.json_path == "$.messages[0].role"

    def test_unsupported_tool_choice(self, registry):
        body = {"model": "claude", "max_tokens": 10, "messages": [{"role": "user", "content": "x"}],
                "tool_choice": {"type": "sometimes"}}
        with pytest.raises(MalformedInput) as e:
            registry.to_ir(body, FMT)
        assert e.value.json_path == "$.tool_choice.type"

    def test_unsupported_image_source(self, registry):
        body = {"model": "claude", "max_tokens": 10, "messages": [{"role": "user", "content": [
            {"type": "image", "source": {"type": "carrier_pigeon"}}]}]}
        with pytest.raises(MalformedInput):
            registry.to_ir(body, FMT)


class TestFromIR:
    def test_max_tokens_defaulted(self, registry):
        result = registry.from_ir(ir_request(), FMT)
        assert result.body["max_tokens"] == DEFAULT_ANTHROPIC_MAX_TOKENS
        assert codes(result.warnings) == [WarningCode.UNMAPPED_PARAMETER_DEFAULTED]

    def test_effort_approximated_as_budget(self, registry):
        from rosetta.ir.types import GenerationConfig

        request = ir_request(generation=GenerationConfig(max_tokens=32000), reasoning=ReasoningConfig(effort="high"))
        result = registry.from_ir(request, FMT)
        assert result.body["thinking"] == {"type": "enabled", "budget_tokens": 24576}
        assert codes(result.warnings) == [WarningCode.UNMAPPED_PARAMETER]

    def test_system_message_in_conversation(self, registry):
        from rosetta.ir.types import GenerationConfig, SystemMessage

        request = IRRequest(model="claude", generation=GenerationConfig(max_tokens=10), messages=[
            UserMessage(content=[TextPart(text="hi")]),
            SystemMessage(content=[TextPart(text="be nice")]),
        ])
        result = registry.from_ir(request, FMT)
        assert result.body["messages"][1]["role"] == "user"
        assert result.warnings[0].json_path == "$.messages[1]"

    def test_extra_choices_dropped(self, registry):
        choices = [ChoiceInfo(index=i, message=AssistantMessage(content=[TextPart(text=str(i))]), finish_reason="stop")
                   for i in range(2)]
        result = registry.from_ir(IRResponse(id="r", created=0, model="m", choices=choices), FMT, "response")
        assert result.body["content"] == [{"type": "text", "text": "0"}]
        assert codes(result.warnings) == [WarningCode.DROPPED_PROVIDER_FEATURE]


class TestResponses:
    def test_stop_sequence(self, registry, round_trip, payload):
        body = payload("anthropic/full/stop_sequence_response")
        assert registry.to_ir(body, FMT, "response").ir.choices[0].finish_reason == "stop"
        assert round_trip(body, FMT, "response")[0]["stop_reason"] == "stop_sequence"

    def test_citations(self, registry, payload):
        ir = registry.to_ir(payload("anthropic/full/citations_response"), FMT, "response").ir
        text, citation = ir.choices[0].message.content
        assert text == TextPart(text="The grass is green.")
        assert citation == CitationPart(quoted_text="The grass is green.", span=CitationSpan(start=0, end=19))

    def test_cache_usage(self, registry, payload):
        usage = registry.to_ir(payload("anthropic/full/cache_usage_response"), FMT, "response").ir.usage
        assert (usage.prompt_tokens, usage.completion_tokens, usage.cached_tokens) == (50, 3, 2048)

    def test_tool_use_finish(self, registry, payload):
        ir = registry.to_ir(payload("anthropic/full/tool_use_response"), FMT, "response").ir
        assert ir.choices[0].finish_reason == "tool_calls"
        assert ir.choices[0].message.content[1].tool_input == {"city": "Paris", "unit": "celsius"}


MESSAGE_START = {"type": "message_start", "message": {
    "id": "msg_1", "type": "message", "role": "assistant", "model": "claude-sonnet-4-20250514", "content": [],
    "stop_reason": None, "stop_sequence": None, "usage": {"input_tokens": 25, "output_tokens": 1}}}


class TestStreaming:
    def events(self, registry, payloads):
        ctx = StreamContext(source_format=ProviderFormat.ANTHROPIC)
        return list(registry.get(FMT).stream_response_from_provider(payloads, ctx)), ctx

    def test_text_stream(self, registry):
        payloads = [
            MESSAGE_START,
            {"type": "content_block_start", "index": 0, "content_block": {"type": "text", "text": ""}},
            {"type": "ping"},
            {"type": "content_block_delta", "index": 0, "delta": {"type": "text_delta", "text": "Hi"}},
            {"type": "content_block_stop", "index": 0},
            {"type": "message_delta", "delta": {"stop_reason": "end_turn", "stop_sequence": None},
             "usage": {"output_tokens": 5}},
            {"type": "message_stop"},
        ]
        events, ctx = self.events(registry, payloads)
        assert [event.type for event in events] == [
            "stream_start", "content_block_start", "text_delta", "content_block_end", "finish", "usage", "stream_end",
        ]
        assert (events[5].usage.prompt_tokens, events[5].usage.completion_tokens) == (25, 5)
        assert ctx.warnings == []

    def test_delta_for_unstarted_block(self, registry):
        payloads = [MESSAGE_START,
                    {"type": "content_block_delta", "index": 3, "delta": {"type": "text_delta", "text": "x"}}]
        with pytest.raises(ProtocolViolation):
            self.events(registry, payloads)

    def test_finish_before_block_stop_is_reordered(self, registry):
        payloads = [
            MESSAGE_START,
            {"type": "content_block_start", "index": 0, "content_block": {"type": "text", "text": ""}},
            {"type": "content_block_delta", "index": 0, "delta": {"type": "text_delta", "text": "Hi"}},
            {"type": "message_delta", "delta": {"stop_reason": "end_turn"}, "usage": {"output_tokens": 2}},
            {"type": "content_block_stop", "index": 0},
            {"type": "message_stop"},
        ]
        events, ctx = self.events(registry, payloads)
        kinds = [event.type for event in events]
        assert kinds.index("finish") > kinds.index("content_block_end")
        assert codes(ctx.warnings) == [WarningCode.DEFERRED_REORDER]

    def test_error_event(self, registry):
        with pytest.raises(ProtocolViolation, match="Overloaded"):
            self.events(registry, [MESSAGE_START, {"type": "error", "error": {"type": "overloaded_error",
                                                                               "message": "Overloaded"}}])

    def test_encoding_tool_call(self, registry):
        def chunk(delta, finish=None):
            return {"id": "c1", "model": "gpt-4o", "choices": [{"index": 0, "delta": delta, "finish_reason": finish}]}

        translator = registry.stream_translator("openai_chat", FMT)
        out = list(translator.run([
            chunk({"tool_calls": [{"index": 0, "id": "call_1", "type": "function",
                                   "function": {"name": "get_weather", "arguments": ""}}]}),
            chunk({"tool_calls": [{"index": 0, "function": {"arguments": '{"city":'}}]}),
            chunk({"tool_calls": [{"index": 0, "function": {"arguments": '"Paris"}'}}]}),
            chunk({}, "tool_calls"),
            "[DONE]",
        ]))
        assert [item["type"] for item in out] == [
            "message_start", "content_block_start", "content_block_delta", "content_block_delta",
            "content_block_stop", "message_delta", "message_stop",
        ]
        assert out[1]["content_block"] == {"type": "tool_use", "id": "call_1", "name": "get_weather", "input": {}}
        assert out[5]["delta"]["stop_reason"] == "tool_use"
