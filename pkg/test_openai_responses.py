#!/usr/bin/env python3
"""
OpenAI Responses converter tests
"""

import pytest

from rosetta.converters.context import StreamContext, WarningCode
from rosetta.converters.errors import MalformedInput, ProtocolViolation
from rosetta.ir.events import is_grammar_valid, reassemble
from rosetta.ir.types import (
    AssistantMessage,
    ChoiceInfo,
    CitationPart,
    CitationSpan,
    GenerationConfig,
    IRRequest,
    IRResponse,
    ProviderFormat,
    ReasoningConfig,
    ReasoningPart,
    SystemMessage,
    TextPart,
    ToolMessage,
    UserMessage,
)

FMT = "openai_responses"


def codes(warnings):
    return [warning.code for warning in warnings]


def ir_request(**extra):
    return IRRequest(model="gpt-4.1", messages=[UserMessage(content=[TextPart(text="hi")])], **extra)


class TestRequests:
    def test_input_string(self, registry, round_trip, payload):
        body = payload("openai_responses/content/input_string")
        assert registry.to_ir(body, FMT).ir.messages == [UserMessage(content=[TextPart(text="Hello!")])]
        assert round_trip(body, FMT)[0] == body

    def test_instructions_become_system(self, registry, payload):
        ir = registry.to_ir(payload("openai_responses/messages/instructions"), FMT).ir
        assert ir.system == SystemMessage(content=[TextPart(text="You are terse.")])

    def test_developer_item(self, registry, round_trip, payload):
        body = payload("openai_responses/messages/developer_item")
        assert round_trip(body, FMT)[0] == body
        result = registry.translate(body, FMT, "openai_chat")
        assert result.body["messages"][0] == {"role": "system", "content": "Answer in French."}

    def test_sibling_items_regrouped(self, registry, payload):
        ir = registry.to_ir(payload("openai_responses/tools/parallel_outputs"), FMT).ir
        assert [type(message) for message in ir.messages] == [UserMessage, AssistantMessage, ToolMessage]
        assert [part.tool_call_id for part in ir.messages[1].content] == ["call_p1", "call_p2"]
        assert [part.tool_call_id for part in ir.messages[2].content] == ["call_p1", "call_p2"]

    def test_reasoning_history(self, registry, round_trip, payload):
        body = payload("openai_responses/messages/reasoning_history")
        stripped = registry.to_ir(body, FMT)
        reasoning, text = stripped.ir.messages[1].content
        assert reasoning == ReasoningPart(text="Check divisors up to 9.")
        assert text == TextPart(text="Yes, 97 is prime.")
        assert codes(stripped.warnings) == [WarningCode.DROPPED_PROVIDER_FEATURE]
        assert round_trip(body, FMT)[0] == body

    def test_tool_choice_required(self, registry, payload):
        ir = registry.to_ir(payload("openai_responses/tools/tool_choice_required"), FMT).ir
        assert ir.tool_choice.mode == "any"
        assert ir.tool_call_config.parallel_tool_calls is False

    def test_strict_defaults_only_for_tools_without_one(self, registry, round_trip, payload):
        body = payload("openai_responses/tools/tool_definitions")
        assert round_trip(body, FMT)[0] == body
        chat = payload("openai_chat/tools/tool_definitions")
        tools = registry.translate(chat, "openai_chat", FMT).body["tools"]
        assert all(tool["strict"] is False for tool in tools)

    def test_hosted_and_mcp_tools(self, registry, payload):
        ir = registry.to_ir(payload("openai_responses/tools/hosted_tool"), FMT).ir
        assert [tool.name for tool in ir.tools] == ["get_weather"]
        mcp = registry.to_ir(payload("openai_responses/tools/mcp_tool"), FMT).ir.tools[0]
        assert (mcp.name, mcp.tool_type) == ("deepwiki", "mcp")

    def test_hosted_tool_dropped_for_google(self, registry, payload):
        result = registry.translate(payload("openai_responses/tools/hosted_tool"), FMT, "google")
        assert [d["name"] for d in result.body["tools"][0]["functionDeclarations"]] == ["get_weather"]
        assert WarningCode.DROPPED_PROVIDER_FEATURE in codes(result.warnings)

    def test_text_settings_pass_through(self, registry, payload):
        ir = registry.to_ir(payload("openai_responses/config/verbosity"), FMT).ir
        assert ir.response_format.kind == "text"
        assert ir.provider_extensions == {FMT: {"text": {"verbosity": "low"}}}

    def test_reasoning_summary_pass_through(self, registry, payload):
        ir = registry.to_ir(payload("openai_responses/config/reasoning_summary"), FMT).ir
        assert ir.reasoning == ReasoningConfig(effort="medium")
        assert ir.provider_extensions == {FMT: {"reasoning": {"summary": "auto"}}}

    def test_budget_approximated_as_effort(self, registry):
        result = registry.from_ir(ir_request(reasoning=ReasoningConfig(enabled=True, budget_tokens=2048)), FMT)
        assert result.body["reasoning"] == {"effort": "medium"}
        assert codes(result.warnings) == [WarningCode.UNMAPPED_PARAMETER]

    def test_unsupported_sampling_parameter(self, registry):
        result = registry.from_ir(ir_request(generation=GenerationConfig(top_k=40, max_tokens=64)), FMT)
        assert result.body["max_output_tokens"] == 64
        assert [warning.json_path for warning in result.warnings] == ["$.generation.top_k"]


class TestMalformed:
    def test_missing_input(self, registry):
        with pytest.raises(MalformedInput) as e:
            registry.to_ir({"model": "gpt-4.1"}, FMT)
        assert e.value.json_path == "$.input"

    def test_only_system_input(self, registry):
        with pytest.raises(MalformedInput) as e:
            registry.to_ir({"model": "gpt-4.1", "input": [{"role": "system", "content": "x"}]}, FMT)
        assert e.value.json_path == "$.input"

    def test_unknown_role(self, registry):
        with pytest.raises(MalformedInput) as e:
            registry.to_ir({"model": "gpt-4.1", "input": [{"role": "tool", "content": "x"}]}, FMT)
        assert e.value.json_path == "$.input[0].role"

    def test_user_item_in_response_output(self, registry):
        body = {"id": "resp_1", "status": "completed", "output": [{"role": "user", "content": "x"}]}
        with pytest.raises(MalformedInput) as e:
            registry.to_ir(body, FMT, "response")
        assert e.value.json_path == "$.output[0]"


class TestResponses:
    def test_echoed_settings_are_quiet(self, registry, round_trip, payload):
        body = payload("openai_responses/full/echoed_settings_response")
        assert registry.to_ir(body, FMT, "response").warnings == []
        assert round_trip(body, FMT, "response")[0] == body

    def test_function_call_finish(self, registry, payload):
        ir = registry.to_ir(payload("openai_responses/full/function_call_response"), FMT, "response").ir
        assert ir.choices[0].finish_reason == "tool_calls"
        assert ir.choices[0].message.content[0].tool_input == {"city": "Paris"}

    def test_incomplete_maps_to_length(self, registry, payload):
        body = payload("openai_responses/full/incomplete_response")
        assert registry.to_ir(body, FMT, "response").ir.choices[0].finish_reason == "length"
        translated = registry.translate(body, FMT, "anthropic", "response")
        assert translated.body["stop_reason"] == "max_tokens"

    def test_failed_response(self, round_trip, payload):
        body = payload("openai_responses/full/failed_response")
        back, _, ir = round_trip(body, FMT, "response")
        assert ir.choices[0].finish_reason == "error"
        assert back == body

    def test_annotations_become_citations(self, registry, payload):
        content = registry.to_ir(payload("openai_responses/full/annotated_response"), FMT, "response").ir.choices[0].message.content
        assert content[1] == CitationPart(url="https://en.wikipedia.org/wiki/Paris", span=CitationSpan(start=0, end=5))

    def test_reasoning_usage(self, registry, payload):
        usage = registry.to_ir(payload("openai_responses/full/reasoning_response"), FMT, "response").ir.usage
        assert (usage.completion_tokens, usage.reasoning_tokens, usage.cached_tokens) == (148, 128, 0)

    def test_stripped_items_get_stable_ids(self, registry, payload):
        ir = registry.to_ir(payload("openai_responses/full/reasoning_response"), FMT, "response").ir
        output = registry.from_ir(ir, FMT, "response").body["output"]
        assert [item["id"] for item in output] == ["rs_0", "msg_1"]
        assert output[1]["status"] == "completed"

    def test_extra_choices_dropped(self, registry):
        choices = [ChoiceInfo(index=i, message=AssistantMessage(content=[TextPart(text=str(i))]), finish_reason="stop")
                   for i in range(2)]
        result = registry.from_ir(IRResponse(id="r", created=0, model="m", choices=choices), FMT, "response")
        assert len(result.body["output"]) == 1
        assert [warning.json_path for warning in result.warnings] == ["$.choices[1]"]


CREATED = {"type": "response.created", "response": {
    "id": "resp_1", "object": "response", "created_at": 1741476542, "status": "in_progress", "model": "gpt-4.1",
    "output": []}}


def completed(status="completed", **fields):
    response = {"id": "resp_1", "object": "response", "status": status, "model": "gpt-4.1", "output": [], **fields}
    return {"type": f"response.{status}", "response": response}


class TestStreaming:
    def events(self, registry, payloads):
        ctx = StreamContext(source_format=ProviderFormat.OPENAI_RESPONSES)
        return list(registry.get(FMT).stream_response_from_provider(payloads, ctx)), ctx

    def test_text_stream(self, registry):
        message = {"id": "msg_1", "type": "message", "status": "in_progress", "role": "assistant", "content": []}
        part = {"item_id": "msg_1", "output_index": 0, "content_index": 0}
        payloads = [
            CREATED,
            {"type": "response.output_item.added", "output_index": 0, "item": message},
            {"type": "response.content_part.added", **part, "part": {"type": "output_text", "text": "", "annotations": []}},
            {"type": "response.output_text.delta", **part, "delta": "Hel"},
            {"type": "response.output_text.delta", **part, "delta": "lo"},
            {"type": "response.output_text.done", **part, "text": "Hello"},
            {"type": "response.content_part.done", **part},
            {"type": "response.output_item.done", "output_index": 0, "item": dict(message, status="completed")},
            completed(usage={"input_tokens": 3, "output_tokens": 2, "total_tokens": 5}),
        ]
        events, ctx = self.events(registry, payloads)
        assert [event.type for event in events] == [
            "stream_start", "content_block_start", "text_delta", "text_delta", "content_block_end",
            "finish", "usage", "stream_end",
        ]
        assert events[0].response_id == "resp_1"
        assert ctx.warnings == []

    def test_function_call_stream(self, registry):
        item = {"id": "fc_1", "type": "function_call", "status": "in_progress", "call_id": "call_1",
                "name": "get_weather", "arguments": ""}
        payloads = [
            CREATED,
            {"type": "response.output_item.added", "output_index": 0, "item": item},
            {"type": "response.function_call_arguments.delta", "item_id": "fc_1", "output_index": 0, "delta": '{"city":'},
            {"type": "response.function_call_arguments.delta", "item_id": "fc_1", "output_index": 0, "delta": '"Paris"}'},
            {"type": "response.function_call_arguments.done", "item_id": "fc_1", "output_index": 0,
             "arguments": '{"city":"Paris"}'},
            {"type": "response.output_item.done", "output_index": 0,
             "item": dict(item, status="completed", arguments='{"city":"Paris"}')},
            completed(),
        ]
        events, _ = self.events(registry, payloads)
        assert is_grammar_valid(events)
        response = reassemble(events)
        assert response.choices[0].finish_reason == "tool_calls"
        assert response.choices[0].message.content[0].tool_input == {"city": "Paris"}

    def test_reasoning_from_finished_item(self, registry):
        payloads = [
            CREATED,
            {"type": "response.output_item.added", "output_index": 0,
             "item": {"id": "rs_1", "type": "reasoning", "summary": []}},
            {"type": "response.output_item.done", "output_index": 0,
             "item": {"id": "rs_1", "type": "reasoning", "summary": [{"type": "summary_text", "text": "Thinking"}]}},
            completed(),
        ]
        events, _ = self.events(registry, payloads)
        assert reassemble(events).choices[0].message.content == [ReasoningPart(text="Thinking")]

    def test_incomplete_terminal_event(self, registry):
        events, _ = self.events(registry, [CREATED, completed("incomplete",
                                                              incomplete_details={"reason": "max_output_tokens"})])
        assert [event.finish_reason for event in events if event.type == "finish"] == ["length"]

    def test_delta_for_unknown_item(self, registry):
        payloads = [CREATED, {"type": "response.output_text.delta", "item_id": "msg_9", "output_index": 0,
                              "content_index": 0, "delta": "x"}]
        with pytest.raises(ProtocolViolation):
            self.events(registry, payloads)

    def test_error_event(self, registry):
        with pytest.raises(ProtocolViolation, match="rate limited"):
            self.events(registry, [CREATED, {"type": "error", "code": "rate_limit_exceeded", "message": "rate limited"}])

    def test_encoding_from_chat(self, registry):
        def chat(delta, finish=None):
            return {"id": "c1", "model": "gpt-4o", "choices": [{"index": 0, "delta": delta, "finish_reason": finish}]}

        out = list(registry.stream_translator("openai_chat", FMT).run([
            chat({"role": "assistant", "content": "Hel"}), chat({"content": "lo"}), chat({}, "stop"), "[DONE]",
        ]))
        assert [item["type"] for item in out] == [
            "response.created", "response.in_progress", "response.output_item.added", "response.content_part.added",
            "response.output_text.delta", "response.output_text.delta", "response.output_text.done",
            "response.content_part.done", "response.output_item.done", "response.completed",
        ]
        assert [item["sequence_number"] for item in out] == list(range(len(out)))
        final = out[-1]["response"]
        assert final["status"] == "completed"
        assert final["output"][0]["content"][0]["text"] == "Hello"
