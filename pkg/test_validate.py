#!/usr/bin/env python3
"""
IR validation tests
"""

from rosetta.ir.types import (
    AssistantMessage,
    ChoiceInfo,
    GenerationConfig,
    ImagePart,
    IRRequest,
    IRResponse,
    ReasoningConfig,
    ResponseFormatConfig,
    SystemMessage,
    TextPart,
    ToolCallPart,
    ToolChoice,
    ToolDefinition,
    ToolMessage,
    ToolResultPart,
    UserMessage,
)
from rosetta.ir.validate import validate_ir_request, validate_ir_response

WEATHER = ToolDefinition(name="get_weather", parameters={"type": "object", "properties": {}})


def request(messages=None, **extra):
    return IRRequest(model="m", messages=messages or [UserMessage(content=[TextPart(text="hi")])], **extra)


def test_minimal_request_is_valid():
    report = validate_ir_request(request())
    assert report.ok
    assert report.to_dict() == {"ok": True, "violations": []}


def test_empty_messages():
    report = validate_ir_request(IRRequest(model="m", messages=[]))
    assert "$.messages" in report.paths()


def test_role_constrained_part():
    report = validate_ir_request(request([UserMessage(content=[ToolCallPart(tool_call_id="c1", tool_name="f")])]))
    assert report.paths() == ["$.messages[0].content[0]"]
    assert "role-constrained" in report.violations[0].message


def test_unanswered_tool_call():
    messages = [
        UserMessage(content=[TextPart(text="weather?")]),
        AssistantMessage(content=[ToolCallPart(tool_call_id="c1", tool_name="get_weather")]),
        UserMessage(content=[TextPart(text="never mind")]),
    ]
    report = validate_ir_request(request(messages, tools=[WEATHER]))
    assert report.paths() == ["$.messages[1].content[0]"]


def test_answered_tool_call_is_valid():
    messages = [
        UserMessage(content=[TextPart(text="weather?")]),
        AssistantMessage(content=[ToolCallPart(tool_call_id="c1", tool_name="get_weather")]),
        ToolMessage(content=[ToolResultPart(tool_call_id="c1", content=[TextPart(text="sunny")])]),
    ]
    assert validate_ir_request(request(messages, tools=[WEATHER])).ok


def test_trailing_tool_call_is_allowed():
    messages = [
        UserMessage(content=[TextPart(text="weather?")]),
        AssistantMessage(content=[ToolCallPart(tool_call_id="c1", tool_name="get_weather")]),
    ]
    assert validate_ir_request(request(messages, tools=[WEATHER])).ok


def test_duplicate_tool_names():
    report = validate_ir_request(request(tools=[WEATHER, WEATHER]))
    assert report.paths() == ["$.tools[1].name"]


def test_tool_choice_must_name_a_known_tool():
    report = validate_ir_request(request(tools=[WEATHER], tool_choice=ToolChoice(mode="tool", tool_name="nope")))
    assert report.paths() == ["$.tool_choice.tool_name"]


def test_tool_parameters_must_be_object_schema():
    report = validate_ir_request(request(tools=[ToolDefinition(name="f", parameters={"type": "string"})]))
    assert report.paths() == ["$.tools[0].parameters"]


def test_generation_bounds():
    report = validate_ir_request(request(generation=GenerationConfig(temperature=-1, top_p=1.5, max_tokens=0)))
    assert set(report.paths()) == {"$.generation.temperature", "$.generation.top_p", "$.generation.max_tokens"}


def test_reasoning_budget_positive():
    report = validate_ir_request(request(reasoning=ReasoningConfig(enabled=True, budget_tokens=0)))
    assert report.paths() == ["$.reasoning.budget_tokens"]


def test_json_schema_needs_schema():
    report = validate_ir_request(request(response_format=ResponseFormatConfig(kind="json_schema")))
    assert report.paths() == ["$.response_format.schema"]


def test_image_needs_exactly_one_source():
    report = validate_ir_request(request([UserMessage(content=[ImagePart(url="https://x", data="AAAA")])]))
    assert report.paths() == ["$.messages[0].content[0]"]


def test_duplicated_system_instruction():
    system = SystemMessage(content=[TextPart(text="Be brief.")])
    report = validate_ir_request(request([system, UserMessage(content=[TextPart(text="hi")])], system=system))
    assert report.paths() == ["$.messages[0]"]


def test_dict_input_reports_instead_of_raising():
    report = validate_ir_request({"model": "m", "messages": [{"role": "user", "content": [{"type": "text"}]}]})
    assert not report.ok
    assert report.paths() == ["$.messages[0].content[0].text"]


def test_response_choice_indices():
    choice = ChoiceInfo(index=1, message=AssistantMessage(content=[TextPart(text="hi")]), finish_reason="stop")
    report = validate_ir_response(IRResponse(id="r", created=0, model="m", choices=[choice]))
    assert report.paths() == ["$.choices"]


def test_response_without_choices():
    report = validate_ir_response(IRResponse(id="r", created=0, model="m", choices=[]))
    assert "$.choices" in report.paths()


def test_system_message_alongside_system_field():
    system = SystemMessage(content=[TextPart(text="Be brief.")])
    other = SystemMessage(content=[TextPart(text="Be thorough.")])
    report = validate_ir_request(request([other, UserMessage(content=[TextPart(text="hi")])], system=system))
    assert report.paths() == ["$.messages[0]"]


def test_parse_failures_and_semantic_violations_together():
    report = validate_ir_request({"model": "", "messages": [{"role": "user", "content": [{"type": "text"}]}]})
    assert report.paths() == ["$.messages[0].content[0].text", "$.model"]


def test_paths_after_a_refused_message_keep_original_indices():
    system = {"role": "system", "content": [{"type": "text", "text": "Be brief."}]}
    report = validate_ir_request({
        "model": "m",
        "system": system,
        "messages": [
            {"role": "robot", "content": []},
            {"role": "user", "content": [{"type": "text", "text": "hi"}]},
            system,
        ],
    })
    assert report.paths() == ["$.messages[0]", "$.messages[2]"]


def test_missing_model_reported_once():
    report = validate_ir_request({"messages": [{"role": "user", "content": [{"type": "text", "text": "hi"}]}]})
    assert report.paths() == ["$.model"]


def test_response_dict_with_parse_and_semantic_violations():
    report = validate_ir_response({
        "id": "r", "created": 0, "model": "m",
        "choices": [{"index": 0, "message": {"role": "assistant", "content": []}, "finish_reason": "bogus"}],
        "usage": {"prompt_tokens": -1, "completion_tokens": 0},
    })
    assert report.paths() == ["$.choices[0].finish_reason", "$.usage.prompt_tokens"]


def test_non_object_input():
    report = validate_ir_request(["not", "a", "request"])
    assert not report.ok
