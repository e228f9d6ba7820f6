"""Round-trip corpus: hand-authored request and response bodies per format.

Every entry is a payload a real client or provider would send. Preserve-mode
conversion of an entry to IR and back must reproduce it exactly; strip mode
must keep its semantic projection.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

from rosetta.ir.types import ProviderFormat

CATEGORIES = ("content", "messages", "tools", "config", "full", "streaming")

GOOGLE_MODEL = "gemini-2.0-flash"

PNG = "iVBORw0KGgoAAAANSUhEUgAAAAEAAAABCAYAAAAfFcSJAAAADUlEQVR42mNkYPhfDwAChwGA60e6kgAAAABJRU5ErkJggg=="
PDF = "JVBERi0xLjQKJcOkw7zDtsOfCjIgMCBvYmoKPDwvTGVuZ3RoIDMgMCBSPj4Kc3RyZWFtCg=="
WAV = "UklGRiQAAABXQVZFZm10IBAAAAABAAEAQB8AAEAfAAABAAgAZGF0YQAAAAA="

WEATHER_SCHEMA = {
    "type": "object",
    "properties": {
        "city": {"type": "string", "description": "City name"},
        "unit": {"type": "string", "enum": ["celsius", "fahrenheit"]},
    },
    "required": ["city"],
}
TIME_SCHEMA = {
    "type": "object",
    "properties": {"timezone": {"type": "string"}},
    "required": ["timezone"],
}


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    format: ProviderFormat
    category: str
    kind: str
    body: Dict[str, Any]
    model_hint: Optional[str] = None
    error: Optional[str] = None

    @property
    def key(self) -> str:
        return f"{self.format.value}/{self.category}/{self.name}"

    def load(self) -> Dict[str, Any]:
        """Private copy of the body; converters never mutate input, tests might."""
        return copy.deepcopy(self.body)


# ═══════════════════════════════════════════════════════════════════════════
# OPENAI CHAT COMPLETIONS
# ═══════════════════════════════════════════════════════════════════════════

def _chat_tool(name: str, description: str, schema: Dict[str, Any]) -> Dict[str, Any]:
    return {"type": "function", "function": {"name": name, "description": description, "parameters": schema}}


def _chat_call(call_id: str, name: str, arguments: str) -> Dict[str, Any]:
    return {"id": call_id, "type": "function", "function": {"name": name, "arguments": arguments}}


def _chat_response(message: Dict[str, Any], finish: str = "stop", **extra: Any) -> Dict[str, Any]:
    body = {
        "id": "chatcmpl-9x1",
        "object": "chat.completion",
        "created": 1718000000,
        "model": "gpt-4o-2024-08-06",
        "choices": [{"index": 0, "message": message, "finish_reason": finish}],
        "usage": {"prompt_tokens": 21, "completion_tokens": 9, "total_tokens": 30},
    }
    body.update(extra)
    return body


def _chat() -> List[tuple]:
    weather = _chat_tool("get_weather", "Current weather for a city", WEATHER_SCHEMA)
    clock = _chat_tool("get_time", "Current time in a timezone", TIME_SCHEMA)
    user = {"role": "user", "content": "What's the weather in Paris?"}
    calls = {"role": "assistant", "content": None, "tool_calls": [_chat_call("call_a1", "get_weather", '{"city":"Paris"}')]}
    result = {"role": "tool", "tool_call_id": "call_a1", "content": '{"temperature":18,"sky":"clear"}'}
    req = lambda messages, **kw: {"model": "gpt-4o", "messages": messages, **kw}  # noqa: E731
    hello = [{"role": "user", "content": "Hello!"}]
    return [
        # content
        ("text_string", "content", "request", req(hello)),
        ("text_parts", "content", "request", req([{"role": "user", "content": [{"type": "text", "text": "Hello!"}]}])),
        ("text_multi_parts", "content", "request", req([{"role": "user", "content": [
            {"type": "text", "text": "First line."}, {"type": "text", "text": "Second line."}]}])),
        ("image_url", "content", "request", req([{"role": "user", "content": [
            {"type": "text", "text": "Describe this picture."},
            {"type": "image_url", "image_url": {"url": "https://example.com/cat.jpg", "detail": "high"}}]}])),
        ("image_base64", "content", "request", req([{"role": "user", "content": [
            {"type": "image_url", "image_url": {"url": f"data:image/png;base64,{PNG}"}}]}])),
        ("audio_input", "content", "request", req([{"role": "user", "content": [
            {"type": "text", "text": "Transcribe."},
            {"type": "input_audio", "input_audio": {"data": WAV, "format": "wav"}}]}], model="gpt-4o-audio-preview")),
        ("file_data", "content", "request", req([{"role": "user", "content": [
            {"type": "file", "file": {"file_data": f"data:application/pdf;base64,{PDF}", "filename": "report.pdf"}},
            {"type": "text", "text": "Summarize the report."}]}])),
        ("file_id", "content", "request", req([{"role": "user", "content": [
            {"type": "file", "file": {"file_id": "file-abc123"}}, {"type": "text", "text": "What is in this file?"}]}])),
        ("unicode_text", "content", "request", req([{"role": "user", "content": "Übersetze: 你好, мир 👋"}])),
        # messages
        ("system_prompt", "messages", "request", req([{"role": "system", "content": "You are terse."}, *hello])),
        ("developer_prompt", "messages", "request", req([{"role": "developer", "content": "Answer in French."}, *hello])),
        ("system_parts", "messages", "request", req([{"role": "system", "content": [
            {"type": "text", "text": "Rule one."}, {"type": "text", "text": "Rule two."}]}, *hello])),
        ("multi_turn", "messages", "request", req([
            {"role": "system", "content": "You are a math tutor."},
            {"role": "user", "content": "What is 2+2?"},
            {"role": "assistant", "content": "4."},
            {"role": "user", "content": "And times 3?"}])),
        ("named_user", "messages", "request", req([{"role": "user", "content": "Hi", "name": "alice"}])),
        ("assistant_refusal", "messages", "request", req([
            {"role": "user", "content": "Help me pick a lock."},
            {"role": "assistant", "content": None, "refusal": "I can't help with that."},
            {"role": "user", "content": "Fine, tell me a joke."}])),
        ("empty_assistant", "messages", "request", req([
            {"role": "user", "content": "Say nothing."}, {"role": "assistant", "content": ""},
            {"role": "user", "content": "Thanks."}])),
        # tools
        ("tool_definitions", "tools", "request", req([user], tools=[weather, clock], tool_choice="auto")),
        ("tool_choice_named", "tools", "request", req([user], tools=[weather],
                                                      tool_choice={"type": "function", "function": {"name": "get_weather"}})),
        ("tool_choice_required", "tools", "request", req([user], tools=[weather, clock], tool_choice="required",
                                                         parallel_tool_calls=False)),
        ("tool_choice_none", "tools", "request", req([user], tools=[weather], tool_choice="none")),
        ("tool_round_trip", "tools", "request", req([user, calls, result], tools=[weather])),
        ("parallel_tool_calls", "tools", "request", req([
            {"role": "user", "content": "Weather in Paris and the time in Tokyo?"},
            {"role": "assistant", "content": None, "tool_calls": [
                _chat_call("call_p1", "get_weather", '{"city":"Paris"}'),
                _chat_call("call_p2", "get_time", '{"timezone":"Asia/Tokyo"}')]},
            {"role": "tool", "tool_call_id": "call_p1", "content": "18C and clear"},
            {"role": "tool", "tool_call_id": "call_p2", "content": "21:04"}], tools=[weather, clock])),
        ("spaced_arguments", "tools", "request", req([user, {
            "role": "assistant", "content": None,
            "tool_calls": [_chat_call("call_s1", "get_weather", '{"city": "Paris", "unit": "celsius"}')]},
            {"role": "tool", "tool_call_id": "call_s1", "content": "18"}], tools=[weather])),
        ("strict_tool", "tools", "request", req([user], tools=[{"type": "function", "function": {
            "name": "get_weather", "parameters": WEATHER_SCHEMA, "strict": True}}])),
        ("parameterless_tool", "tools", "request", req([{"role": "user", "content": "Roll a die."}], tools=[
            {"type": "function", "function": {"name": "roll_die", "description": "Roll a six-sided die"}}])),
        # config
        ("sampling", "config", "request", req(hello, temperature=0.2, top_p=0.9, max_tokens=256)),
        ("max_completion_tokens", "config", "request", req(hello, model="o3-mini", max_completion_tokens=1024)),
        ("stop_string", "config", "request", req(hello, stop="\n\n")),
        ("stop_list", "config", "request", req(hello, stop=["END", "STOP"])),
        ("penalties", "config", "request", req(hello, frequency_penalty=0.5, presence_penalty=-0.25, seed=42,
                                               logit_bias={"50256": -100})),
        ("logprobs", "config", "request", req(hello, logprobs=True, top_logprobs=3)),
        ("json_object", "config", "request", req(hello, response_format={"type": "json_object"})),
        ("json_schema", "config", "request", req(hello, response_format={"type": "json_schema", "json_schema": {
            "name": "greeting", "schema": {"type": "object", "properties": {"text": {"type": "string"}}}, "strict": True}})),
        ("reasoning_effort", "config", "request", req(hello, model="o3-mini", reasoning_effort="low")),
        ("passthrough_keys", "config", "request", req(hello, user="user-1234", store=True, metadata={"team": "search"}, n=2)),
        # full
        ("agent_conversation", "full", "request", req([
            {"role": "system", "content": "You are a travel assistant."},
            user, calls, result,
            {"role": "assistant", "content": "It is 18 degrees and clear in Paris."},
            {"role": "user", "content": [{"type": "text", "text": "And this place?"},
                                         {"type": "image_url", "image_url": {"url": "https://example.com/lyon.jpg"}}]}],
            tools=[weather, clock], tool_choice="auto", temperature=0.7, max_tokens=512)),
        ("text_response", "full", "response", _chat_response({"role": "assistant", "content": "Hello! How can I help?"},
                                                             system_fingerprint="fp_3e6f1f2a4c")),
        ("tool_call_response", "full", "response", _chat_response(
            {"role": "assistant", "content": None, "tool_calls": [_chat_call("call_r1", "get_weather", '{"city":"Paris"}')]},
            "tool_calls")),
        ("refusal_response", "full", "response", _chat_response(
            {"role": "assistant", "content": None, "refusal": "I can't assist with that."})),
        ("length_response", "full", "response", _chat_response({"role": "assistant", "content": "Once upon a"}, "length")),
        ("multi_choice_response", "full", "response", {
            "id": "chatcmpl-9x2", "object": "chat.completion", "created": 1718000001, "model": "gpt-4o",
            "choices": [
                {"index": 0, "message": {"role": "assistant", "content": "Heads."}, "finish_reason": "stop", "logprobs": None},
                {"index": 1, "message": {"role": "assistant", "content": "Tails."}, "finish_reason": "stop", "logprobs": None}],
            "usage": {"prompt_tokens": 8, "completion_tokens": 4, "total_tokens": 12}}),
        ("annotated_response", "full", "response", _chat_response({
            "role": "assistant", "content": "Paris is the capital of France.",
            "annotations": [{"type": "url_citation", "url_citation": {
                "url": "https://en.wikipedia.org/wiki/Paris", "start_index": 0, "end_index": 5, "title": "Paris"}}]})),
        ("usage_details_response", "full", "response", _chat_response(
            {"role": "assistant", "content": "Done."},
            usage={"prompt_tokens": 120, "completion_tokens": 40, "total_tokens": 160,
                   "prompt_tokens_details": {"cached_tokens": 64, "audio_tokens": 0},
                   "completion_tokens_details": {"reasoning_tokens": 32, "audio_tokens": 0}})),
        ("reasoning_content_response", "full", "response", _chat_response(
            {"role": "assistant", "reasoning_content": "The user greets me.", "content": "Hi there!"})),
        # streaming
        ("stream_text", "streaming", "request", req(hello, stream=True)),
        ("stream_usage", "streaming", "request", req(hello, stream=True, stream_options={"include_usage": True})),
        ("stream_tools", "streaming", "request", req([user], tools=[weather], stream=True,
                                                     stream_options={"include_usage": True})),
    ]


# ═══════════════════════════════════════════════════════════════════════════
# ANTHROPIC MESSAGES
# ═══════════════════════════════════════════════════════════════════════════

def _anthropic_response(content: List[Dict[str, Any]], stop: str = "end_turn", **extra: Any) -> Dict[str, Any]:
    body = {
        "id": "msg_01XFDUDYJgAACzvnptvVoYEL",
        "type": "message",
        "role": "assistant",
        "model": "claude-sonnet-4-20250514",
        "content": content,
        "stop_reason": stop,
        "stop_sequence": None,
        "usage": {"input_tokens": 25, "output_tokens": 12},
    }
    body.update(extra)
    return body


def _anthropic() -> List[tuple]:
    weather = {"name": "get_weather", "description": "Current weather for a city", "input_schema": WEATHER_SCHEMA}
    clock = {"name": "get_time", "description": "Current time in a timezone", "input_schema": TIME_SCHEMA}
    user = {"role": "user", "content": "What's the weather in Paris?"}
    call = {"role": "assistant", "content": [
        {"type": "text", "text": "Let me check."},
        {"type": "tool_use", "id": "toolu_01A", "name": "get_weather", "input": {"city": "Paris"}}]}
    result = {"role": "user", "content": [{"type": "tool_result", "tool_use_id": "toolu_01A", "content": "18C and clear"}]}
    req = lambda messages, **kw: {"model": "claude-sonnet-4-20250514", "max_tokens": 1024, "messages": messages, **kw}  # noqa: E731
    hello = [{"role": "user", "content": "Hello!"}]
    return [
        # content
        ("text_string", "content", "request", req(hello)),
        ("text_blocks", "content", "request", req([{"role": "user", "content": [{"type": "text", "text": "Hello!"}]}])),
        ("image_base64", "content", "request", req([{"role": "user", "content": [
            {"type": "image", "source": {"type": "base64", "media_type": "image/png", "data": PNG}},
            {"type": "text", "text": "What is this?"}]}])),
        ("image_url", "content", "request", req([{"role": "user", "content": [
            {"type": "image", "source": {"type": "url", "url": "https://example.com/cat.jpg"}},
            {"type": "text", "text": "Describe the cat."}]}])),
        ("image_file", "content", "request", req([{"role": "user", "content": [
            {"type": "image", "source": {"type": "file", "file_id": "file_011CNha8iCJcU1wXNR6q4V8w"}}]}])),
        ("document_pdf", "content", "request", req([{"role": "user", "content": [
            {"type": "document", "source": {"type": "base64", "media_type": "application/pdf", "data": PDF},
             "title": "Quarterly report"},
            {"type": "text", "text": "Summarize."}]}])),
        ("document_text", "content", "request", req([{"role": "user", "content": [
            {"type": "document", "source": {"type": "text", "media_type": "text/plain", "data": "The grass is green."},
             "citations": {"enabled": True}},
            {"type": "text", "text": "What color is the grass?"}]}])),
        ("document_url", "content", "request", req([{"role": "user", "content": [
            {"type": "document", "source": {"type": "url", "url": "https://example.com/report.pdf"}},
            {"type": "text", "text": "Key findings?"}]}])),
        ("cache_control_text", "content", "request", req([{"role": "user", "content": [
            {"type": "text", "text": "A long shared context.", "cache_control": {"type": "ephemeral"}},
            {"type": "text", "text": "Question about it."}]}])),
        ("unicode_text", "content", "request", req([{"role": "user", "content": "Übersetze: 你好, мир 👋"}])),
        # messages
        ("system_string", "messages", "request", req(hello, system="You are terse.")),
        ("system_blocks", "messages", "request", req(hello, system=[
            {"type": "text", "text": "You are a careful assistant."},
            {"type": "text", "text": "Cite your sources.", "cache_control": {"type": "ephemeral"}}])),
        ("multi_turn", "messages", "request", req([
            {"role": "user", "content": "What is 2+2?"},
            {"role": "assistant", "content": "4."},
            {"role": "user", "content": "And times 3?"}], system="You are a math tutor.")),
        ("thinking_history", "messages", "request", req([
            {"role": "user", "content": "Is 97 prime?"},
            {"role": "assistant", "content": [
                {"type": "thinking", "thinking": "Check divisors up to 9.", "signature": "EqQBCgIYAhIM1gbcDa9GJwZA2b3h"},
                {"type": "text", "text": "Yes, 97 is prime."}]},
            {"role": "user", "content": "And 91?"}], thinking={"type": "enabled", "budget_tokens": 2048})),
        ("assistant_prefill", "messages", "request", req([
            {"role": "user", "content": "List three colors as JSON."},
            {"role": "assistant", "content": "["}])),
        # tools
        ("tool_definitions", "tools", "request", req([user], tools=[weather, clock], tool_choice={"type": "auto"})),
        ("tool_choice_named", "tools", "request", req([user], tools=[weather], tool_choice={"type": "tool", "name": "get_weather"})),
        ("tool_choice_any_serial", "tools", "request", req([user], tools=[weather, clock],
                                                           tool_choice={"type": "any", "disable_parallel_tool_use": True})),
        ("tool_choice_none", "tools", "request", req([user], tools=[weather], tool_choice={"type": "none"})),
        ("tool_round_trip", "tools", "request", req([user, call, result], tools=[weather])),
        ("tool_result_and_text", "tools", "request", req([user, call, {"role": "user", "content": [
            {"type": "tool_result", "tool_use_id": "toolu_01A", "content": "18C and clear"},
            {"type": "text", "text": "Also, should I bring an umbrella?"}]}], tools=[weather])),
        ("tool_result_blocks", "tools", "request", req([user, call, {"role": "user", "content": [
            {"type": "tool_result", "tool_use_id": "toolu_01A", "content": [{"type": "text", "text": "station offline"}],
             "is_error": True}]}], tools=[weather])),
        ("tool_result_empty", "tools", "request", req([user, call, {"role": "user", "content": [
            {"type": "tool_result", "tool_use_id": "toolu_01A"}]}], tools=[weather])),
        ("parallel_tool_use", "tools", "request", req([
            {"role": "user", "content": "Weather in Paris and the time in Tokyo?"},
            {"role": "assistant", "content": [
                {"type": "tool_use", "id": "toolu_01P", "name": "get_weather", "input": {"city": "Paris"}},
                {"type": "tool_use", "id": "toolu_01T", "name": "get_time", "input": {"timezone": "Asia/Tokyo"}}]},
            {"role": "user", "content": [
                {"type": "tool_result", "tool_use_id": "toolu_01P", "content": "18C"},
                {"type": "tool_result", "tool_use_id": "toolu_01T", "content": "21:04"}]}], tools=[weather, clock])),
        ("cached_tool", "tools", "request", req([user], tools=[dict(weather, cache_control={"type": "ephemeral"})])),
        ("hosted_tool", "tools", "request", req([{"role": "user", "content": "Latest news on fusion?"}], tools=[
            weather, {"type": "web_search_20250305", "name": "web_search", "max_uses": 3}])),
        # config
        ("sampling", "config", "request", req(hello, temperature=0.3, top_p=0.95, top_k=40)),
        ("stop_sequences", "config", "request", req(hello, stop_sequences=["\n\nHuman:", "END"])),
        ("thinking_enabled", "config", "request", req(hello, max_tokens=8192, thinking={"type": "enabled", "budget_tokens": 4096})),
        ("thinking_disabled", "config", "request", req(hello, thinking={"type": "disabled"})),
        ("metadata", "config", "request", req(hello, metadata={"user_id": "8d5f-user"})),
        ("service_tier", "config", "request", req(hello, service_tier="standard_only", stream=False)),
        # full
        ("agent_conversation", "full", "request", req([
            user, call, result,
            {"role": "assistant", "content": "It is 18 degrees and clear in Paris."},
            {"role": "user", "content": [
                {"type": "image", "source": {"type": "url", "url": "https://example.com/lyon.jpg"}},
                {"type": "text", "text": "And this place?"}]}],
            system="You are a travel assistant.", tools=[weather, clock], tool_choice={"type": "auto"}, temperature=0.7)),
        ("text_response", "full", "response", _anthropic_response([{"type": "text", "text": "Hello! How can I help?"}])),
        ("tool_use_response", "full", "response", _anthropic_response([
            {"type": "text", "text": "Let me check."},
            {"type": "tool_use", "id": "toolu_01B", "name": "get_weather", "input": {"city": "Paris", "unit": "celsius"}}],
            "tool_use")),
        ("thinking_response", "full", "response", _anthropic_response([
            {"type": "thinking", "thinking": "The user greets me.", "signature": "EqQBCgIYAhIMsig"},
            {"type": "text", "text": "Hi there!"}])),
        ("citations_response", "full", "response", _anthropic_response([{
            "type": "text", "text": "The grass is green.",
            "citations": [{"type": "char_location", "cited_text": "The grass is green.", "document_index": 0,
                           "document_title": "Facts", "start_char_index": 0, "end_char_index": 19}]}])),
        ("max_tokens_response", "full", "response", _anthropic_response([{"type": "text", "text": "Once upon a"}], "max_tokens")),
        ("stop_sequence_response", "full", "response", _anthropic_response(
            [{"type": "text", "text": "Step one"}], "stop_sequence", stop_sequence="###")),
        ("cache_usage_response", "full", "response", _anthropic_response(
            [{"type": "text", "text": "Done."}],
            usage={"input_tokens": 50, "output_tokens": 3, "cache_read_input_tokens": 2048,
                   "cache_creation_input_tokens": 0, "service_tier": "standard"})),
        # streaming
        ("stream_text", "streaming", "request", req(hello, stream=True)),
        ("stream_tools", "streaming", "request", req([user], tools=[weather], stream=True)),
        ("stream_thinking", "streaming", "request", req(hello, max_tokens=8192, stream=True,
                                                        thinking={"type": "enabled", "budget_tokens": 2048})),
    ]


# ═══════════════════════════════════════════════════════════════════════════
# GOOGLE GENAI
# ═══════════════════════════════════════════════════════════════════════════

def _google_response(parts: List[Dict[str, Any]], finish: str = "STOP", **extra: Any) -> Dict[str, Any]:
    body = {
        "candidates": [{"content": {"role": "model", "parts": parts}, "finishReason": finish, "index": 0}],
        "usageMetadata": {"promptTokenCount": 12, "candidatesTokenCount": 8, "totalTokenCount": 20},
        "modelVersion": GOOGLE_MODEL,
        "responseId": "mK2FaPaXLvC5nvgPqdWq4Ag",
    }
    body.update(extra)
    return body


def _google() -> List[tuple]:
    weather = {"name": "get_weather", "description": "Current weather for a city", "parameters": WEATHER_SCHEMA}
    clock = {"name": "get_time", "description": "Current time in a timezone", "parameters": TIME_SCHEMA}
    user = {"role": "user", "parts": [{"text": "What's the weather in Paris?"}]}
    call = {"role": "model", "parts": [{"functionCall": {"name": "get_weather", "args": {"city": "Paris"}}}]}
    result = {"role": "user", "parts": [{"functionResponse": {"name": "get_weather",
                                                             "response": {"temperature": 18, "sky": "clear"}}}]}
    req = lambda contents, **kw: {"contents": contents, **kw}  # noqa: E731
    hello = [{"role": "user", "parts": [{"text": "Hello!"}]}]
    return [
        # content
        ("text", "content", "request", req(hello)),
        ("text_multi_parts", "content", "request", req([{"role": "user", "parts": [
            {"text": "First line."}, {"text": "Second line."}]}])),
        ("inline_image", "content", "request", req([{"role": "user", "parts": [
            {"inlineData": {"mimeType": "image/png", "data": PNG}}, {"text": "What is this?"}]}])),
        ("file_uri_image", "content", "request", req([{"role": "user", "parts": [
            {"fileData": {"mimeType": "image/jpeg", "fileUri": "gs://bucket/cat.jpg"}}, {"text": "Describe the cat."}]}])),
        ("inline_pdf", "content", "request", req([{"role": "user", "parts": [
            {"inlineData": {"mimeType": "application/pdf", "data": PDF}}, {"text": "Summarize."}]}])),
        ("inline_audio", "content", "request", req([{"role": "user", "parts": [
            {"text": "Transcribe."}, {"inlineData": {"mimeType": "audio/wav", "data": WAV}}]}])),
        ("file_uri_video", "content", "request", req([{"role": "user", "parts": [
            {"fileData": {"mimeType": "video/mp4", "fileUri": "https://generativelanguage.googleapis.com/v1beta/files/abc"}},
            {"text": "What happens in this clip?"}]}])),
        ("unicode_text", "content", "request", req([{"role": "user", "parts": [{"text": "Übersetze: 你好, мир 👋"}]}])),
        # messages
        ("system_instruction", "messages", "request", req(hello, systemInstruction={"parts": [{"text": "You are terse."}]})),
        ("multi_turn", "messages", "request", req([
            {"role": "user", "parts": [{"text": "What is 2+2?"}]},
            {"role": "model", "parts": [{"text": "4."}]},
            {"role": "user", "parts": [{"text": "And times 3?"}]}],
            systemInstruction={"parts": [{"text": "You are a math tutor."}]})),
        ("thought_history", "messages", "request", req([
            {"role": "user", "parts": [{"text": "Is 97 prime?"}]},
            {"role": "model", "parts": [
                {"text": "Check divisors up to 9.", "thought": True, "thoughtSignature": "CiwBVKhc7o"},
                {"text": "Yes, 97 is prime."}]},
            {"role": "user", "parts": [{"text": "And 91?"}]}])),
        ("model_in_body", "messages", "request", req(hello, model="models/gemini-2.0-flash")),
        # tools
        ("function_declarations", "tools", "request", req([user], tools=[{"functionDeclarations": [weather, clock]}],
                                                          toolConfig={"functionCallingConfig": {"mode": "AUTO"}})),
        ("tool_choice_named", "tools", "request", req([user], tools=[{"functionDeclarations": [weather, clock]}],
                                                      toolConfig={"functionCallingConfig": {
                                                          "mode": "ANY", "allowedFunctionNames": ["get_weather"]}})),
        ("tool_choice_none", "tools", "request", req([user], tools=[{"functionDeclarations": [weather]}],
                                                     toolConfig={"functionCallingConfig": {"mode": "NONE"}})),
        ("function_round_trip", "tools", "request", req([user, call, result], tools=[{"functionDeclarations": [weather]}])),
        ("function_ids", "tools", "request", req([
            user,
            {"role": "model", "parts": [{"functionCall": {"id": "fc-17", "name": "get_weather", "args": {"city": "Paris"}}}]},
            {"role": "user", "parts": [{"functionResponse": {"id": "fc-17", "name": "get_weather",
                                                             "response": {"temperature": 18}}}]}],
            tools=[{"functionDeclarations": [weather]}])),
        ("function_role", "tools", "request", req([
            user, call, {"role": "function", "parts": [{"functionResponse": {"name": "get_weather",
                                                                             "response": {"temperature": 18}}}]}],
            tools=[{"functionDeclarations": [weather]}])),
        ("result_wrapper", "tools", "request", req([
            user, call, {"role": "user", "parts": [{"functionResponse": {"name": "get_weather",
                                                                         "response": {"result": "sunny"}}}]}],
            tools=[{"functionDeclarations": [weather]}])),
        ("error_response", "tools", "request", req([
            user, call, {"role": "user", "parts": [{"functionResponse": {"name": "get_weather",
                                                                         "response": {"error": "station offline"}}}]}],
            tools=[{"functionDeclarations": [weather]}])),
        ("parallel_calls", "tools", "request", req([
            {"role": "user", "parts": [{"text": "Weather in Paris and the time in Tokyo?"}]},
            {"role": "model", "parts": [
                {"functionCall": {"name": "get_weather", "args": {"city": "Paris"}}},
                {"functionCall": {"name": "get_time", "args": {"timezone": "Asia/Tokyo"}}}]},
            {"role": "user", "parts": [
                {"functionResponse": {"name": "get_weather", "response": {"temperature": 18}}},
                {"functionResponse": {"name": "get_time", "response": {"time": "21:04"}}}]}],
            tools=[{"functionDeclarations": [weather, clock]}])),
        ("openapi_types", "tools", "request", req([user], tools=[{"functionDeclarations": [{
            "name": "get_weather", "parameters": {"type": "OBJECT", "properties": {"city": {"type": "STRING"}},
                                                  "required": ["city"]}}]}])),
        ("json_schema_parameters", "tools", "request", req([user], tools=[{"functionDeclarations": [{
            "name": "get_weather", "parametersJsonSchema": WEATHER_SCHEMA}]}])),
        ("tool_groups", "tools", "request", req([user], tools=[{"functionDeclarations": [weather]},
                                                               {"functionDeclarations": [clock]}])),
        ("search_grounding", "tools", "request", req([{"role": "user", "parts": [{"text": "Latest news on fusion?"}]}],
                                                     tools=[{"functionDeclarations": [weather]}, {"googleSearch": {}}])),
        ("code_execution", "tools", "request", req([{"role": "user", "parts": [{"text": "Sum the first 50 primes."}]}],
                                                   tools=[{"codeExecution": {}}])),
        # config
        ("sampling", "config", "request", req(hello, generationConfig={
            "temperature": 0.2, "topP": 0.9, "topK": 32, "maxOutputTokens": 256})),
        ("stop_sequences", "config", "request", req(hello, generationConfig={"stopSequences": ["END"]})),
        ("response_schema", "config", "request", req(hello, generationConfig={
            "responseMimeType": "application/json",
            "responseSchema": {"type": "OBJECT", "properties": {"text": {"type": "STRING"}}}})),
        ("response_json_schema", "config", "request", req(hello, generationConfig={
            "responseMimeType": "application/json",
            "responseJsonSchema": {"type": "object", "properties": {"text": {"type": "string"}}}})),
        ("json_mode", "config", "request", req(hello, generationConfig={"responseMimeType": "application/json"})),
        ("thinking_budget", "config", "request", req(hello, generationConfig={
            "thinkingConfig": {"thinkingBudget": 1024, "includeThoughts": True}})),
        ("thinking_off", "config", "request", req(hello, generationConfig={"thinkingConfig": {"thinkingBudget": 0}})),
        ("thinking_dynamic", "config", "request", req(hello, generationConfig={"thinkingConfig": {"thinkingBudget": -1}})),
        ("penalties", "config", "request", req(hello, generationConfig={
            "presencePenalty": 0.5, "frequencyPenalty": 0.25, "seed": 7})),
        ("logprobs", "config", "request", req(hello, generationConfig={"responseLogprobs": True, "logprobs": 3})),
        ("candidate_count", "config", "request", req(hello, generationConfig={"candidateCount": 2, "temperature": 1.0})),
        ("safety_settings", "config", "request", req(hello, safetySettings=[
            {"category": "HARM_CATEGORY_HARASSMENT", "threshold": "BLOCK_ONLY_HIGH"}])),
        ("empty_generation_config", "config", "request", req(hello, generationConfig={})),
        # full
        ("agent_conversation", "full", "request", req(
            [user, call, result,
             {"role": "model", "parts": [{"text": "It is 18 degrees and clear in Paris."}]},
             {"role": "user", "parts": [{"fileData": {"mimeType": "image/jpeg", "fileUri": "gs://bucket/lyon.jpg"}},
                                        {"text": "And this place?"}]}],
            systemInstruction={"parts": [{"text": "You are a travel assistant."}]},
            tools=[{"functionDeclarations": [weather, clock]}],
            toolConfig={"functionCallingConfig": {"mode": "AUTO"}},
            generationConfig={"temperature": 0.7, "maxOutputTokens": 512})),
        ("text_response", "full", "response", _google_response([{"text": "Hello! How can I help?"}])),
        ("function_call_response", "full", "response", _google_response(
            [{"functionCall": {"name": "get_weather", "args": {"city": "Paris"}}}])),
        ("thought_response", "full", "response", _google_response(
            [{"text": "The user greets me.", "thought": True}, {"text": "Hi there!"}],
            usageMetadata={"promptTokenCount": 12, "candidatesTokenCount": 4, "thoughtsTokenCount": 6,
                           "totalTokenCount": 22})),
        ("citation_response", "full", "response", _google_response(
            [{"text": "Paris is the capital of France."}],
            candidates=[{"content": {"role": "model", "parts": [{"text": "Paris is the capital of France."}]},
                         "finishReason": "STOP", "index": 0,
                         "citationMetadata": {"citations": [
                             {"startIndex": 0, "endIndex": 31, "uri": "https://en.wikipedia.org/wiki/Paris", "license": ""}]}}])),
        ("safety_ratings_response", "full", "response", _google_response(
            [{"text": "Sure."}],
            candidates=[{"content": {"role": "model", "parts": [{"text": "Sure."}]}, "finishReason": "STOP", "index": 0,
                         "safetyRatings": [{"category": "HARM_CATEGORY_HARASSMENT", "probability": "NEGLIGIBLE"}],
                         "avgLogprobs": -0.12}])),
        ("max_tokens_response", "full", "response", _google_response([{"text": "Once upon a"}], "MAX_TOKENS")),
        ("blocked_response", "full", "response", {
            "candidates": [{"finishReason": "SAFETY", "index": 0}],
            "usageMetadata": {"promptTokenCount": 9, "totalTokenCount": 9},
            "modelVersion": GOOGLE_MODEL, "responseId": "bL2FaPa"}),
        ("prompt_blocked_response", "full", "response", {
            "promptFeedback": {"blockReason": "SAFETY"},
            "usageMetadata": {"promptTokenCount": 9, "totalTokenCount": 9},
            "modelVersion": GOOGLE_MODEL}),
        ("timestamped_response", "full", "response", _google_response(
            [{"text": "Done."}], createTime="2025-06-01T12:30:45.123456Z")),
        # streaming: streamGenerateContent takes the same request body; chunks are responses
        ("stream_request", "streaming", "request", req(hello, generationConfig={"temperature": 0.5})),
        ("stream_first_chunk", "streaming", "response", {
            "candidates": [{"content": {"role": "model", "parts": [{"text": "Hel"}]}, "index": 0}],
            "modelVersion": GOOGLE_MODEL, "responseId": "c12"}),
        ("stream_final_chunk", "streaming", "response", _google_response([{"text": "Hello there."}])),
    ]


# ═══════════════════════════════════════════════════════════════════════════
# OPENAI RESPONSES
# ═══════════════════════════════════════════════════════════════════════════

def _responses_response(output: List[Dict[str, Any]], status: str = "completed", **extra: Any) -> Dict[str, Any]:
    body = {
        "id": "resp_67ccd2bed1ec8190b14f964abc054267",
        "object": "response",
        "created_at": 1741476542,
        "status": status,
        "error": None,
        "incomplete_details": None,
        "model": "gpt-4.1-2025-04-14",
        "output": output,
        "usage": {"input_tokens": 36, "output_tokens": 87, "total_tokens": 123},
    }
    body.update(extra)
    return body


def _message_item(text: str, item_id: str = "msg_67ccd2bf17f0819081ff3bb2cf6508e6") -> Dict[str, Any]:
    return {"type": "message", "id": item_id, "status": "completed", "role": "assistant",
            "content": [{"type": "output_text", "text": text, "annotations": []}]}


def _responses() -> List[tuple]:
    weather = {"type": "function", "name": "get_weather", "description": "Current weather for a city",
               "parameters": WEATHER_SCHEMA}
    clock = {"type": "function", "name": "get_time", "description": "Current time in a timezone", "parameters": TIME_SCHEMA}
    user = {"role": "user", "content": "What's the weather in Paris?"}
    call = {"type": "function_call", "call_id": "call_w1", "name": "get_weather", "arguments": '{"city":"Paris"}'}
    output = {"type": "function_call_output", "call_id": "call_w1", "output": '{"temperature":18,"sky":"clear"}'}
    req = lambda items, **kw: {"model": "gpt-4.1", "input": items, **kw}  # noqa: E731
    hello = [{"role": "user", "content": "Hello!"}]
    return [
        # content
        ("input_string", "content", "request", req("Hello!")),
        ("input_message", "content", "request", req(hello)),
        ("typed_input_text", "content", "request", req([{"type": "message", "role": "user", "content": [
            {"type": "input_text", "text": "Hello!"}]}])),
        ("input_image_url", "content", "request", req([{"role": "user", "content": [
            {"type": "input_text", "text": "Describe this picture."},
            {"type": "input_image", "image_url": "https://example.com/cat.jpg", "detail": "auto"}]}])),
        ("input_image_base64", "content", "request", req([{"role": "user", "content": [
            {"type": "input_image", "image_url": f"data:image/png;base64,{PNG}"}]}])),
        ("input_image_file", "content", "request", req([{"role": "user", "content": [
            {"type": "input_image", "file_id": "file-img123", "detail": "low"}]}])),
        ("input_file_data", "content", "request", req([{"role": "user", "content": [
            {"type": "input_file", "filename": "report.pdf", "file_data": f"data:application/pdf;base64,{PDF}"},
            {"type": "input_text", "text": "Summarize the report."}]}])),
        ("input_file_url", "content", "request", req([{"role": "user", "content": [
            {"type": "input_file", "file_url": "https://example.com/report.pdf"},
            {"type": "input_text", "text": "Key findings?"}]}])),
        ("input_file_id", "content", "request", req([{"role": "user", "content": [
            {"type": "input_file", "file_id": "file-abc123"}, {"type": "input_text", "text": "What is in this file?"}]}])),
        ("unicode_text", "content", "request", req("Übersetze: 你好, мир 👋")),
        # messages
        ("instructions", "messages", "request", req(hello, instructions="You are terse.")),
        ("developer_item", "messages", "request", req([{"role": "developer", "content": "Answer in French."}, *hello])),
        ("system_item", "messages", "request", req([{"type": "message", "role": "system", "content": "Be kind."}, *hello])),
        ("multi_turn", "messages", "request", req([
            {"role": "user", "content": "What is 2+2?"},
            {"type": "message", "role": "assistant", "content": [{"type": "output_text", "text": "4.", "annotations": []}]},
            {"role": "user", "content": "And times 3?"}], instructions="You are a math tutor.")),
        ("assistant_string", "messages", "request", req([
            {"role": "user", "content": "Hi"}, {"role": "assistant", "content": "Hello!"},
            {"role": "user", "content": "Bye"}])),
        ("reasoning_history", "messages", "request", req([
            {"role": "user", "content": "Is 97 prime?"},
            {"type": "reasoning", "id": "rs_6820f383d7c08191", "summary": [
                {"type": "summary_text", "text": "Check divisors up to 9."}], "encrypted_content": "gAAAAABoIPOD"},
            {"type": "message", "id": "msg_6820f3842a7c", "status": "completed", "role": "assistant",
             "content": [{"type": "output_text", "text": "Yes, 97 is prime.", "annotations": []}]},
            {"role": "user", "content": "And 91?"}], reasoning={"effort": "medium"})),
        # tools
        ("tool_definitions", "tools", "request", req([user], tools=[weather, clock], tool_choice="auto")),
        ("tool_choice_named", "tools", "request", req([user], tools=[weather],
                                                      tool_choice={"type": "function", "name": "get_weather"})),
        ("tool_choice_required", "tools", "request", req([user], tools=[weather, clock], tool_choice="required",
                                                         parallel_tool_calls=False)),
        ("function_round_trip", "tools", "request", req([user, call, output], tools=[weather])),
        ("function_call_ids", "tools", "request", req([
            user, dict(call, id="fc_68a9b1", status="completed"), output], tools=[weather])),
        ("parallel_outputs", "tools", "request", req([
            {"role": "user", "content": "Weather in Paris and the time in Tokyo?"},
            {"type": "function_call", "call_id": "call_p1", "name": "get_weather", "arguments": '{"city":"Paris"}'},
            {"type": "function_call", "call_id": "call_p2", "name": "get_time", "arguments": '{"timezone":"Asia/Tokyo"}'},
            {"type": "function_call_output", "call_id": "call_p1", "output": "18C"},
            {"type": "function_call_output", "call_id": "call_p2", "output": "21:04"}], tools=[weather, clock])),
        ("strict_tool", "tools", "request", req([user], tools=[dict(weather, strict=True)])),
        ("hosted_tool", "tools", "request", req([{"role": "user", "content": "Latest news on fusion?"}], tools=[
            weather, {"type": "web_search_preview", "search_context_size": "medium"}])),
        ("mcp_tool", "tools", "request", req([{"role": "user", "content": "What transport protocols does MCP support?"}],
                                             tools=[{"type": "mcp", "server_label": "deepwiki",
                                                     "server_url": "https://mcp.deepwiki.com/mcp",
                                                     "require_approval": "never"}])),
        # config
        ("sampling", "config", "request", req(hello, temperature=0.2, top_p=0.9, max_output_tokens=256)),
        ("json_schema", "config", "request", req(hello, text={"format": {
            "type": "json_schema", "name": "greeting",
            "schema": {"type": "object", "properties": {"text": {"type": "string"}}, "required": ["text"],
                       "additionalProperties": False}, "strict": True}})),
        ("json_object", "config", "request", req(hello, text={"format": {"type": "json_object"}})),
        ("verbosity", "config", "request", req(hello, text={"format": {"type": "text"}, "verbosity": "low"})),
        ("reasoning_effort", "config", "request", req(hello, model="o4-mini", reasoning={"effort": "high"})),
        ("reasoning_summary", "config", "request", req(hello, model="o4-mini", reasoning={"effort": "medium", "summary": "auto"})),
        ("top_logprobs", "config", "request", req(hello, top_logprobs=5)),
        ("passthrough_keys", "config", "request", req(hello, store=False, metadata={"team": "search"},
                                                      previous_response_id="resp_abc", truncation="auto")),
        # full
        ("agent_conversation", "full", "request", req([
            user, call, output,
            {"type": "message", "role": "assistant", "content": [
                {"type": "output_text", "text": "It is 18 degrees and clear in Paris.", "annotations": []}]},
            {"role": "user", "content": [{"type": "input_text", "text": "And this place?"},
                                         {"type": "input_image", "image_url": "https://example.com/lyon.jpg"}]}],
            instructions="You are a travel assistant.", tools=[weather, clock], tool_choice="auto", temperature=0.7)),
        ("text_response", "full", "response", _responses_response([_message_item("Hello! How can I help?")])),
        ("function_call_response", "full", "response", _responses_response([{
            "type": "function_call", "id": "fc_67ca09c6bedc8190", "call_id": "call_unLAR8MvFNptuiZK6K6HCy5k",
            "name": "get_weather", "arguments": '{"city":"Paris"}', "status": "completed"}])),
        ("reasoning_response", "full", "response", _responses_response([
            {"type": "reasoning", "id": "rs_6820f383d7c08191", "summary": [
                {"type": "summary_text", "text": "The user greets me."}]},
            _message_item("Hi there!")],
            usage={"input_tokens": 10, "input_tokens_details": {"cached_tokens": 0}, "output_tokens": 148,
                   "output_tokens_details": {"reasoning_tokens": 128}, "total_tokens": 158})),
        ("incomplete_response", "full", "response", _responses_response(
            [_message_item("Once upon a")], "incomplete", incomplete_details={"reason": "max_output_tokens"})),
        ("annotated_response", "full", "response", _responses_response([{
            "type": "message", "id": "msg_a1", "status": "completed", "role": "assistant",
            "content": [{"type": "output_text", "text": "Paris is the capital of France.", "annotations": [
                {"type": "url_citation", "url": "https://en.wikipedia.org/wiki/Paris", "start_index": 0,
                 "end_index": 5, "title": "Paris"}]}]}])),
        ("echoed_settings_response", "full", "response", _responses_response(
            [_message_item("Done.")], instructions=None, max_output_tokens=None, parallel_tool_calls=True,
            previous_response_id=None, reasoning={"effort": None, "summary": None}, store=True, temperature=1.0,
            text={"format": {"type": "text"}}, tool_choice="auto", tools=[], top_p=1.0, truncation="disabled",
            user=None, metadata={})),
        ("failed_response", "full", "response", _responses_response(
            [], "failed", error={"code": "server_error", "message": "The model crashed."})),
        # streaming
        ("stream_text", "streaming", "request", req(hello, stream=True)),
        ("stream_tools", "streaming", "request", req([user], tools=[weather], stream=True)),
        ("stream_reasoning", "streaming", "request", req(hello, model="o4-mini", stream=True,
                                                         reasoning={"effort": "low", "summary": "auto"})),
    ]


# ═══════════════════════════════════════════════════════════════════════════
# ACCESS
# ═══════════════════════════════════════════════════════════════════════════

_BUILDERS: Dict[ProviderFormat, Callable[[], List[tuple]]] = {
    ProviderFormat.OPENAI_CHAT: _chat,
    ProviderFormat.ANTHROPIC: _anthropic,
    ProviderFormat.GOOGLE: _google,
    ProviderFormat.OPENAI_RESPONSES: _responses,
}


def corpus(fmt: Optional[ProviderFormat] = None, category: Optional[str] = None,
           kind: Optional[str] = None) -> List[CorpusEntry]:
    """Corpus entries, optionally filtered; fresh bodies on every call."""
    entries = []
    for provider, build in _BUILDERS.items():
        if fmt is not None and provider != ProviderFormat(fmt):
            continue
        for name, entry_category, entry_kind, body in build():
            if category is not None and entry_category != category:
                continue
            if kind is not None and entry_kind != kind:
                continue
            hint = GOOGLE_MODEL if provider == ProviderFormat.GOOGLE and entry_kind == "request" else None
            entries.append(CorpusEntry(name, provider, entry_category, entry_kind, body, hint))
    return entries


def entry(key: str) -> CorpusEntry:
    """Look an entry up by ``<format>/<category>/<name>``."""
    for item in corpus():
        if item.key == key:
            return item
    raise KeyError(key)


__all__ = ["CATEGORIES", "CorpusEntry", "GOOGLE_MODEL", "TIME_SCHEMA", "WEATHER_SCHEMA", "corpus", "entry"]
