"""Recorded-style SSE traces, at least six per provider.

A trace file starts with one ``# {json}`` header line (format, model,
capture date, name and, for Google, the chunk model) followed by the raw
event-stream bytes exactly as the provider sends them. The header is not
SSE, so :func:`split_trace` removes it before parsing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from rosetta import sse
from rosetta.ir.types import ProviderFormat

CAPTURED = "2025-06-02"

DIALECT = {
    ProviderFormat.OPENAI_CHAT: "openai",
    ProviderFormat.OPENAI_RESPONSES: "anthropic",
    ProviderFormat.ANTHROPIC: "anthropic",
    ProviderFormat.GOOGLE: "google",
}


@dataclass(frozen=True)
class SseTrace:
    name: str
    format: ProviderFormat
    model: str
    payloads: Tuple[Any, ...]
    text: str
    google_stream_mode: Optional[str] = None
    crlf: bool = False
    comments: Tuple[str, ...] = ()
    tags: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def header(self) -> Dict[str, Any]:
        header = {"format": self.format.value, "model": self.model, "captured": CAPTURED, "name": self.name}
        if self.google_stream_mode:
            header["google_stream_mode"] = self.google_stream_mode
        return header

    @property
    def cursor(self) -> Dict[str, Any]:
        return {"google_stream_mode": self.google_stream_mode} if self.google_stream_mode else {}

    def body(self) -> bytes:
        raw = b"".join(f": {comment}\n\n".encode() for comment in self.comments)
        raw += sse.encode_stream(self.payloads, DIALECT[self.format])
        return raw.replace(b"\n", b"\r\n") if self.crlf else raw

    def render(self) -> bytes:
        return ("# " + json.dumps(self.header, separators=(",", ":")) + "\n").encode() + self.body()


def split_trace(raw: bytes) -> Tuple[Dict[str, Any], bytes]:
    """Header and SSE body of a trace file; files without a header get ``{}``."""
    if not raw.startswith(b"#"):
        return {}, raw
    line, _, body = raw.partition(b"\n")
    return json.loads(line[1:].decode("utf-8").strip()), body


def trace_payloads(raw: bytes) -> List[Any]:
    _, body = split_trace(raw)
    return list(sse.payloads(sse.parse_bytes(body)))


# ═══════════════════════════════════════════════════════════════════════════
# OPENAI CHAT COMPLETIONS
# ═══════════════════════════════════════════════════════════════════════════

def _chunk(delta: Dict[str, Any], finish: Optional[str] = None, **extra: Any) -> Dict[str, Any]:
    body = {"id": "chatcmpl-B9MBs8CjcvOU2jLn4n570S5qMJKcT", "object": "chat.completion.chunk", "created": 1741569952,
            "model": "gpt-4o-2024-08-06", "choices": [{"index": 0, "delta": delta, "finish_reason": finish}]}
    body.update(extra)
    return body


def _usage_chunk(prompt: int, completion: int) -> Dict[str, Any]:
    return _chunk({}, choices=[], usage={"prompt_tokens": prompt, "completion_tokens": completion,
                                         "total_tokens": prompt + completion})


def _call_delta(position: int, call_id: Optional[str], name: Optional[str], arguments: str) -> Dict[str, Any]:
    call: Dict[str, Any] = {"index": position}
    if call_id:
        call.update(id=call_id, type="function")
    function: Dict[str, Any] = {"arguments": arguments}
    if name:
        function["name"] = name
    call["function"] = function
    return {"tool_calls": [call]}


def _chat_traces() -> List[SseTrace]:
    fmt, model = ProviderFormat.OPENAI_CHAT, "gpt-4o-2024-08-06"
    done = sse.DONE
    return [
        SseTrace("simple_text", fmt, model, (
            _chunk({"role": "assistant", "content": "", "refusal": None}),
            _chunk({"content": "Hello"}), _chunk({"content": "! How can"}), _chunk({"content": " I help?"}),
            _chunk({}, "stop"), _usage_chunk(9, 6), done), "Hello! How can I help?"),
        SseTrace("tool_call", fmt, model, (
            _chunk({"role": "assistant", "content": None, **_call_delta(0, "call_DdmO9pD3xa9XTPNJ32zg2hcA", "get_weather", "")}),
            _chunk(_call_delta(0, None, None, '{"ci')), _chunk(_call_delta(0, None, None, 'ty":"Par')),
            _chunk(_call_delta(0, None, None, 'is"}')), _chunk({}, "tool_calls"), done), ""),
        SseTrace("text_then_tool", fmt, model, (
            _chunk({"role": "assistant", "content": "Let me check."}),
            _chunk(_call_delta(0, "call_x1", "get_weather", '{"city":"Paris"}')),
            _chunk({}, "tool_calls"), done), "Let me check."),
        SseTrace("parallel_tool_calls", fmt, model, (
            _chunk({"role": "assistant", **_call_delta(0, "call_p1", "get_weather", '{"city":')}),
            _chunk(_call_delta(0, None, None, '"Paris"}')),
            _chunk(_call_delta(1, "call_p2", "get_time", '{"timezone":"Asia/Tokyo"}')),
            _chunk({}, "tool_calls"), _usage_chunk(40, 31), done), ""),
        SseTrace("reasoning_then_content", fmt, "deepseek-reasoner", (
            _chunk({"role": "assistant", "reasoning_content": "The user"}), _chunk({"reasoning_content": " greets me."}),
            _chunk({"content": "Hi there!"}), _chunk({}, "stop"), done), "Hi there!"),
        SseTrace("length_crlf", fmt, model, (
            _chunk({"role": "assistant", "content": "Once"}), _chunk({"content": " upon a"}),
            _chunk({}, "length"), done), "Once upon a", crlf=True),
        SseTrace("refusal", fmt, model, (
            _chunk({"role": "assistant", "content": None, "refusal": "I can't"}),
            _chunk({"refusal": " help with that."}), _chunk({}, "stop"), done), "I can't help with that."),
        SseTrace("finish_before_final_delta", fmt, model, (
            _chunk({"role": "assistant", "content": "Almost"}), _chunk({}, "stop"),
            _chunk({"content": " done."}), done), "Almost done.", tags=("late_delta",)),
        SseTrace("keepalive_comments", fmt, model, (
            _chunk({"role": "assistant", "content": "Hi"}), _chunk({}, "stop"), done), "Hi",
            comments=("keep-alive", "OPENROUTER PROCESSING")),
    ]


# ═══════════════════════════════════════════════════════════════════════════
# ANTHROPIC MESSAGES
# ═══════════════════════════════════════════════════════════════════════════

def _message_start(model: str, input_tokens: int = 25) -> Dict[str, Any]:
    return {"type": "message_start", "message": {
        "id": "msg_1nZdL29xx5MUA1yADyHTEsnR8uuvGzszyY", "type": "message", "role": "assistant", "model": model,
        "content": [], "stop_reason": None, "stop_sequence": None,
        "usage": {"input_tokens": input_tokens, "output_tokens": 1}}}


def _block_start(index: int, block: Dict[str, Any]) -> Dict[str, Any]:
    return {"type": "content_block_start", "index": index, "content_block": block}


def _delta(index: int, **delta: Any) -> Dict[str, Any]:
    return {"type": "content_block_delta", "index": index, "delta": delta}


def _block_stop(index: int) -> Dict[str, Any]:
    return {"type": "content_block_stop", "index": index}


def _message_delta(stop: str, output_tokens: int) -> Dict[str, Any]:
    return {"type": "message_delta", "delta": {"stop_reason": stop, "stop_sequence": None},
            "usage": {"output_tokens": output_tokens}}


STOP = {"type": "message_stop"}
PING = {"type": "ping"}


def _anthropic_traces() -> List[SseTrace]:
    fmt, model = ProviderFormat.ANTHROPIC, "claude-sonnet-4-20250514"
    text = {"type": "text", "text": ""}
    return [
        SseTrace("simple_text", fmt, model, (
            _message_start(model), _block_start(0, text), PING,
            _delta(0, type="text_delta", text="Hello"), _delta(0, type="text_delta", text="!"),
            _block_stop(0), _message_delta("end_turn", 15), STOP), "Hello!"),
        SseTrace("tool_use", fmt, model, (
            _message_start(model, 472),
            _block_start(0, {"type": "tool_use", "id": "toolu_01T1x1fJ34qAmk2tNTrN7Up6", "name": "get_weather", "input": {}}),
            _delta(0, type="input_json_delta", partial_json=""),
            _delta(0, type="input_json_delta", partial_json='{"city": "Pa'),
            _delta(0, type="input_json_delta", partial_json='ris"}'),
            _block_stop(0), _message_delta("tool_use", 89), STOP), ""),
        SseTrace("thinking_then_text", fmt, "claude-3-7-sonnet-20250219", (
            _message_start("claude-3-7-sonnet-20250219"),
            _block_start(0, {"type": "thinking", "thinking": ""}),
            _delta(0, type="thinking_delta", thinking="Check divisors"), _delta(0, type="thinking_delta", thinking=" up to 9."),
            _delta(0, type="signature_delta", signature="EqQBCgIYAhIM1gbcDa9GJwZA2b3hGgxBdjrkzLoky3dl1pkiMOYds"),
            _block_stop(0), _block_start(1, text), _delta(1, type="text_delta", text="Yes, 97 is prime."),
            _block_stop(1), _message_delta("end_turn", 40), STOP), "Yes, 97 is prime."),
        SseTrace("text_then_tool_use", fmt, model, (
            _message_start(model), _block_start(0, text), _delta(0, type="text_delta", text="Let me check."),
            _block_stop(0),
            _block_start(1, {"type": "tool_use", "id": "toolu_01B", "name": "get_weather", "input": {}}),
            _delta(1, type="input_json_delta", partial_json='{"city":"Paris"}'), _block_stop(1),
            _message_delta("tool_use", 30), STOP), "Let me check."),
        SseTrace("max_tokens", fmt, model, (
            _message_start(model), _block_start(0, text), _delta(0, type="text_delta", text="Once upon a"),
            _block_stop(0), _message_delta("max_tokens", 4), STOP), "Once upon a"),
        SseTrace("redacted_thinking_skipped", fmt, "claude-3-7-sonnet-20250219", (
            _message_start("claude-3-7-sonnet-20250219"),
            _block_start(0, {"type": "redacted_thinking", "data": "EmwKAhgBEgy3va3pzix/LafPsn4a"}), _block_stop(0),
            _block_start(1, text), _delta(1, type="text_delta", text="Done."), _block_stop(1),
            _message_delta("end_turn", 12), STOP), "Done."),
        SseTrace("finish_before_final_delta", fmt, model, (
            _message_start(model), _block_start(0, text), _delta(0, type="text_delta", text="Almost"),
            _message_delta("end_turn", 3), _delta(0, type="text_delta", text=" done."), _block_stop(0), STOP),
            "Almost done.", tags=("late_delta",)),
    ]


# ═══════════════════════════════════════════════════════════════════════════
# GOOGLE GENAI
# ═══════════════════════════════════════════════════════════════════════════

GOOGLE_MODEL = "gemini-2.5-flash"


def _candidate_chunk(parts: List[Dict[str, Any]], finish: Optional[str] = None,
                     usage: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    candidate: Dict[str, Any] = {"content": {"role": "model", "parts": parts}, "index": 0}
    if finish:
        candidate["finishReason"] = finish
    body: Dict[str, Any] = {"candidates": [candidate]}
    if usage:
        body["usageMetadata"] = usage
    body.update(modelVersion=GOOGLE_MODEL, responseId="mK2FaPaXLvC5nvgPqdWq4Ag")
    return body


def _google_usage(prompt: int, candidates: int, thoughts: int = 0) -> Dict[str, Any]:
    usage = {"promptTokenCount": prompt, "candidatesTokenCount": candidates,
             "totalTokenCount": prompt + candidates + thoughts}
    if thoughts:
        usage["thoughtsTokenCount"] = thoughts
    return usage


def _google_traces() -> List[SseTrace]:
    fmt = ProviderFormat.GOOGLE
    weather = {"functionCall": {"name": "get_weather", "args": {"city": "Paris"}}}
    return [
        SseTrace("accumulated_text", fmt, GOOGLE_MODEL, (
            _candidate_chunk([{"text": "Hel"}]), _candidate_chunk([{"text": "Hello"}]),
            _candidate_chunk([{"text": "Hello world"}], "STOP", _google_usage(5, 3))), "Hello world"),
        SseTrace("function_call", fmt, GOOGLE_MODEL, (
            _candidate_chunk([weather], "STOP", _google_usage(30, 7)),), ""),
        SseTrace("thought_then_text", fmt, GOOGLE_MODEL, (
            _candidate_chunk([{"text": "The user", "thought": True}]),
            _candidate_chunk([{"text": "The user greets me.", "thought": True}, {"text": "Hi"}]),
            _candidate_chunk([{"text": "The user greets me.", "thought": True}, {"text": "Hi there!"}],
                             "STOP", _google_usage(4, 3, 6))), "Hi there!"),
        SseTrace("incremental_text", fmt, GOOGLE_MODEL, (
            _candidate_chunk([{"text": "Hello"}]), _candidate_chunk([{"text": " world"}]),
            _candidate_chunk([{"text": "!"}], "STOP", _google_usage(5, 3))), "Hello world!",
            google_stream_mode="incremental"),
        SseTrace("incremental_function_call", fmt, GOOGLE_MODEL, (
            _candidate_chunk([{"text": "Checking."}]), _candidate_chunk([weather]),
            _candidate_chunk([], "STOP", _google_usage(30, 9))), "Checking.", google_stream_mode="incremental"),
        SseTrace("finish_before_final_delta", fmt, GOOGLE_MODEL, (
            _candidate_chunk([{"text": "Almost"}], "STOP"), _candidate_chunk([{"text": " done."}], None, _google_usage(4, 2))),
            "Almost done.", google_stream_mode="incremental", tags=("late_delta",)),
        SseTrace("accumulated_finish_before_final_delta", fmt, GOOGLE_MODEL, (
            _candidate_chunk([{"text": "Almost"}], "STOP"),
            _candidate_chunk([{"text": "Almost done."}], None, _google_usage(4, 2))),
            "Almost done.", tags=("late_delta",)),
        SseTrace("max_tokens", fmt, GOOGLE_MODEL, (
            _candidate_chunk([{"text": "Once"}]),
            _candidate_chunk([{"text": "Once upon a"}], "MAX_TOKENS", _google_usage(6, 4))), "Once upon a"),
        SseTrace("text_then_function_call", fmt, GOOGLE_MODEL, (
            _candidate_chunk([{"text": "Let me"}]), _candidate_chunk([{"text": "Let me check."}]),
            _candidate_chunk([{"text": "Let me check."}, weather], "STOP", _google_usage(30, 12))), "Let me check."),
    ]


# ═══════════════════════════════════════════════════════════════════════════
# OPENAI RESPONSES
# ═══════════════════════════════════════════════════════════════════════════

RESPONSE_ID = "resp_67c9fdcecf488190bdd9a0409de3a1ec07b8b0ad4e5eb654"
RESPONSES_MODEL = "gpt-4.1-2025-04-14"


class _Sequence:
    """Numbers events the way the API does."""

    def __init__(self):
        self.number = 0

    def __call__(self, kind: str, **fields: Any) -> Dict[str, Any]:
        event = {"type": kind, "sequence_number": self.number, **fields}
        self.number += 1
        return event


def _envelope(status: str, output: List[Dict[str, Any]], usage: Optional[Dict[str, Any]] = None,
              **extra: Any) -> Dict[str, Any]:
    body = {"id": RESPONSE_ID, "object": "response", "created_at": 1741290958, "status": status,
            "model": RESPONSES_MODEL, "output": output, "usage": usage}
    body.update(extra)
    return body


def _responses_usage(prompt: int, completion: int) -> Dict[str, Any]:
    return {"input_tokens": prompt, "output_tokens": completion, "total_tokens": prompt + completion}


def _text_events(seq: _Sequence, item: str, position: int, pieces: List[str], started: bool = False) -> List[Dict[str, Any]]:
    text = "".join(pieces)
    events = [] if started else [seq("response.output_item.added", output_index=position, item={
        "id": item, "type": "message", "status": "in_progress", "role": "assistant", "content": []})]
    events.append(seq("response.content_part.added", item_id=item, output_index=position, content_index=0,
                      part={"type": "output_text", "text": "", "annotations": []}))
    events.extend(seq("response.output_text.delta", item_id=item, output_index=position, content_index=0, delta=piece)
                  for piece in pieces)
    events.append(seq("response.output_text.done", item_id=item, output_index=position, content_index=0, text=text))
    events.append(seq("response.content_part.done", item_id=item, output_index=position, content_index=0,
                      part={"type": "output_text", "text": text, "annotations": []}))
    events.append(seq("response.output_item.done", output_index=position, item={
        "id": item, "type": "message", "status": "completed", "role": "assistant",
        "content": [{"type": "output_text", "text": text, "annotations": []}]}))
    return events


def _call_events(seq: _Sequence, item: str, position: int, pieces: List[str]) -> List[Dict[str, Any]]:
    arguments = "".join(pieces)
    base = {"id": item, "type": "function_call", "call_id": "call_unLAR8MvFNptuiZK6K6HCy5k", "name": "get_weather"}
    events = [seq("response.output_item.added", output_index=position,
                  item={**base, "arguments": "", "status": "in_progress"})]
    events.extend(seq("response.function_call_arguments.delta", item_id=item, output_index=position, delta=piece)
                  for piece in pieces)
    events.append(seq("response.function_call_arguments.done", item_id=item, output_index=position, arguments=arguments))
    events.append(seq("response.output_item.done", output_index=position,
                      item={**base, "arguments": arguments, "status": "completed"}))
    return events


def _responses_traces() -> List[SseTrace]:
    fmt = ProviderFormat.OPENAI_RESPONSES
    traces = []

    seq = _Sequence()
    traces.append(SseTrace("simple_text", fmt, RESPONSES_MODEL, tuple([
        seq("response.created", response=_envelope("in_progress", [])),
        seq("response.in_progress", response=_envelope("in_progress", [])),
        *_text_events(seq, "msg_67c9fdcf37fc8190ba82116e33fb28c5", 0, ["Hi", " there!"]),
        seq("response.completed", response=_envelope("completed", [], _responses_usage(37, 11))),
    ]), "Hi there!"))

    seq = _Sequence()
    traces.append(SseTrace("function_call", fmt, RESPONSES_MODEL, tuple([
        seq("response.created", response=_envelope("in_progress", [])),
        *_call_events(seq, "fc_67ca09c6bedc8190a7abfec07b1a1332", 0, ['{"', 'city', '":"', 'Paris', '"}']),
        seq("response.completed", response=_envelope("completed", [], _responses_usage(58, 17))),
    ]), ""))

    seq = _Sequence()
    reasoning = "rs_6820f383d7c08191846711c5df8233bc"
    traces.append(SseTrace("reasoning_then_text", fmt, "o4-mini-2025-04-16", tuple([
        seq("response.created", response=_envelope("in_progress", [])),
        seq("response.output_item.added", output_index=0, item={"id": reasoning, "type": "reasoning", "summary": []}),
        seq("response.reasoning_summary_part.added", item_id=reasoning, output_index=0, summary_index=0,
            part={"type": "summary_text", "text": ""}),
        seq("response.reasoning_summary_text.delta", item_id=reasoning, output_index=0, summary_index=0,
            delta="The user"),
        seq("response.reasoning_summary_text.delta", item_id=reasoning, output_index=0, summary_index=0,
            delta=" greets me."),
        seq("response.output_item.done", output_index=0, item={"id": reasoning, "type": "reasoning", "summary": [
            {"type": "summary_text", "text": "The user greets me."}]}),
        *_text_events(seq, "msg_6820f3842a7c", 1, ["Hello!"]),
        seq("response.completed", response=_envelope("completed", [], _responses_usage(10, 148))),
    ]), "Hello!"))

    seq = _Sequence()
    traces.append(SseTrace("incomplete", fmt, RESPONSES_MODEL, tuple([
        seq("response.created", response=_envelope("in_progress", [])),
        *_text_events(seq, "msg_a1", 0, ["Once", " upon a"]),
        seq("response.incomplete", response=_envelope(
            "incomplete", [], _responses_usage(12, 4), incomplete_details={"reason": "max_output_tokens"})),
    ]), "Once upon a"))

    seq = _Sequence()
    traces.append(SseTrace("text_then_function_call", fmt, RESPONSES_MODEL, tuple([
        seq("response.created", response=_envelope("in_progress", [])),
        *_text_events(seq, "msg_b2", 0, ["Let me", " check."]),
        *_call_events(seq, "fc_b3", 1, ['{"city":"Paris"}']),
        seq("response.completed", response=_envelope("completed", [], _responses_usage(40, 20))),
    ]), "Let me check."))

    seq = _Sequence()
    traces.append(SseTrace("annotated_text", fmt, RESPONSES_MODEL, tuple([
        seq("response.created", response=_envelope("in_progress", [])),
        seq("response.output_item.added", output_index=0, item={
            "id": "msg_c4", "type": "message", "status": "in_progress", "role": "assistant", "content": []}),
        seq("response.content_part.added", item_id="msg_c4", output_index=0, content_index=0,
            part={"type": "output_text", "text": "", "annotations": []}),
        seq("response.output_text.delta", item_id="msg_c4", output_index=0, content_index=0, delta="Paris."),
        seq("response.output_text.annotation.added", item_id="msg_c4", output_index=0, content_index=0,
            annotation_index=0, annotation={"type": "url_citation", "url": "https://en.wikipedia.org/wiki/Paris",
                                            "start_index": 0, "end_index": 5, "title": "Paris"}),
        seq("response.content_part.done", item_id="msg_c4", output_index=0, content_index=0,
            part={"type": "output_text", "text": "Paris.", "annotations": []}),
        seq("response.output_item.done", output_index=0, item={
            "id": "msg_c4", "type": "message", "status": "completed", "role": "assistant",
            "content": [{"type": "output_text", "text": "Paris.", "annotations": []}]}),
        seq("response.completed", response=_envelope("completed", [], _responses_usage(9, 2))),
    ]), "Paris."))

    return traces


_BUILDERS = {
    ProviderFormat.OPENAI_CHAT: _chat_traces,
    ProviderFormat.ANTHROPIC: _anthropic_traces,
    ProviderFormat.GOOGLE: _google_traces,
    ProviderFormat.OPENAI_RESPONSES: _responses_traces,
}


def traces(fmt: Optional[ProviderFormat] = None) -> List[SseTrace]:
    found = []
    for provider, build in _BUILDERS.items():
        if fmt is None or provider == ProviderFormat(fmt):
            found.extend(build())
    return found


__all__ = ["CAPTURED", "DIALECT", "SseTrace", "split_trace", "trace_payloads", "traces"]
