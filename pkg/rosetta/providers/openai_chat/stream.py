"""Chat Completions delta-chunk streaming.

Chat chunks carry no block boundaries: a block ends when the next delta
belongs to a different kind (or a different tool-call index), or when a
finish_reason arrives. Per-stream bookkeeping lives in
``ctx.provider_cursor``.
"""

from __future__ import annotations

from typing import Any, Dict, List

from rosetta.converters.base import StreamPayload
from rosetta.converters.context import StreamContext, WarningCode
from rosetta.converters.errors import ProtocolViolation, UnsupportedConstruct
from rosetta.converters.metadata import collect_extras, expect_object, pack, restore, shape
from rosetta.providers.common import map_reason
from rosetta.providers.openai_chat.ops import (
    FINISH_INVERSE,
    FINISH_REASONS,
    NS,
    usage_from_provider,
    usage_to_provider,
    writes_reasoning,
)

DONE = "[DONE]"

_CHUNK_KEYS = {"id", "object", "created", "model", "choices", "usage"}


# ═══════════════════════════════════════════════════════════════════════════
# PROVIDER CHUNKS -> IR EVENTS
# ═══════════════════════════════════════════════════════════════════════════

def _switch_block(ctx: StreamContext, kind: str, **tool: Any) -> int:
    """Close the active block unless it already has ``kind``; return the active index."""
    cursor = ctx.provider_cursor
    active = cursor.get("active")
    if active is not None and cursor.get("active_kind") == kind and kind != "tool_call":
        return active
    if active is not None:
        ctx.close_block(active)
    index = ctx.open_block(kind, **tool)
    cursor["active"], cursor["active_kind"] = index, kind
    return index


def _close_active(ctx: StreamContext) -> None:
    cursor = ctx.provider_cursor
    if cursor.get("active") is not None:
        ctx.close_block(cursor.pop("active"))
        cursor.pop("active_kind", None)


def _tool_deltas(ctx: StreamContext, calls: Any) -> None:
    cursor = ctx.provider_cursor
    blocks: Dict[int, int] = cursor.setdefault("tool_blocks", {})
    for call in calls or []:
        call = expect_object(call, f"$[{ctx.frame_ordinal}].choices[0].delta.tool_calls")
        position = call.get("index", 0)
        function = call.get("function") or {}
        if position not in blocks:
            if not call.get("id") or not function.get("name"):
                raise ProtocolViolation(
                    f"tool call {position} continues without having started", frame_ordinal=ctx.frame_ordinal,
                )
            blocks[position] = _switch_block(ctx, "tool_call", tool_call_id=call["id"], tool_name=function["name"])
        elif blocks[position] != cursor.get("active"):
            raise ProtocolViolation(
                f"tool call {position} resumed after another block started", frame_ordinal=ctx.frame_ordinal,
            )
        fragment = function.get("arguments")
        if fragment:
            ctx.append_tool_args(blocks[position], fragment)


def chunk_from_provider(chunk: StreamPayload, ctx: StreamContext) -> None:
    if chunk == DONE:
        _close_active(ctx)
        ctx.end_stream()
        return
    chunk = expect_object(chunk, f"$[{ctx.frame_ordinal}]")
    if "error" in chunk:
        error = chunk["error"] if isinstance(chunk["error"], dict) else {"message": chunk["error"]}
        raise ProtocolViolation(f"upstream error: {error.get('message')}", frame_ordinal=ctx.frame_ordinal)
    if not ctx.started:
        extras = collect_extras(ctx, chunk, _CHUNK_KEYS, "$", designated={"system_fingerprint", "service_tier"})
        ctx.start_stream(
            chunk.get("id") or "", chunk.get("model") or ctx.model_hint or "", chunk.get("created") or 0,
            provider_metadata=pack(ctx, NS, extras),
        )
    choices = chunk.get("choices") or []
    if len(choices) > 1 or any(choice.get("index", 0) != 0 for choice in choices):
        raise UnsupportedConstruct("streams with more than one choice are not supported", "$.choices")
    for choice in choices:
        delta = choice.get("delta") or {}
        if delta.get("reasoning_content"):
            ctx.emit_reasoning(_switch_block(ctx, "reasoning"), delta["reasoning_content"])
        for key in ("content", "refusal"):
            if delta.get(key):
                ctx.emit_text(_switch_block(ctx, "text"), delta[key])
        if delta.get("tool_calls"):
            _tool_deltas(ctx, delta["tool_calls"])
        raw_reason = choice.get("finish_reason")
        if raw_reason is not None:
            _close_active(ctx)
            reason, hint = map_reason(raw_reason, FINISH_REASONS, FINISH_INVERSE)
            ctx.defer_finish(reason, pack(ctx, NS, None, hint))
    if chunk.get("usage"):
        ctx.defer_usage(usage_from_provider(chunk["usage"], ctx, "$.usage"))


# ═══════════════════════════════════════════════════════════════════════════
# IR EVENTS -> PROVIDER CHUNKS
# ═══════════════════════════════════════════════════════════════════════════

def _chunk(ctx: StreamContext, delta: Dict[str, Any], finish_reason: Any = None) -> Dict[str, Any]:
    cursor = ctx.provider_cursor
    out = {
        "id": cursor.get("id", ""),
        "object": "chat.completion.chunk",
        "created": cursor.get("created", 0),
        "model": cursor.get("model", ""),
        "choices": [{"index": 0, "delta": delta, "finish_reason": finish_reason}],
    }
    return restore(ctx, out, cursor.get("start_metadata"), NS)


def event_to_provider(event: Any, ctx: StreamContext) -> List[StreamPayload]:
    cursor = ctx.provider_cursor
    kind = event.type
    if kind == "stream_start":
        cursor.update(id=event.response_id, model=event.model, created=event.created,
                      start_metadata=event.provider_metadata, tool_ordinal=-1)
        return [_chunk(ctx, {"role": "assistant", "content": ""})]
    if kind == "tool_call_start":
        cursor["tool_ordinal"] = cursor.get("tool_ordinal", -1) + 1
        cursor.setdefault("tool_positions", {})[event.block_index] = cursor["tool_ordinal"]
        call = {
            "index": cursor["tool_ordinal"],
            "id": event.tool_call_id,
            "type": "function",
            "function": {"name": event.tool_name, "arguments": ""},
        }
        return [_chunk(ctx, {"tool_calls": [call]})]
    if kind == "tool_call_delta":
        position = cursor.get("tool_positions", {}).get(event.block_index, 0)
        call = {"index": position, "function": {"arguments": event.arguments_fragment}}
        return [_chunk(ctx, {"tool_calls": [call]})]
    if kind == "text_delta":
        return [_chunk(ctx, {"content": event.text})]
    if kind == "reasoning_delta":
        if writes_reasoning(ctx, {}):
            return [_chunk(ctx, {"reasoning_content": event.text})]
        if not cursor.get("reasoning_warned"):
            cursor["reasoning_warned"] = True
            ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, "reasoning deltas are not supported by OpenAI Chat")
        return []
    if kind == "finish":
        hints = shape(ctx, event.provider_metadata, NS)
        return [_chunk(ctx, {}, hints.get("finish_reason", FINISH_INVERSE[event.finish_reason]))]
    if kind == "usage":
        out = _chunk(ctx, {})
        out["choices"] = []
        out["usage"] = usage_to_provider(event.usage, ctx)
        return [out]
    if kind == "stream_end":
        return [DONE]
    return []


def error_to_provider(message: str, ctx: StreamContext) -> List[StreamPayload]:
    return [{"error": {"message": message, "type": "upstream_error"}}, DONE]


__all__ = ["DONE", "chunk_from_provider", "error_to_provider", "event_to_provider"]
